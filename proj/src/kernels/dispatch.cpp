#include "spdc/kernels.hpp"

#include <atomic>

#include "spdc/error.hpp"

namespace spdc::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

std::atomic<Isa>& active() {
  static std::atomic<Isa> isa{detected_isa()};
  return isa;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::avx2:
      return "avx2";
    case Isa::scalar:
      break;
  }
  return "scalar";
}

Isa detected_isa() {
  static const Isa isa = cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
  return isa;
}

Isa active_isa() { return active().load(std::memory_order_relaxed); }

void set_isa(Isa isa) {
  if (isa == Isa::avx2 && detected_isa() != Isa::avx2) isa = Isa::scalar;
  active().store(isa, std::memory_order_relaxed);
}

void sellmeier_index(const SellmeierCoefficients& c, std::span<const double> lambda_um,
                     std::span<double> n_out) {
  if (n_out.size() < lambda_um.size()) throw DomainError("sellmeier_index: output shorter than input");
  if (active_isa() == Isa::avx2) return avx2::sellmeier_index(c, lambda_um, n_out);
  scalar::sellmeier_index(c, lambda_um, n_out);
}

void convolve_same(std::span<const double> in, std::span<const double> taps,
                   std::span<double> out) {
  if (taps.size() % 2 == 0) throw DomainError("convolve_same: tap count must be odd");
  if (out.size() < in.size()) throw DomainError("convolve_same: output shorter than input");
  if (active_isa() == Isa::avx2) return avx2::convolve_same(in, taps, out);
  scalar::convolve_same(in, taps, out);
}

double sum_abs2(std::span<const std::complex<double>> z) {
  if (active_isa() == Isa::avx2) return avx2::sum_abs2(z);
  return scalar::sum_abs2(z);
}

}  // namespace spdc::kernels
