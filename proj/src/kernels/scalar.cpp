#include "spdc/kernels.hpp"

#include <cassert>
#include <cmath>

namespace spdc::kernels::scalar {

void sellmeier_index(const SellmeierCoefficients& c, std::span<const double> lambda_um,
                     std::span<double> n_out) {
  assert(n_out.size() >= lambda_um.size());
  for (std::size_t j = 0; j < lambda_um.size(); ++j) {
    const double l2 = lambda_um[j] * lambda_um[j];
    double n2 = c.a + c.b / (l2 - c.c);
    n2 = n2 + c.d / (l2 - c.e);
    n2 = n2 - c.f * l2;
    n_out[j] = std::sqrt(n2);
  }
}

void convolve_same(std::span<const double> in, std::span<const double> taps,
                   std::span<double> out) {
  assert(taps.size() % 2 == 1);
  assert(out.size() >= in.size());
  const auto n = static_cast<std::ptrdiff_t>(in.size());
  const auto r = static_cast<std::ptrdiff_t>(taps.size() / 2);
  for (std::ptrdiff_t j = 0; j < n; ++j) {
    double acc = 0.0;
    for (std::ptrdiff_t t = 0; t < static_cast<std::ptrdiff_t>(taps.size()); ++t) {
      const std::ptrdiff_t src = j + t - r;
      const double v = (src >= 0 && src < n) ? in[static_cast<std::size_t>(src)] : 0.0;
      acc = acc + taps[static_cast<std::size_t>(t)] * v;
    }
    out[static_cast<std::size_t>(j)] = acc;
  }
}

double sum_abs2(std::span<const std::complex<double>> z) {
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t j = 0; j < z.size(); ++j) {
    const double re = z[j].real();
    const double im = z[j].imag();
    lane[j % 4] = lane[j % 4] + (re * re + im * im);
  }
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

}  // namespace spdc::kernels::scalar
