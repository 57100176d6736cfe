// Compiled with -mavx2 only; called exclusively through the dispatcher after a
// CPUID check.

#include "spdc/kernels.hpp"

#include <cassert>
#include <vector>

#include <immintrin.h>

namespace spdc::kernels::avx2 {

void sellmeier_index(const SellmeierCoefficients& c, std::span<const double> lambda_um,
                     std::span<double> n_out) {
  assert(n_out.size() >= lambda_um.size());
  const __m256d va = _mm256_set1_pd(c.a);
  const __m256d vb = _mm256_set1_pd(c.b);
  const __m256d vc = _mm256_set1_pd(c.c);
  const __m256d vd = _mm256_set1_pd(c.d);
  const __m256d ve = _mm256_set1_pd(c.e);
  const __m256d vf = _mm256_set1_pd(c.f);

  const std::size_t n = lambda_um.size();
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d l = _mm256_loadu_pd(lambda_um.data() + j);
    const __m256d l2 = _mm256_mul_pd(l, l);
    __m256d n2 = _mm256_add_pd(va, _mm256_div_pd(vb, _mm256_sub_pd(l2, vc)));
    n2 = _mm256_add_pd(n2, _mm256_div_pd(vd, _mm256_sub_pd(l2, ve)));
    n2 = _mm256_sub_pd(n2, _mm256_mul_pd(vf, l2));
    _mm256_storeu_pd(n_out.data() + j, _mm256_sqrt_pd(n2));
  }
  if (j < n) {
    scalar::sellmeier_index(c, lambda_um.subspan(j), n_out.subspan(j));
  }
}

void convolve_same(std::span<const double> in, std::span<const double> taps,
                   std::span<double> out) {
  assert(taps.size() % 2 == 1);
  assert(out.size() >= in.size());
  const std::size_t n = in.size();
  const std::size_t r = taps.size() / 2;

  // Zero-padded copy so the vector loop needs no bounds checks.
  std::vector<double> padded(n + 2 * r + 4, 0.0);
  std::copy(in.begin(), in.end(), padded.begin() + static_cast<std::ptrdiff_t>(r));

  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t t = 0; t < taps.size(); ++t) {
      const __m256d w = _mm256_set1_pd(taps[t]);
      const __m256d v = _mm256_loadu_pd(padded.data() + j + t);
      acc = _mm256_add_pd(acc, _mm256_mul_pd(w, v));
    }
    _mm256_storeu_pd(out.data() + j, acc);
  }
  for (; j < n; ++j) {
    double acc = 0.0;
    for (std::size_t t = 0; t < taps.size(); ++t) {
      acc = acc + taps[t] * padded[j + t];
    }
    out[j] = acc;
  }
}

double sum_abs2(std::span<const std::complex<double>> z) {
  const auto* p = reinterpret_cast<const double*>(z.data());
  const std::size_t n = z.size();
  // hadd of [r0 i0 r1 i1]^2 and [r2 i2 r3 i3]^2 yields |z0|^2 |z2|^2 |z1|^2 |z3|^2.
  __m256d acc = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d a = _mm256_loadu_pd(p + 2 * j);
    const __m256d b = _mm256_loadu_pd(p + 2 * j + 4);
    const __m256d s = _mm256_hadd_pd(_mm256_mul_pd(a, a), _mm256_mul_pd(b, b));
    acc = _mm256_add_pd(acc, s);
  }
  alignas(32) double tmp[4];
  _mm256_store_pd(tmp, acc);
  double lane[4] = {tmp[0], tmp[2], tmp[1], tmp[3]};
  for (; j < n; ++j) {
    const double re = z[j].real();
    const double im = z[j].imag();
    lane[j % 4] = lane[j % 4] + (re * re + im * im);
  }
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

}  // namespace spdc::kernels::avx2
