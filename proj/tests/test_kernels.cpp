#include <doctest.h>

#include <complex>
#include <cstring>
#include <random>
#include <vector>

#include "spdc/kernels.hpp"
#include "support.hpp"

using namespace spdc;
namespace k = spdc::kernels;

namespace {

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

std::vector<double> uniform(std::size_t n, double lo, double hi, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

}  // namespace

TEST_CASE("scalar convolution reference") {
  const std::vector<double> in{1, 2, 3, 4, 5};
  const std::vector<double> taps{0.25, 0.5, 0.25};
  std::vector<double> out(5);
  k::scalar::convolve_same(in, taps, out);
  CHECK(out[0] == doctest::Approx(0.5 * 1 + 0.25 * 2));
  CHECK(out[2] == doctest::Approx(0.25 * 2 + 0.5 * 3 + 0.25 * 4));
  CHECK(out[4] == doctest::Approx(0.25 * 4 + 0.5 * 5));
  const std::vector<double> identity{1.0};
  k::scalar::convolve_same(in, identity, out);
  CHECK(out == in);
}

TEST_CASE("scalar sum_abs2 reference") {
  const std::vector<std::complex<double>> z{{1, 2}, {3, 0}, {0, -1}, {2, 2}, {1, 1}};
  CHECK(k::scalar::sum_abs2(z) == doctest::Approx(5 + 9 + 1 + 8 + 2));
}

TEST_CASE("AVX2 variants are bit-identical to scalar") {
  if (k::detected_isa() != k::Isa::avx2) {
    MESSAGE("AVX2 not available on this CPU; equivalence not exercised");
    return;
  }
  for (std::size_t n : {1u, 3u, 4u, 5u, 17u, 512u, 1001u}) {
    CAPTURE(n);
    // Sellmeier over the whole validity range, every axis.
    auto lam = uniform(n, 0.43, 3.5, 11u + static_cast<unsigned>(n));
    for (Axis a : {Axis::x, Axis::y, Axis::z}) {
      std::vector<double> ns(n), nv(n);
      k::scalar::sellmeier_index(test::ktp().coefficients(a), lam, ns);
      k::avx2::sellmeier_index(test::ktp().coefficients(a), lam, nv);
      CHECK(same_bits(ns, nv));
    }
    // Convolution with several tap widths.
    const auto in = uniform(n, -1.0, 1.0, 21u + static_cast<unsigned>(n));
    for (std::size_t r : {0u, 1u, 4u, 13u}) {
      const auto taps = uniform(2 * r + 1, 0.0, 1.0, 31u + static_cast<unsigned>(r));
      std::vector<double> os(n), ov(n);
      k::scalar::convolve_same(in, taps, os);
      k::avx2::convolve_same(in, taps, ov);
      CHECK(same_bits(os, ov));
    }
    // Reduction.
    const auto re = uniform(n, -2.0, 2.0, 41u), im = uniform(n, -2.0, 2.0, 43u);
    std::vector<std::complex<double>> z(n);
    for (std::size_t j = 0; j < n; ++j) z[j] = {re[j], im[j]};
    const double ss = k::scalar::sum_abs2(z), sv = k::avx2::sum_abs2(z);
    CHECK(std::memcmp(&ss, &sv, sizeof(double)) == 0);
  }
}

TEST_CASE("dispatch selection") {
  const auto before = k::active_isa();
  k::set_isa(k::Isa::scalar);
  CHECK(k::active_isa() == k::Isa::scalar);
  k::set_isa(k::Isa::avx2);
  CHECK(k::active_isa() == k::detected_isa());
  k::set_isa(before);
  CHECK(k::isa_name(k::Isa::avx2) == "avx2");
}

TEST_CASE("even tap count is rejected") {
  const std::vector<double> in(8, 1.0), taps{0.5, 0.5};
  std::vector<double> out(8);
  CHECK_THROWS(k::convolve_same(in, taps, out));
}
