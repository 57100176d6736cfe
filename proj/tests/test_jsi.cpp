#include <doctest.h>

#include <cmath>

#include "spdc/error.hpp"
#include "spdc/experiment.hpp"
#include "support.hpp"

using namespace spdc;

namespace {

JointAmplitude reference_jsa(double tau_ps, int points = 512) {
  const PumpPulse p{776.0, tau_ps};
  return build_jsa(test::reference_crystal(), p, SpectralGrid::around_pump(p, points));
}

JointAmplitude separable_jsa(int points) {
  JointAmplitude jsa;
  const PumpPulse p{776.0, 1.5};
  jsa.grid = SpectralGrid::around_pump(p, points);
  jsa.signal_center_nm = 1552.0;
  jsa.idler_center_nm = 1552.0;
  jsa.values.resize(points, points);
  const double ws = 0.3 * jsa.grid.half_range_s, wi = 0.2 * jsa.grid.half_range_i;
  for (int r = 0; r < points; ++r) {
    for (int c = 0; c < points; ++c) {
      const double xs = (jsa.grid.nu_s(r) - 0.1 * ws) / ws, xi = jsa.grid.nu_i(c) / wi;
      jsa.values(r, c) = std::exp(-0.5 * xs * xs) * (1.0 + 0.5 * xi) * std::exp(-0.5 * xi * xi);
    }
  }
  jsa.normalize();
  return jsa;
}

}  // namespace

TEST_CASE("delta-like resolution reproduces |f|^2 in the expectation") {
  const auto jsa = reference_jsa(1.9, 96);
  JsiScanOptions opt;
  opt.resolution_nm = 1e-6;
  opt.power_mW = 0.01;
  opt.poisson = false;
  const auto scan = simulate_jsi_scan(jsa, opt, 7);
  const RealGrid truth = jsa.intensity();
  const double scale = scan.subtracted.sum() / truth.sum();
  CHECK(scale > 0.0);
  CHECK((scan.subtracted - scale * truth).cwiseAbs().maxCoeff() < 1e-4 * scan.subtracted.maxCoeff());
}

TEST_CASE("separable intensity has unit Schmidt number") {
  const auto jsa = separable_jsa(128);
  CHECK(schmidt_from_intensity(jsa.intensity()).schmidt_number == doctest::Approx(1.0).epsilon(1e-6));
  // The blur is separable, so the product structure survives it.
  CHECK(schmidt_from_intensity(blur_intensity(jsa, 0.3)).schmidt_number == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("intensity proxies match the oracle") {
  for (auto [tau, tag] : {std::pair{1.3, std::string("1p3ps")}, std::pair{1.9, std::string("1p9ps")}}) {
    const auto jsa = reference_jsa(tau);
    CAPTURE(tau);
    CHECK(schmidt_from_intensity(jsa.intensity()).schmidt_number ==
          doctest::Approx(test::golden("intensity_schmidt_tau_" + tag)).epsilon(1e-8));
    CHECK(schmidt_from_intensity(blur_intensity(jsa, 0.3)).schmidt_number ==
          doctest::Approx(test::golden("blurred_intensity_schmidt_tau_" + tag)).epsilon(1e-7));
  }
}

TEST_CASE("blur conserves the total and broadens the map") {
  const auto jsa = reference_jsa(1.3, 128);
  const RealGrid exact = jsa.intensity();
  const RealGrid blurred = blur_intensity(jsa, 0.3);
  CHECK(blurred.sum() == doctest::Approx(exact.sum()).epsilon(1e-3));
  CHECK(blurred.maxCoeff() < exact.maxCoeff());
  CHECK(blurred.minCoeff() >= 0.0);
}

TEST_CASE("noisy scan at 1.9 ps") {
  const auto jsa = reference_jsa(1.9);
  const auto scan = simulate_jsi_scan(jsa, JsiScanOptions{}, 7);
  const double k = schmidt_from_intensity(scan.subtracted).schmidt_number;
  const double proxy = test::golden("blurred_intensity_schmidt_tau_1p9ps");
  CHECK(k >= proxy - 0.02);
  CHECK(k >= 1.08);
  CHECK(k <= 1.25);
  CHECK((scan.subtracted.array() == (scan.raw - scan.accidentals).array()).all());
  CHECK(scan.gates_per_setting > 0);
  CHECK(scan.signal_nm(0) > scan.signal_nm(511));

  const auto again = simulate_jsi_scan(jsa, JsiScanOptions{}, 7);
  CHECK(again.raw == scan.raw);
  const auto other = simulate_jsi_scan(jsa, JsiScanOptions{}, 8);
  CHECK(other.raw != scan.raw);
}

TEST_CASE("scan errors") {
  const auto jsa = reference_jsa(1.9, 64);
  JsiScanOptions wide;
  wide.resolution_nm = 500.0;
  CHECK_THROWS_AS(simulate_jsi_scan(jsa, wide, 7), ConfigError);
  JointAmplitude raw = jsa;
  raw.normalized = false;
  CHECK_THROWS_AS(simulate_jsi_scan(raw, JsiScanOptions{}, 7), DomainError);
  CHECK_THROWS_AS(schmidt_from_intensity(RealGrid::Zero(8, 8)), DomainError);
}
