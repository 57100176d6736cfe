#include <doctest.h>

#include <cmath>
#include <random>

#include "spdc/error.hpp"
#include "spdc/experiment.hpp"
#include "support.hpp"

using namespace spdc;

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

std::vector<double> full_fringe_angles() {
  std::vector<double> a;
  for (int j = 0; j <= 36; ++j) a.push_back(5.0 * j);
  return a;
}

}  // namespace

TEST_CASE("ideal displacer gives the Bell state") {
  const auto s = displacer_state({0.0, 0.0, 0.0});
  CHECK(std::abs(s.amplitude[0]) < 1e-15);
  CHECK(s.amplitude[1].real() == doctest::Approx(kInvSqrt2).epsilon(1e-15));
  CHECK(s.amplitude[2].real() == doctest::Approx(kInvSqrt2).epsilon(1e-15));
  CHECK(std::abs(s.amplitude[3]) < 1e-15);
  CHECK(s.norm() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("phase flip gives the singlet-like state") {
  const auto s = displacer_state({0.0, 0.0, std::acos(-1.0)});
  CHECK(s.amplitude[1].real() == doctest::Approx(kInvSqrt2).epsilon(1e-15));
  CHECK(s.amplitude[2].real() == doctest::Approx(-kInvSqrt2).epsilon(1e-15));
  CHECK(std::abs(s.amplitude[2].imag()) < 1e-15);
}

TEST_CASE("ideal-state projections") {
  const auto s = displacer_state({});
  CHECK(coincidence_probability(s, 45.0, 45.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(coincidence_probability(s, 45.0, -45.0) < 1e-30);
  CHECK(basis_visibility(s) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("outcome probabilities sum to one for any unit state") {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> d;
  std::uniform_real_distribution<double> angle(-180.0, 180.0);
  for (int trial = 0; trial < 200; ++trial) {
    TwoPhotonState s;
    for (auto& a : s.amplitude) a = {d(rng), d(rng)};
    const double n = s.norm();
    for (auto& a : s.amplitude) a /= n;
    const double ta = angle(rng), tb = angle(rng);
    double total = 0.0;
    for (double da : {0.0, 90.0})
      for (double db : {0.0, 90.0}) total += coincidence_probability(s, ta + da, tb + db);
    CHECK(std::abs(total - 1.0) < 1e-12);
  }
}

TEST_CASE("unnormalized state is rejected") {
  TwoPhotonState s;
  s.amplitude = {1.0, 1.0, 0.0, 0.0};
  CHECK_THROWS_AS(coincidence_probability(s, 0.0, 0.0), DomainError);
}

TEST_CASE("full fringe of the ideal state has unit visibility") {
  const auto s = displacer_state({});
  std::vector<double> angles = full_fringe_angles(), counts, errors;
  for (double b : angles) {
    counts.push_back(1e4 * coincidence_probability(s, 45.0, b));
    errors.push_back(1.0);
  }
  const auto fit = fit_visibility(angles, counts, errors);
  CHECK(std::abs(fit.visibility - 1.0) < 1e-9);
}

TEST_CASE("wave-plate calibration") {
  const double d = calibrate_waveplate_error(0.947);
  CHECK(d == doctest::Approx(test::golden("waveplate_error_deg")).epsilon(1e-12));
  CHECK(basis_visibility(displacer_state({d, d, 0.0})) == doctest::Approx(0.947).epsilon(1e-12));
  // Analytic form for a common error: V = cos(4 delta).
  CHECK(d == doctest::Approx(std::acos(0.947) * 45.0 / std::acos(-1.0)).epsilon(1e-12));
  CHECK(calibrate_waveplate_error(1.0) == 0.0);
  CHECK_THROWS_AS(calibrate_waveplate_error(0.0), DomainError);
  CHECK_THROWS_AS(calibrate_waveplate_error(1.2), DomainError);
}
