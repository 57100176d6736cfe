#include <doctest.h>

#include <cmath>
#include <random>

#include "spdc/error.hpp"
#include "spdc/experiment.hpp"
#include "spdc/units.hpp"

using namespace spdc;

namespace {

struct Fringe {
  std::vector<double> angles, counts, errors;
};

Fringe synthetic(double c0, double v, double theta0_deg, double w = 0.0) {
  Fringe f;
  for (int j = 0; j <= 18; ++j) {
    const double t = 10.0 * j;
    const double psi = 2.0 * units::deg_to_rad(t - theta0_deg);
    const double y = c0 * (1.0 - v * std::cos(psi) + w * std::sin(psi));
    f.angles.push_back(t);
    f.counts.push_back(y);
    f.errors.push_back(std::sqrt(std::max(1.0, y)));
  }
  return f;
}

VisibilityPipeline calibrated_pipeline() {
  VisibilityPipeline p;
  const double d = calibrate_waveplate_error(0.947);
  p.polarization = {d, d, 0.0};
  return p;
}

}  // namespace

TEST_CASE("noiseless fringe recovers V exactly") {
  for (double th : {-40.0, 0.0, 17.0, 80.0}) {
    const auto f = synthetic(3000.0, 0.947, th);
    const auto fit = fit_visibility(f.angles, f.counts, f.errors);
    CAPTURE(th);
    CHECK(std::abs(fit.visibility - 0.947) < 1e-6);
    CHECK(fit.amplitude == doctest::Approx(3000.0).epsilon(1e-8));
    CHECK(fit.chi2 < 1e-12);
    CHECK(fit.visibility_sigma > 0.0);
  }
  // Phase reported modulo the 180 deg fringe period.
  const auto f = synthetic(500.0, 0.6, 120.0);
  CHECK(fit_visibility(f.angles, f.counts, f.errors).phase_deg == doctest::Approx(-60.0).epsilon(1e-6));
}

TEST_CASE("fixed-phase fit measures the contrast along the reference axis") {
  // A full-contrast fringe shifted by 10 deg: contrast along the reference axis is cos(20 deg).
  const auto f = synthetic(2000.0, 1.0, -35.0);
  FringeFitOptions opt;
  opt.fixed_phase_deg = -45.0;
  const auto fit = fit_visibility(f.angles, f.counts, f.errors, opt);
  CHECK(fit.visibility == doctest::Approx(std::cos(units::deg_to_rad(20.0))).epsilon(1e-9));
  CHECK(fit.phase_deg == doctest::Approx(-45.0));
  CHECK(std::hypot(fit.visibility, fit.quadrature) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("Poisson-noised fringes: V within 3 sigma over 20 seeds") {
  const auto clean = synthetic(3000.0, 0.947, -45.0);
  int within = 0;
  for (unsigned seed = 0; seed < 20; ++seed) {
    std::mt19937_64 rng(seed);
    Fringe f = clean;
    for (std::size_t j = 0; j < f.counts.size(); ++j) {
      f.counts[j] = static_cast<double>(std::poisson_distribution<long>(clean.counts[j])(rng));
      f.errors[j] = std::sqrt(std::max(1.0, f.counts[j]));
    }
    const auto fit = fit_visibility(f.angles, f.counts, f.errors);
    if (std::abs(fit.visibility - 0.947) <= 3.0 * fit.visibility_sigma) ++within;
  }
  CHECK(within >= 19);
}

TEST_CASE("fit preconditions and failures") {
  const auto f = synthetic(1000.0, 0.9, 0.0);
  const std::vector<double> a5(f.angles.begin(), f.angles.begin() + 5), c5(f.counts.begin(), f.counts.begin() + 5),
      e5(f.errors.begin(), f.errors.begin() + 5);
  CHECK_THROWS_AS(fit_visibility(a5, c5, e5), DomainError);
  const std::vector<double> narrow{0, 10, 20, 30, 40, 50, 60, 70};
  const std::vector<double> ones(8, 1.0), counts(8, 5.0);
  CHECK_THROWS_AS(fit_visibility(narrow, counts, ones), DomainError);
  auto bad = f;
  bad.errors[3] = 0.0;
  CHECK_THROWS_AS(fit_visibility(bad.angles, bad.counts, bad.errors), DomainError);

  FringeFitOptions stop;
  stop.max_iterations = 0;
  try {
    fit_visibility(f.angles, f.counts, f.errors, stop);
    FAIL("expected FitError");
  } catch (const FitError& e) {
    CHECK(std::string(e.what()).find("residual") != std::string::npos);
  }
}

TEST_CASE("weighted line fit") {
  const std::vector<double> x{1, 2, 3, 4}, y{3, 5, 7, 9}, s{1, 1, 2, 2};
  const auto fit = fit_line(x, y, s);
  CHECK(fit.slope == doctest::Approx(2.0));
  CHECK(fit.intercept == doctest::Approx(1.0));
  CHECK(fit.slope_se > 0.0);
  const std::vector<double> same{2, 2, 2, 2};
  CHECK_THROWS_AS(fit_line(same, y, s), NumericError);
}

TEST_CASE("raw fringe visibility is below the subtracted one at 16 mW") {
  const auto row = measure_visibility(calibrated_pipeline(), 16.0, 7);
  CHECK(row.raw.visibility < row.subtracted.visibility);
  CHECK(std::abs(row.subtracted.visibility - 0.947) < 3.0 * row.subtracted.visibility_sigma);
}

TEST_CASE("fringe acquisition is deterministic") {
  const auto pipe = calibrated_pipeline();
  const auto state = displacer_state(pipe.polarization);
  const auto a = acquire_fringe(pipe.source, pipe.chain_a, pipe.chain_b, state, 16.0, pipe.fringe, 11);
  const auto b = acquire_fringe(pipe.source, pipe.chain_a, pipe.chain_b, state, 16.0, pipe.fringe, 11);
  CHECK(a.raw == b.raw);
  CHECK(a.subtracted == b.subtracted);
  CHECK(a.angles_deg.size() == 19);
}

TEST_CASE("visibility versus power") {
  std::vector<double> powers;
  for (int p = 2; p <= 30; p += 2) powers.push_back(p);
  const auto sweep = visibility_vs_power(calibrated_pipeline(), powers, 7);
  REQUIRE(sweep.rows.size() == powers.size());
  CHECK(sweep.raw_trend.slope < 0.0);
  CHECK(std::abs(sweep.raw_trend.slope) > 3.0 * sweep.raw_trend.slope_se);
  CHECK(std::abs(sweep.subtracted_trend.slope) <= 3.0 * sweep.subtracted_trend.slope_se);
  double mean = 0.0;
  for (const auto& r : sweep.rows) mean += r.subtracted.visibility / sweep.rows.size();
  CHECK(mean == doctest::Approx(0.94).epsilon(0.015));
  CHECK_THROWS_AS(visibility_vs_power(calibrated_pipeline(), {}, 7), ConfigError);
}

TEST_CASE("raw and subtracted visibilities meet at low power") {
  const auto pipe = calibrated_pipeline();
  const auto low = measure_visibility(pipe, 0.5, 3);
  const auto high = measure_visibility(pipe, 30.0, 3);
  const double gap_low = low.subtracted.visibility - low.raw.visibility;
  const double gap_high = high.subtracted.visibility - high.raw.visibility;
  CHECK(gap_low >= 0.0);
  CHECK(gap_low < 0.005);
  CHECK(gap_high > 10.0 * gap_low);
}
