#include <doctest.h>

#include <cmath>
#include <vector>

#include "spdc/error.hpp"
#include "spdc/experiment.hpp"

using namespace spdc;

namespace {

const SourceModel kSource;
const EfficiencyChain kChain;

double eta() { return chain_total(kChain); }

}  // namespace

TEST_CASE("efficiency chain") {
  CHECK(chain_total(kChain) == doctest::Approx(0.019).epsilon(1e-12));
  EfficiencyChain ideal{1.0, 1.0, DetectorSpec{1.0}};
  CHECK(chain_total(ideal) == 1.0);
  EfficiencyChain dead = kChain;
  dead.fiber_coupling = 0.0;
  CHECK(chain_total(dead) == 0.0);
  dead.fiber_coupling = 1.5;
  CHECK_THROWS_AS(chain_total(dead), ConfigError);
}

TEST_CASE("dark source gives no counts") {
  const auto r = simulate_counts(kSource, kChain, kChain, 0.0, 100.0, 3);
  CHECK(r.singles_a == 0);
  CHECK(r.singles_b == 0);
  CHECK(r.coincidences == 0);
  CHECK(r.gates == 475000000ULL);
}

TEST_CASE("reference rates at 1 mW over 100 s") {
  const double mu = kSource.mean_pairs_per_pulse_per_mW();
  CHECK(mu == doctest::Approx(1.618e-3).epsilon(1e-3));
  const double singles = mu * eta() * 4.75e6 * 100.0;
  const double coinc = mu * eta() * eta() * 4.75e6 * 100.0;
  CHECK(singles == doctest::Approx(1.46e4).epsilon(0.01));
  CHECK(coinc == doctest::Approx(277.0).epsilon(0.01));
  double sum_s = 0.0, sum_c = 0.0;
  for (unsigned seed = 0; seed < 20; ++seed) {
    const auto r = simulate_counts(kSource, kChain, kChain, 1.0, 100.0, seed);
    CHECK(std::abs(r.singles_a - singles) < 4.0 * std::sqrt(singles));
    CHECK(std::abs(r.coincidences - coinc) < 4.0 * std::sqrt(coinc));
    sum_s += r.singles_a;
    sum_c += r.coincidences;
  }
  CHECK(std::abs(sum_s / 20.0 - singles) < 3.0 * std::sqrt(singles / 20.0));
  CHECK(std::abs(sum_c / 20.0 - coinc) < 3.0 * std::sqrt(coinc / 20.0));
}

TEST_CASE("coincidences never exceed singles") {
  for (unsigned seed = 0; seed < 30; ++seed) {
    for (double p : {0.0, 1.0, 30.0, 3000.0}) {
      EfficiencyChain b = kChain;
      b.detector.dark_count_prob_per_gate = 1e-4 * seed;
      const auto r = simulate_counts(kSource, kChain, b, p, 1.0 + seed, seed);
      CHECK(r.coincidences <= std::min(r.singles_a, r.singles_b));
    }
  }
}

TEST_CASE("fixed seed is bit-reproducible") {
  const auto a = simulate_counts(kSource, kChain, kChain, 16.0, 50.0, 99);
  const auto b = simulate_counts(kSource, kChain, kChain, 16.0, 50.0, 99);
  CHECK(a.singles_a == b.singles_a);
  CHECK(a.singles_b == b.singles_b);
  CHECK(a.coincidences == b.coincidences);
  CHECK(a.accidental_estimate == b.accidental_estimate);
  const auto c = simulate_counts(kSource, kChain, kChain, 16.0, 50.0, 100);
  CHECK(a.singles_a != c.singles_a);
}

TEST_CASE("singles are linear in pump power") {
  std::vector<double> x, y;
  for (int p = 1; p <= 30; ++p) {
    const auto r = simulate_counts(kSource, kChain, kChain, p, 100.0, derive_seed(5, p));
    x.push_back(p);
    y.push_back(r.singles_geometric_mean());
  }
  const std::vector<double> ones(x.size(), 1.0);
  const auto fit = fit_line(x, y, ones);
  double mean = 0.0, ss_tot = 0.0, ss_res = 0.0;
  for (double v : y) mean += v / y.size();
  for (std::size_t j = 0; j < x.size(); ++j) {
    ss_tot += (y[j] - mean) * (y[j] - mean);
    const double r = y[j] - fit.intercept - fit.slope * x[j];
    ss_res += r * r;
  }
  CHECK(1.0 - ss_res / ss_tot > 0.999);
}

TEST_CASE("coincidence curvature follows the second-order multipair term") {
  // E[C]/gate = mu eta^2 + mu^2 eta^2 (1 - 2 eta + eta^2 / 2) + O(mu^3).
  const double duration = 1e5;
  const double gates = 4.75e6 * duration;
  std::vector<double> c;
  for (double p : {10.0, 20.0, 30.0}) {
    c.push_back(static_cast<double>(simulate_counts(kSource, kChain, kChain, p, duration, 17).coincidences));
  }
  const double dmu = 10.0 * kSource.mean_pairs_per_pulse_per_mW();
  const double e = eta();
  const double expected = 2.0 * dmu * dmu * e * e * (1.0 - 2.0 * e + 0.5 * e * e) * gates;
  const double second = c[2] - 2.0 * c[1] + c[0];
  const double sigma = std::sqrt(c[2] + 4.0 * c[1] + c[0]);
  CHECK(second > 0.0);
  CHECK(std::abs(second - expected) < 4.0 * sigma);
}

TEST_CASE("accidental estimator") {
  CHECK(estimate_accidentals(1000, 1000, 1e6) == doctest::Approx(1.0));
  CHECK(estimate_accidentals(0, 500, 1e6) == 0.0);
  CHECK(estimate_accidentals(500, 0, 1e6) == 0.0);
  for (double a : {3.0, 170.0, 2e5})
    for (double b : {9.0, 4e4}) CHECK(estimate_accidentals(a, b, 1e7) == estimate_accidentals(b, a, 1e7));
  CHECK_THROWS_AS(estimate_accidentals(1, 1, 0), DomainError);
}

TEST_CASE("accidental estimator matches independent processes") {
  GateModel model;
  model.dark_a = 1e-3;
  model.dark_b = 2e-3;
  double total_c = 0.0, total_est = 0.0;
  for (unsigned seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    const std::uint64_t gates = 5'000'000;
    const auto g = simulate_gates(model, gates, rng);
    const double est = estimate_accidentals(g.singles_a, g.singles_b, gates);
    CHECK(std::abs(g.coincidences - est) < 4.0 * std::sqrt(est));
    total_c += g.coincidences;
    total_est += est;
  }
  CHECK(std::abs(total_c - total_est) < 3.0 * std::sqrt(total_est));
}

TEST_CASE("pair-rate inference") {
  CHECK(infer_pair_rate(44.4, 0.019) == doctest::Approx(123000.0).epsilon(1e-3));
  CHECK(infer_pair_rate(44.4, 1.0) == 44.4);
  CHECK_THROWS_AS(infer_pair_rate(44.4, 0.0), DomainError);
  CHECK_THROWS_AS(infer_pair_rate(44.4, 1.1), DomainError);
}

TEST_CASE("pair-rate round trip over 20 seeds") {
  int within = 0;
  for (unsigned seed = 0; seed < 20; ++seed) {
    const auto r = simulate_counts(kSource, kChain, kChain, 1.0, 100.0, derive_seed(2024, seed));
    const double rate = infer_pair_rate(coincidence_rate_per_mW(r, kSource, kChain.detector), eta());
    const double sigma = rate / std::sqrt(static_cast<double>(r.coincidences));
    if (std::abs(rate - kSource.pair_rate_per_mW) <= 3.0 * sigma) ++within;
  }
  CHECK(within >= 19);
}

TEST_CASE("gated rate refers counts to the full pulse train") {
  CountRecord r;
  r.duration_s = 10.0;
  r.pump_power_mW = 2.0;
  r.coincidences = 160;
  r.accidental_estimate = 20.0;
  const double duty = 4.75 / 76.0;
  CHECK(coincidence_rate_per_mW(r, kSource, kChain.detector) == doctest::Approx(160.0 / 20.0 / duty));
  CHECK(coincidence_rate_per_mW(r, kSource, kChain.detector, true) == doctest::Approx(140.0 / 20.0 / duty));
}

TEST_CASE("configuration errors") {
  EfficiencyChain other = kChain;
  other.detector.trigger_rate_MHz = 5.0;
  CHECK_THROWS_AS(simulate_counts(kSource, kChain, other, 1.0, 1.0, 0), ConfigError);
  other.detector.trigger_rate_MHz = 100.0;
  CHECK_THROWS_AS(simulate_counts(kSource, other, other, 1.0, 1.0, 0), ConfigError);
  CHECK_THROWS_AS(simulate_counts(kSource, kChain, kChain, -1.0, 1.0, 0), DomainError);
  CHECK_THROWS_AS(simulate_counts(kSource, kChain, kChain, 1.0, 0.0, 0), DomainError);
  GateModel bad{0.1, {0.1, 0.1, 0.5}, 0.0, 0.0};
  Rng rng(1);
  CHECK_THROWS_AS(simulate_gates(bad, 10, rng), DomainError);
}

TEST_CASE("seed derivation separates streams") {
  CHECK(derive_seed(7, 0) != derive_seed(7, 1));
  CHECK(derive_seed(7, 0) != derive_seed(8, 0));
  CHECK(derive_seed(7, 3) == derive_seed(7, 3));
}
