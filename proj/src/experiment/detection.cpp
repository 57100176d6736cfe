#include "spdc/experiment/detection.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/special_functions/gamma.hpp>
#include <fmt/format.h>

#include "spdc/error.hpp"

namespace spdc {

namespace {

bool is_fraction(double v) { return v >= 0.0 && v <= 1.0; }

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

std::uint64_t binomial(std::uint64_t n, double p, Rng& rng) {
  if (n == 0 || p <= 0.0) return 0;
  if (p >= 1.0) return n;
  std::binomial_distribution<std::uint64_t> dist(n, p);
  return dist(rng);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void DetectorSpec::validate() const {
  if (!is_fraction(efficiency)) throw ConfigError(fmt::format("detector efficiency {} not in [0,1]", efficiency));
  if (!is_fraction(dark_count_prob_per_gate)) {
    throw ConfigError(fmt::format("dark count probability {} not in [0,1]", dark_count_prob_per_gate));
  }
  if (!(gate_width_ns > 0.0)) throw ConfigError("gate width must be > 0");
  if (!(trigger_rate_MHz > 0.0)) throw ConfigError("trigger rate must be > 0");
}

void EfficiencyChain::validate() const {
  if (!is_fraction(optics_transmission)) {
    throw ConfigError(fmt::format("optics transmission {} not in [0,1]", optics_transmission));
  }
  if (!is_fraction(fiber_coupling)) {
    throw ConfigError(fmt::format("fiber coupling {} not in [0,1]", fiber_coupling));
  }
  detector.validate();
}

double chain_total(const EfficiencyChain& chain) {
  chain.validate();
  return chain.optics_transmission * chain.fiber_coupling * chain.detector.efficiency;
}

void SourceModel::validate() const {
  if (!(pair_rate_per_mW >= 0.0)) throw ConfigError("pair rate must be >= 0");
  if (!(laser_rep_rate_MHz > 0.0)) throw ConfigError("laser repetition rate must be > 0");
}

double SourceModel::mean_pairs_per_pulse_per_mW() const {
  return pair_rate_per_mW / (laser_rep_rate_MHz * 1e6);
}

double CountRecord::singles_geometric_mean() const {
  return std::sqrt(static_cast<double>(singles_a) * static_cast<double>(singles_b));
}

GateCounts simulate_gates(const GateModel& model, std::uint64_t gates, Rng& rng) {
  const double mu = model.mean_pairs;
  if (!(mu >= 0.0) || !std::isfinite(mu)) throw DomainError(fmt::format("mean pairs {} invalid", mu));
  const auto& pr = model.pair;
  if (!is_fraction(pr.a) || !is_fraction(pr.b) || !is_fraction(pr.both) || pr.both > std::min(pr.a, pr.b) + 1e-15) {
    throw DomainError("inconsistent per-pair detection probabilities");
  }

  GateCounts out;
  std::uint64_t remaining = gates;
  double pmf = std::exp(-mu);
  const double keep_a = 1.0 - model.dark_a;
  const double keep_b = 1.0 - model.dark_b;
  const double miss_pair_both = std::max(0.0, 1.0 - pr.a - pr.b + pr.both);

  for (unsigned m = 0; remaining > 0; ++m) {
    if (m > 0) pmf *= mu / m;
    // P(M >= m), computed directly to avoid cancellation in 1 - CDF.
    const double tail = (m == 0) ? 1.0 : boost::math::gamma_p(static_cast<double>(m), mu);
    const bool last = tail <= 0.0 || m >= 1000;
    const std::uint64_t n_m = last ? remaining : binomial(remaining, clamp01(pmf / tail), rng);
    remaining -= n_m;
    if (n_m == 0) continue;

    const double md = static_cast<double>(m);
    const double q_a = std::pow(1.0 - pr.a, md) * keep_a;        // A silent
    const double q_b = std::pow(1.0 - pr.b, md) * keep_b;        // B silent
    const double q_ab = std::pow(miss_pair_both, md) * keep_a * keep_b;  // both silent
    const double p_both = clamp01(1.0 - q_a - q_b + q_ab);
    const double p_a_only = clamp01(q_b - q_ab);
    const double p_b_only = clamp01(q_a - q_ab);

    const std::uint64_t both = binomial(n_m, p_both, rng);
    std::uint64_t rest = n_m - both;
    const double left = 1.0 - p_both;
    const std::uint64_t a_only = left > 0.0 ? binomial(rest, clamp01(p_a_only / left), rng) : 0;
    rest -= a_only;
    const double left2 = left - p_a_only;
    const std::uint64_t b_only = left2 > 0.0 ? binomial(rest, clamp01(p_b_only / left2), rng) : 0;

    out.coincidences += both;
    out.singles_a += both + a_only;
    out.singles_b += both + b_only;
  }
  return out;
}

CountRecord simulate_counts(const SourceModel& source, const EfficiencyChain& chain_a,
                            const EfficiencyChain& chain_b, double power_mW, double duration_s,
                            std::uint64_t seed) {
  source.validate();
  const double eta_a = chain_total(chain_a);
  const double eta_b = chain_total(chain_b);
  if (chain_a.detector.trigger_rate_MHz != chain_b.detector.trigger_rate_MHz) {
    throw ConfigError("both detectors must share one trigger");
  }
  if (chain_a.detector.trigger_rate_MHz > source.laser_rep_rate_MHz) {
    throw ConfigError("trigger rate exceeds the laser repetition rate");
  }
  if (!(power_mW >= 0.0)) throw DomainError(fmt::format("pump power {} mW must be >= 0", power_mW));
  if (!(duration_s > 0.0)) throw DomainError(fmt::format("duration {} s must be > 0", duration_s));

  CountRecord rec;
  rec.duration_s = duration_s;
  rec.pump_power_mW = power_mW;
  rec.gates = static_cast<std::uint64_t>(std::llround(chain_a.detector.trigger_rate_MHz * 1e6 * duration_s));

  GateModel model;
  model.mean_pairs = source.mean_pairs_per_pulse_per_mW() * power_mW;
  model.pair = {eta_a, eta_b, eta_a * eta_b};
  model.dark_a = chain_a.detector.dark_count_prob_per_gate;
  model.dark_b = chain_b.detector.dark_count_prob_per_gate;

  Rng rng(seed);
  const auto counts = simulate_gates(model, rec.gates, rng);
  rec.singles_a = counts.singles_a;
  rec.singles_b = counts.singles_b;
  rec.coincidences = counts.coincidences;
  rec.accidental_estimate = estimate_accidentals(static_cast<double>(rec.singles_a),
                                                 static_cast<double>(rec.singles_b),
                                                 static_cast<double>(rec.gates));
  return rec;
}

double estimate_accidentals(double singles_a, double singles_b, double gates) {
  if (!(gates > 0.0)) throw DomainError("accidental estimate needs a positive gate count");
  return singles_a * singles_b / gates;
}

double infer_pair_rate(double coincidence_rate_per_mW, double singles_efficiency) {
  if (!(singles_efficiency > 0.0) || singles_efficiency > 1.0) {
    throw DomainError(fmt::format("singles efficiency {} not in (0, 1]", singles_efficiency));
  }
  return coincidence_rate_per_mW / (singles_efficiency * singles_efficiency);
}

double coincidence_rate_per_mW(const CountRecord& record, const SourceModel& source,
                               const DetectorSpec& detector, bool subtract_accidentals) {
  if (!(record.pump_power_mW > 0.0) || !(record.duration_s > 0.0)) {
    throw DomainError("coincidence rate needs positive power and duration");
  }
  double c = static_cast<double>(record.coincidences);
  if (subtract_accidentals) c -= record.accidental_estimate;
  const double duty = detector.trigger_rate_MHz / source.laser_rep_rate_MHz;
  return c / (record.duration_s * record.pump_power_mW * duty);
}

}  // namespace spdc
