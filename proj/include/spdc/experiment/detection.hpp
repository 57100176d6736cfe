#pragma once

#include <cstdint>
#include <random>

namespace spdc {

using Rng = std::mt19937_64;

/// Independent stream seed for sub-run `stream` of a seeded run (splitmix64 mix).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

struct DetectorSpec {
  double efficiency = 0.10;
  double gate_width_ns = 2.5;
  double trigger_rate_MHz = 4.75;
  double dark_count_prob_per_gate = 0.0;

  void validate() const;
};

struct EfficiencyChain {
  double optics_transmission = 0.38;
  double fiber_coupling = 0.50;
  DetectorSpec detector;

  void validate() const;
};

/// optics x coupling x detector efficiency.
double chain_total(const EfficiencyChain& chain);

struct SourceModel {
  double pair_rate_per_mW = 123000.0;  // pairs/s/mW into the collection modes
  double laser_rep_rate_MHz = 76.0;

  void validate() const;
  /// Mean pairs per pump pulse per mW.
  double mean_pairs_per_pulse_per_mW() const;
};

struct CountRecord {
  double duration_s = 0.0;
  double pump_power_mW = 0.0;
  std::uint64_t gates = 0;
  std::uint64_t singles_a = 0;
  std::uint64_t singles_b = 0;
  std::uint64_t coincidences = 0;
  double accidental_estimate = 0.0;

  double singles_geometric_mean() const;
};

/// Per-pair detection probabilities for the two arms. `both` is the probability that
/// one pair yields a detection in A and in B; it equals a * b for uncorrelated arms
/// and is smaller or larger when analyzers project the pair's polarization state.
struct PairDetection {
  double a = 0.0;
  double b = 0.0;
  double both = 0.0;
};

struct GateModel {
  double mean_pairs = 0.0;  // Poisson mean per gated pulse
  PairDetection pair;
  double dark_a = 0.0;
  double dark_b = 0.0;
};

struct GateCounts {
  std::uint64_t singles_a = 0;
  std::uint64_t singles_b = 0;
  std::uint64_t coincidences = 0;
};

/// Exact sampling of `gates` independent gated pulses. Pair numbers per gate are
/// Poisson(mean_pairs); the detector in an arm fires when any photon routed to it is
/// detected or a dark count occurs. Gates are grouped by pair number and by their
/// four detection outcomes, so the cost does not grow with the gate count.
GateCounts simulate_gates(const GateModel& model, std::uint64_t gates, Rng& rng);

/// Gated counting run with deterministic output for a fixed seed.
CountRecord simulate_counts(const SourceModel& source, const EfficiencyChain& chain_a,
                            const EfficiencyChain& chain_b, double power_mW, double duration_s,
                            std::uint64_t seed);

/// Uncorrelated-coincidence expectation singles_a * singles_b / gates.
double estimate_accidentals(double singles_a, double singles_b, double gates);

/// Pair rate from the coincidence rate and the single-arm detection efficiency: C / eta^2.
double infer_pair_rate(double coincidence_rate_per_mW, double singles_efficiency);

/// Coincidence rate per mW referred to the full pulse train: gated detection only
/// sees trigger_rate / rep_rate of the pulses.
double coincidence_rate_per_mW(const CountRecord& record, const SourceModel& source,
                               const DetectorSpec& detector, bool subtract_accidentals = false);

}  // namespace spdc
