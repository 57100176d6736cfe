#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "spdc/experiment/detection.hpp"
#include "spdc/experiment/polarization.hpp"

namespace spdc {

struct FringeFitOptions {
  /// Pin theta0 (degrees) and fit a quadrature amplitude W instead:
  /// C0 [1 - V cos(2 (theta - theta0)) + W sin(2 (theta - theta0))]. V is then the
  /// contrast between the projections at theta0 and theta0 + 90 deg.
  std::optional<double> fixed_phase_deg;
  int max_iterations = 200;
};

/// C(theta) = C0 [1 - V cos(2 (theta - theta0))], V = sin^2(u) so 0 <= V <= 1.
struct FringeFit {
  double visibility = 0.0;
  double visibility_sigma = 0.0;
  double amplitude = 0.0;  // C0
  double phase_deg = 0.0;  // theta0
  double quadrature = 0.0;  // W, fixed-phase fits only
  double chi2 = 0.0;
  int dof = 0;
  int iterations = 0;
};

/// Weighted least squares (Levenberg-Marquardt). Needs >= 6 points spanning >= 90 deg
/// and positive errors; sigma_V comes from the fit covariance in (C0, V, theta0).
FringeFit fit_visibility(std::span<const double> angles_deg, std::span<const double> counts,
                         std::span<const double> errors, const FringeFitOptions& options = {});

struct FringeSettings {
  double analyzer_a_deg = 45.0;
  std::vector<double> analyzer_b_deg;  // empty: 0..180 deg in 10 deg steps
  double dwell_s = 300.0;

  std::vector<double> angles() const;
};

struct FringeData {
  double power_mW = 0.0;
  std::vector<double> angles_deg;
  std::vector<CountRecord> records;
  std::vector<double> raw;
  std::vector<double> subtracted;
  std::vector<double> sigma;  // Poisson error of the raw counts
};

/// Analyzer A fixed, analyzer B scanned; every angle is an independent gated run with
/// multipair accidentals. Deterministic given seed.
FringeData acquire_fringe(const SourceModel& source, const EfficiencyChain& chain_a,
                          const EfficiencyChain& chain_b, const TwoPhotonState& state,
                          double power_mW, const FringeSettings& settings, std::uint64_t seed);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
  double intercept_se = 0.0;
};

/// Weighted straight-line fit with known errors (unscaled covariance).
LinearFit fit_line(std::span<const double> x, std::span<const double> y, std::span<const double> sigma);

struct VisibilityPipeline {
  SourceModel source;
  EfficiencyChain chain_a;
  EfficiencyChain chain_b;
  PolarizationModel polarization;
  FringeSettings fringe;
  /// Fit with theta0 pinned to the +-45 deg basis minimum (theta0 = -analyzer_a).
  bool basis_referenced = true;
};

struct VisibilityRow {
  double power_mW = 0.0;
  FringeFit raw;
  FringeFit subtracted;
};

struct VisibilityVsPower {
  std::vector<VisibilityRow> rows;
  LinearFit raw_trend;
  LinearFit subtracted_trend;
};

VisibilityRow measure_visibility(const VisibilityPipeline& pipeline, double power_mW,
                                 std::uint64_t seed, FringeData* data = nullptr);

VisibilityVsPower visibility_vs_power(const VisibilityPipeline& pipeline,
                                      std::span<const double> powers_mW, std::uint64_t seed);

}  // namespace spdc
