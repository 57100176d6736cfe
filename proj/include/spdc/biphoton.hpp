#pragma once

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Core>

#include "spdc/dispersion.hpp"

namespace spdc {

/// Transform-limited Gaussian pump pulse.
struct PumpPulse {
  double center_nm = 776.0;
  double duration_ps = 1.3;  // intensity FWHM

  /// Angular-frequency intensity FWHM, 4 ln2 / tau (rad/fs).
  double bandwidth() const;
};

/// alpha(nu_s + nu_i) = exp(-nu^2 tau^2 / (8 ln 2)); real, peak 1.
std::complex<double> pump_envelope(const PumpPulse& pulse, double nu_sum);

/// Uniform detuning grid, symmetric about zero on both axes (rad/fs).
struct SpectralGrid {
  int points = 512;
  double half_range_s = 0.0;
  double half_range_i = 0.0;

  /// Default design grid: +-bandwidths pump intensity FWHMs per axis.
  static SpectralGrid around_pump(const PumpPulse& pulse, int points = 512, double bandwidths = 5.0);

  void validate() const;
  double step_s() const { return 2.0 * half_range_s / (points - 1); }
  double step_i() const { return 2.0 * half_range_i / (points - 1); }
  double nu_s(int j) const { return -half_range_s + step_s() * j; }
  double nu_i(int j) const { return -half_range_i + step_i() * j; }
  double cell_area() const { return step_s() * step_i(); }
};

using ComplexGrid =
    Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RealGrid = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// f(nu_s, nu_i) sampled on a grid; rows index signal detuning, columns idler.
struct JointAmplitude {
  SpectralGrid grid;
  double signal_center_nm = 0.0;
  double idler_center_nm = 0.0;
  ComplexGrid values;
  bool normalized = false;

  /// sum |f|^2 * cell area.
  double norm() const;
  void normalize();
  RealGrid intensity() const;
};

struct SchmidtResult {
  std::vector<double> coefficients;  // descending, sum 1
  double schmidt_number = 1.0;
  double purity = 1.0;
};

/// Pump envelope times the exact sinc phase-matching function, normalized. Solves for the
/// poling grating at the degenerate centers when the crystal has none.
JointAmplitude build_jsa(const CrystalSpec& crystal, const PumpPulse& pulse, const SpectralGrid& grid);

using PhaseMatchingFn = std::function<std::complex<double>(double nu_s, double nu_i)>;

/// Same construction with a caller-supplied phase-matching factor (fixtures, limits).
JointAmplitude build_jsa(const PumpPulse& pulse, const SpectralGrid& grid,
                         const PhaseMatchingFn& phase_matching);

SchmidtResult schmidt_decompose(const JointAmplitude& jsa);
SchmidtResult schmidt_decompose(const ComplexGrid& amplitude);

struct PulseSearchOptions {
  int grid_points = 512;
  double grid_bandwidths = 5.0;
  double coarse_step_ps = 0.1;
  double tolerance_ps = 0.01;
};

struct PulseOptimum {
  double duration_ps = 0.0;
  double schmidt_number = 0.0;
  /// Coarse minimum sat on an end of the search range.
  bool on_bracket_edge = false;
};

/// Schmidt number of the reference JSA for one pump duration.
double schmidt_number_for(const CrystalSpec& crystal, double pump_nm, double duration_ps,
                          const PulseSearchOptions& options = {});

/// Coarse scan then golden-section refinement of K(tau) over [min_ps, max_ps].
PulseOptimum optimal_pulse_duration(const CrystalSpec& crystal, double pump_nm, double min_ps,
                                    double max_ps, const PulseSearchOptions& options = {});

}  // namespace spdc
