#pragma once

#include <complex>
#include <vector>

#include "spdc/dispersion.hpp"

namespace spdc {

/// Pump, signal and idler centers plus frequency detunings nu = omega - omega0.
struct ThreeWaveConfig {
  CrystalSpec crystal;
  double pump_nm = 776.0;
  double signal_nm = 1552.0;
  double idler_nm = 1552.0;
  double nu_s = 0.0;  // rad/fs
  double nu_i = 0.0;  // rad/fs

  /// Energy conservation at the centers, 1/lp = 1/ls + 1/li within relative 1e-9.
  void validate() const;

  static ThreeWaveConfig degenerate(CrystalSpec crystal, double pump_nm);
};

struct GvmReport {
  double ridge_slope = 0.0;
  bool positively_correlated = false;
  double kprime_pump = 0.0;    // fs/um
  double kprime_signal = 0.0;  // fs/um
  double kprime_idler = 0.0;   // fs/um
};

/// Delta k = k_p(w_s + w_i) - k_s(w_s) - k_i(w_i) - K_grating, rad/um.
/// Throws ConfigError when the crystal has no poling grating.
double delta_k_exact(const ThreeWaveConfig& cfg);

/// First-order expansion (nu_s + nu_i) k'_p - nu_s k'_s - nu_i k'_i about the centers.
double delta_k_linearized(const ThreeWaveConfig& cfg);

/// Group-velocity coefficients of the linearized mismatch at the centers.
struct MismatchSlopes {
  double kprime_pump = 0.0;
  double kprime_signal = 0.0;
  double kprime_idler = 0.0;

  double at(double nu_s, double nu_i) const {
    return (nu_s + nu_i) * kprime_pump - nu_s * kprime_signal - nu_i * kprime_idler;
  }
};

MismatchSlopes mismatch_slopes(const CrystalSpec& crystal, double pump_nm, double signal_nm,
                               double idler_nm);

/// First-order QPM grating that cancels the center mismatch: period = 2 pi / |k_p0 - k_s0 - k_i0|,
/// oriented against the sign of the mismatch.
PolingGrating solve_poling_period(const CrystalSpec& crystal, double pump_nm, double signal_nm,
                                  double idler_nm);

/// sinc(dk L / 2) exp(i dk L / 2).
std::complex<double> phase_matching_function(double delta_k, double length_mm);

/// Degenerate type-II GVM analysis at pump_nm with signal = idler = 2 pump_nm.
GvmReport gvm_report(const CrystalSpec& crystal, double pump_nm);

struct GvmScanRow {
  double pump_nm = 0.0;
  GvmReport report;
};

std::vector<GvmScanRow> gvm_scan(const CrystalSpec& crystal, double min_nm, double max_nm,
                                 double step_nm);

struct WavelengthWindow {
  double min_nm = 0.0;
  double max_nm = 0.0;
  bool found = false;

  double width() const { return found ? max_nm - min_nm : 0.0; }
};

/// Longest contiguous run of positively correlated scan rows.
WavelengthWindow positive_correlation_window(const std::vector<GvmScanRow>& scan);

}  // namespace spdc
