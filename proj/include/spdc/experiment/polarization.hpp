#pragma once

#include <array>
#include <complex>

namespace spdc {

/// Pure two-photon polarization state, amplitudes in the order
/// |HH>, |HV>, |VH>, |VV> (signal first).
struct TwoPhotonState {
  std::array<std::complex<double>, 4> amplitude{};

  double norm() const;
};

/// Beam-displacer interferometer parameters: orientation errors of the two path
/// half-wave plates and the relative phase between the two down-conversion paths.
struct PolarizationModel {
  double delta1_deg = 0.0;
  double delta2_deg = 0.0;
  double phi_rad = 0.0;
};

/// Path 1 contributes |H>_s|V>_i; path 2 contributes the same pair with phase phi after
/// half-wave plates at 45 deg + delta1 (signal) and 45 deg + delta2 (idler). The
/// superposition is normalized; ideal plates give (|HV> + e^{i phi}|VH>)/sqrt(2).
TwoPhotonState displacer_state(const PolarizationModel& model);

/// Joint transmission probability through linear polarizers at theta_a, theta_b
/// (degrees from H). Throws DomainError when the state is not unit norm.
double coincidence_probability(const TwoPhotonState& state, double theta_a_deg, double theta_b_deg);

/// (P(t, t) - P(t, t+90)) / (P(t, t) + P(t, t+90)) with t = analyzer_deg; t = 45 gives the
/// +-45 deg basis visibility.
double basis_visibility(const TwoPhotonState& state, double analyzer_deg = 45.0);

/// Common wave-plate error delta1 = delta2 = delta (degrees, in [0, 22.5]) at which the
/// +-45 deg basis visibility equals target (phi = 0).
double calibrate_waveplate_error(double target_visibility);

}  // namespace spdc
