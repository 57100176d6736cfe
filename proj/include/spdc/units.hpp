#pragma once

// Internal unit system: lengths in um, time in fs, angular frequency in rad/fs,
// wavenumbers in rad/um and inverse group velocities in fs/um. Public entry
// points take nm / mm / ps and convert here.

#include <numbers>

namespace spdc::units {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kLn2 = std::numbers::ln2;

/// Speed of light in vacuum, um/fs.
inline constexpr double kSpeedOfLight = 0.299792458;

constexpr double nm_to_um(double nm) { return nm * 1e-3; }
constexpr double um_to_nm(double um) { return um * 1e3; }
constexpr double mm_to_um(double mm) { return mm * 1e3; }
constexpr double ps_to_fs(double ps) { return ps * 1e3; }
constexpr double fs_to_ps(double fs) { return fs * 1e-3; }
constexpr double mrad_to_rad(double mrad) { return mrad * 1e-3; }
constexpr double rad_to_mrad(double rad) { return rad * 1e3; }
constexpr double deg_to_rad(double deg) { return deg * (kPi / 180.0); }
constexpr double rad_to_deg(double rad) { return rad * (180.0 / kPi); }

/// Vacuum wavelength (nm) -> angular frequency (rad/fs).
constexpr double angular_frequency(double lambda_nm) {
  return kTwoPi * kSpeedOfLight / nm_to_um(lambda_nm);
}

/// Angular frequency (rad/fs) -> vacuum wavelength (nm).
constexpr double wavelength_nm(double omega) {
  return um_to_nm(kTwoPi * kSpeedOfLight / omega);
}

/// Wavelength FWHM (nm) around lambda0 (nm) -> angular-frequency FWHM (rad/fs).
constexpr double bandwidth_nm_to_rad_per_fs(double fwhm_nm, double lambda0_nm) {
  const double l0 = nm_to_um(lambda0_nm);
  return kTwoPi * kSpeedOfLight * nm_to_um(fwhm_nm) / (l0 * l0);
}

}  // namespace spdc::units
