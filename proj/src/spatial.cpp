#include "spdc/spatial.hpp"

#include <cmath>

#include <fmt/format.h>

#include "spdc/error.hpp"
#include "spdc/units.hpp"

namespace spdc {

GaussianMode mode_from_divergence(double wavelength_nm, double divergence_mrad) {
  if (!(divergence_mrad > 0.0) || !(wavelength_nm > 0.0)) {
    throw DomainError(fmt::format("mode needs positive wavelength and divergence (got {} nm, {} mrad)",
                                  wavelength_nm, divergence_mrad));
  }
  const double w0 = units::nm_to_um(wavelength_nm) / (units::kPi * units::mrad_to_rad(divergence_mrad));
  return {wavelength_nm, w0, divergence_mrad};
}

GaussianMode mode_from_waist(double wavelength_nm, double waist_um) {
  if (!(waist_um > 0.0) || !(wavelength_nm > 0.0)) {
    throw DomainError(fmt::format("mode needs positive wavelength and waist (got {} nm, {} um)",
                                  wavelength_nm, waist_um));
  }
  const double theta = units::nm_to_um(wavelength_nm) / (units::kPi * waist_um);
  return {wavelength_nm, waist_um, units::rad_to_mrad(theta)};
}

double focusing_parameter(const CrystalSpec& crystal, const GaussianMode& pump) {
  const double kp = wavenumber_at(crystal.sellmeier, crystal.pump_axis,
                                  units::angular_frequency(pump.wavelength_nm));
  return crystal.length_um() / (kp * pump.waist_um * pump.waist_um);
}

GaussianMode optimal_pump_focus(const CrystalSpec& crystal, double pump_nm, double focusing) {
  crystal.validate();
  if (!(focusing > 0.0)) throw DomainError("focusing parameter must be > 0");
  crystal.sellmeier.check_range(crystal.pump_axis, pump_nm);
  const double kp =
      wavenumber_at(crystal.sellmeier, crystal.pump_axis, units::angular_frequency(pump_nm));
  const double waist = std::sqrt(crystal.length_um() / (kp * focusing));
  return mode_from_waist(pump_nm, waist);
}

std::pair<GaussianMode, GaussianMode> collection_modes(const GaussianMode& pump, double signal_nm,
                                                       double idler_nm) {
  const double w = std::sqrt(2.0) * pump.waist_um;
  return {mode_from_waist(signal_nm, w), mode_from_waist(idler_nm, w)};
}

SpatialDesign spatial_design(const CrystalSpec& crystal, double pump_nm) {
  SpatialDesign d;
  d.pump = optimal_pump_focus(crystal, pump_nm);
  std::tie(d.signal, d.idler) = collection_modes(d.pump, 2.0 * pump_nm, 2.0 * pump_nm);
  d.focusing_parameter = focusing_parameter(crystal, d.pump);
  return d;
}

}  // namespace spdc
