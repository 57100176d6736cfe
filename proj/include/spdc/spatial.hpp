#pragma once

// Calibrated Gaussian-mode model of the spatial design point. It is a model, not a
// first-principles overlap calculation: a single focusing constant is tuned so the
// 20 mm KTP / 776 nm reference reproduces a 13.1 mrad pump, and the collection
// modes follow from the pump mode by a fixed sqrt(2) waist ratio.
//
// Divergence convention: far-field half angle of the 1/e field amplitude,
// theta = lambda / (pi w0), with lambda the vacuum wavelength.

#include <utility>

#include "spdc/dispersion.hpp"

namespace spdc {

struct GaussianMode {
  double wavelength_nm = 0.0;
  double waist_um = 0.0;
  double divergence_mrad = 0.0;
};

/// Focusing parameter xi = L / (k_p w_p^2) that reproduces the reference design.
/// Derived by inverting xi at the 13.1 mrad pump mode with the bundled KTP data
/// (20 mm, 776 nm, y-polarized pump); see tests/oracles/golden.py.
inline constexpr double kOptimalFocusingParameter = 3.951810135095633;

GaussianMode mode_from_divergence(double wavelength_nm, double divergence_mrad);
GaussianMode mode_from_waist(double wavelength_nm, double waist_um);

/// xi = L / (k_p w^2), k_p the pump wavenumber inside the crystal.
double focusing_parameter(const CrystalSpec& crystal, const GaussianMode& pump);

/// Pump mode focused at the crystal center with xi = focusing.
GaussianMode optimal_pump_focus(const CrystalSpec& crystal, double pump_nm,
                                double focusing = kOptimalFocusingParameter);

/// Matched single-mode collection modes: waist sqrt(2) times the pump waist.
std::pair<GaussianMode, GaussianMode> collection_modes(const GaussianMode& pump, double signal_nm,
                                                       double idler_nm);

struct SpatialDesign {
  GaussianMode pump;
  GaussianMode signal;
  GaussianMode idler;
  double focusing_parameter = 0.0;
};

SpatialDesign spatial_design(const CrystalSpec& crystal, double pump_nm);

}  // namespace spdc
