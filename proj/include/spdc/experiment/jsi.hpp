#pragma once

#include <cstdint>

#include "spdc/biphoton.hpp"
#include "spdc/experiment/detection.hpp"

namespace spdc {

struct JsiScanOptions {
  double resolution_nm = 0.3;  // monochromator passband FWHM per arm
  double power_mW = 25.0;
  double dwell_s = 200.0;
  SourceModel source;
  EfficiencyChain chain_a;  // signal arm
  EfficiencyChain chain_b;  // idler arm
  /// false: expectation values instead of sampled counts.
  bool poisson = true;
};

/// One coincidence map per monochromator setting pair, on the JSA grid.
struct JsiScan {
  SpectralGrid grid;
  double signal_center_nm = 0.0;
  double idler_center_nm = 0.0;
  std::uint64_t gates_per_setting = 0;
  RealGrid raw;          // coincidences
  RealGrid accidentals;  // singles_a * singles_b / gates per setting
  RealGrid subtracted;   // raw - accidentals

  double signal_nm(int j) const;
  double idler_nm(int j) const;
};

/// Gaussian instrument response of the given wavelength FWHM in each arm applied to
/// |f|^2, scaled through the source rate and both chains, sampled with multipair
/// statistics, accidental floor subtracted. Deterministic given seed.
JsiScan simulate_jsi_scan(const JointAmplitude& jsa, const JsiScanOptions& options, std::uint64_t seed);

/// |f|^2 blurred by the instrument response (same normalization as |f|^2).
RealGrid blur_intensity(const JointAmplitude& jsa, double resolution_nm);

/// Schmidt number of a measured intensity map under a flat-phase assumption.
SchmidtResult schmidt_from_intensity(const RealGrid& intensity);

}  // namespace spdc
