#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "spdc/experiment.hpp"

namespace spdc::cli {

struct JsiRunConfig {
  double pump_nm = 776.0;
  double pump_duration_ps = 1.3;
  double resolution_nm = 0.3;
  double dwell_s = 200.0;
  int grid_points = 512;
  double grid_bandwidths = 5.0;
};

/// Simulation run configuration:
/// {power_mW, duration_s, seed, source, chain_A, chain_B, polarization, powers_mW, fringe, jsi}.
/// polarization takes {delta1_deg, delta2_deg, phi_rad} or {target_visibility, phi_rad}; the
/// latter calibrates a common wave-plate error.
struct RunConfig {
  double power_mW = 1.0;
  double duration_s = 100.0;
  std::uint64_t seed = 0;
  SourceModel source;
  EfficiencyChain chain_a;
  EfficiencyChain chain_b;
  PolarizationModel polarization;
  std::vector<double> powers_mW;
  FringeSettings fringe;
  bool basis_referenced = true;
  JsiRunConfig jsi;

  static RunConfig from_json(const nlohmann::json& doc);
  static RunConfig load(const std::filesystem::path& path);
};

nlohmann::json to_json(const CountRecord& record);

}  // namespace spdc::cli
