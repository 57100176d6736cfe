#pragma once

#include <map>
#include <string>

#include <nlohmann/json.hpp>

#include "spdc/dispersion.hpp"

namespace spdc::cli {

inline constexpr const char* kDesignSchemaVersion = "1.0";

struct DesignOptions {
  double pump_nm = 776.0;
  double tau_min_ps = 0.5;
  double tau_max_ps = 3.0;
  int grid_points = 512;
  double grid_bandwidths = 5.0;
};

/// Poling, GVM, pulse optimum, spatial design and predicted rates as one document.
/// Every numeric key ends in a unit suffix.
nlohmann::json design_report(const CrystalSpec& crystal, const DesignOptions& options);

/// Recomputes every pinned reference constant with the library.
std::map<std::string, double> golden_values(const CrystalSpec& crystal);

/// Diff of golden_values against the pinned file: {"entries": [...], "all_ok": bool}.
nlohmann::json golden_check(const CrystalSpec& crystal, const std::string& golden_path);

}  // namespace spdc::cli
