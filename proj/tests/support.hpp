#pragma once

#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "spdc/dispersion.hpp"

namespace spdc::test {

inline const nlohmann::json& golden_file() {
  static const nlohmann::json doc = [] {
    std::ifstream in(SPDC_DATA_DIR "/golden.json");
    return nlohmann::json::parse(in);
  }();
  return doc;
}

/// Pinned value from the independent numpy oracle (tests/oracles/golden.py).
inline double golden(const std::string& name) { return golden_file().at(name).at("value").get<double>(); }
inline double golden_tol(const std::string& name) { return golden_file().at(name).at("tolerance").get<double>(); }

inline const SellmeierSet& ktp() {
  static const SellmeierSet set = SellmeierSet::load(SPDC_DATA_DIR "/ktp.json");
  return set;
}

inline CrystalSpec reference_crystal() { return CrystalSpec{ktp()}; }

}  // namespace spdc::test
