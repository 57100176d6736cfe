#include "run_config.hpp"

#include <fstream>
#include <set>
#include <string>

#include <fmt/format.h>

#include "spdc/error.hpp"

namespace spdc::cli {

namespace {

using nlohmann::json;

void only_keys(const json& obj, const std::string& where, const std::set<std::string>& keys) {
  if (!obj.is_object()) throw ConfigError(fmt::format("'{}' must be an object", where));
  for (const auto& [k, _] : obj.items()) {
    if (!keys.contains(k)) throw ConfigError(fmt::format("unknown field '{}' in {}", k, where));
  }
}

template <typename T>
void read(const json& obj, const char* key, T& into) {
  if (obj.contains(key)) into = obj.at(key).get<T>();
}

DetectorSpec detector_from(const json& obj, const std::string& where) {
  only_keys(obj, where, {"efficiency", "gate_width_ns", "trigger_rate_MHz", "dark_count_prob_per_gate"});
  DetectorSpec d;
  read(obj, "efficiency", d.efficiency);
  read(obj, "gate_width_ns", d.gate_width_ns);
  read(obj, "trigger_rate_MHz", d.trigger_rate_MHz);
  read(obj, "dark_count_prob_per_gate", d.dark_count_prob_per_gate);
  d.validate();
  return d;
}

EfficiencyChain chain_from(const json& obj, const std::string& where) {
  only_keys(obj, where, {"optics_transmission", "fiber_coupling", "detector"});
  EfficiencyChain c;
  read(obj, "optics_transmission", c.optics_transmission);
  read(obj, "fiber_coupling", c.fiber_coupling);
  if (obj.contains("detector")) c.detector = detector_from(obj.at("detector"), where + ".detector");
  c.validate();
  return c;
}

}  // namespace

RunConfig RunConfig::from_json(const json& doc) {
  only_keys(doc, "run configuration",
            {"power_mW", "duration_s", "seed", "source", "chain_A", "chain_B", "polarization",
             "powers_mW", "fringe", "jsi"});
  RunConfig cfg;
  try {
    read(doc, "power_mW", cfg.power_mW);
    read(doc, "duration_s", cfg.duration_s);
    read(doc, "seed", cfg.seed);
    read(doc, "powers_mW", cfg.powers_mW);
    if (doc.contains("source")) {
      const auto& s = doc.at("source");
      only_keys(s, "source", {"pair_rate_per_mW", "laser_rep_rate_MHz"});
      read(s, "pair_rate_per_mW", cfg.source.pair_rate_per_mW);
      read(s, "laser_rep_rate_MHz", cfg.source.laser_rep_rate_MHz);
    }
    if (doc.contains("chain_A")) cfg.chain_a = chain_from(doc.at("chain_A"), "chain_A");
    if (doc.contains("chain_B")) cfg.chain_b = chain_from(doc.at("chain_B"), "chain_B");
    if (doc.contains("polarization")) {
      const auto& p = doc.at("polarization");
      only_keys(p, "polarization", {"delta1_deg", "delta2_deg", "phi_rad", "target_visibility"});
      if (p.contains("target_visibility")) {
        if (p.contains("delta1_deg") || p.contains("delta2_deg")) {
          throw ConfigError("polarization: give either target_visibility or delta1_deg/delta2_deg");
        }
        const double d = calibrate_waveplate_error(p.at("target_visibility").get<double>());
        cfg.polarization.delta1_deg = d;
        cfg.polarization.delta2_deg = d;
      }
      read(p, "delta1_deg", cfg.polarization.delta1_deg);
      read(p, "delta2_deg", cfg.polarization.delta2_deg);
      read(p, "phi_rad", cfg.polarization.phi_rad);
    }
    if (doc.contains("fringe")) {
      const auto& f = doc.at("fringe");
      only_keys(f, "fringe", {"analyzer_a_deg", "analyzer_b_deg", "dwell_s", "basis_referenced"});
      read(f, "analyzer_a_deg", cfg.fringe.analyzer_a_deg);
      read(f, "analyzer_b_deg", cfg.fringe.analyzer_b_deg);
      read(f, "dwell_s", cfg.fringe.dwell_s);
      read(f, "basis_referenced", cfg.basis_referenced);
    }
    if (doc.contains("jsi")) {
      const auto& j = doc.at("jsi");
      only_keys(j, "jsi", {"pump_nm", "pump_duration_ps", "resolution_nm", "dwell_s", "grid_points",
                           "grid_bandwidths"});
      read(j, "pump_nm", cfg.jsi.pump_nm);
      read(j, "pump_duration_ps", cfg.jsi.pump_duration_ps);
      read(j, "resolution_nm", cfg.jsi.resolution_nm);
      read(j, "dwell_s", cfg.jsi.dwell_s);
      read(j, "grid_points", cfg.jsi.grid_points);
      read(j, "grid_bandwidths", cfg.jsi.grid_bandwidths);
    }
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("malformed run configuration: {}", e.what()));
  }
  cfg.source.validate();
  if (!(cfg.power_mW >= 0.0)) throw ConfigError("power_mW must be >= 0");
  if (!(cfg.duration_s > 0.0)) throw ConfigError("duration_s must be > 0");
  for (double p : cfg.powers_mW) {
    if (!(p >= 0.0)) throw ConfigError("powers_mW entries must be >= 0");
  }
  return cfg;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open run configuration '{}'", path.string()));
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("cannot parse '{}': {}", path.string(), e.what()));
  }
  return from_json(doc);
}

nlohmann::json to_json(const CountRecord& r) {
  return {{"duration_s", r.duration_s},
          {"pump_power_mW", r.pump_power_mW},
          {"gates", r.gates},
          {"singles_a", r.singles_a},
          {"singles_b", r.singles_b},
          {"coincidences", r.coincidences},
          {"accidental_estimate", r.accidental_estimate}};
}

}  // namespace spdc::cli
