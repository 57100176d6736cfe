#include "design.hpp"

#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "spdc/biphoton.hpp"
#include "spdc/error.hpp"
#include "spdc/experiment.hpp"
#include "spdc/phasematch.hpp"
#include "spdc/spatial.hpp"
#include "spdc/units.hpp"

namespace spdc::cli {

using nlohmann::json;

namespace {

json mode_json(const GaussianMode& m) {
  return {{"wavelength_nm", m.wavelength_nm}, {"waist_um", m.waist_um}, {"divergence_mrad", m.divergence_mrad}};
}

}  // namespace

json design_report(const CrystalSpec& crystal_in, const DesignOptions& opt) {
  CrystalSpec crystal = crystal_in;
  const double s_nm = 2.0 * opt.pump_nm;
  if (!crystal.poling) crystal.poling = solve_poling_period(crystal, opt.pump_nm, s_nm, s_nm);
  crystal.validate();

  const auto gvm = gvm_report(crystal, opt.pump_nm);
  // Signal and idler sit at twice the pump wavelength, so the scan must stay inside half the range.
  const double scan_lo = std::max(600.0, crystal.sellmeier.min_nm() * 1.01);
  const double scan_hi = std::min(950.0, crystal.sellmeier.max_nm() / 2.0 * 0.99);
  const auto window = positive_correlation_window(gvm_scan(crystal, scan_lo, scan_hi, 5.0));

  PulseSearchOptions search;
  search.grid_points = opt.grid_points;
  search.grid_bandwidths = opt.grid_bandwidths;
  const auto optimum = optimal_pulse_duration(crystal, opt.pump_nm, opt.tau_min_ps, opt.tau_max_ps, search);
  const PumpPulse pulse{opt.pump_nm, optimum.duration_ps};
  const auto schmidt = schmidt_decompose(
      build_jsa(crystal, pulse, SpectralGrid::around_pump(pulse, opt.grid_points, opt.grid_bandwidths)));
  json leading = json::array();
  for (std::size_t j = 0; j < std::min<std::size_t>(5, schmidt.coefficients.size()); ++j) {
    leading.push_back(schmidt.coefficients[j]);
  }

  const auto spatial = spatial_design(crystal, opt.pump_nm);
  const SourceModel source;
  const EfficiencyChain chain;
  const double eta = chain_total(chain);
  const double duty = chain.detector.trigger_rate_MHz / source.laser_rep_rate_MHz;

  return {
      {"schema_version", kDesignSchemaVersion},
      {"crystal",
       {{"material", crystal.sellmeier.material()},
        {"citation", crystal.sellmeier.citation()},
        {"length_mm", crystal.length_mm},
        {"pump_axis", axis_name(crystal.pump_axis)},
        {"signal_axis", axis_name(crystal.signal_axis)},
        {"idler_axis", axis_name(crystal.idler_axis)},
        {"propagation_axis", axis_name(crystal.propagation_axis)}}},
      {"wavelengths", {{"pump_nm", opt.pump_nm}, {"signal_nm", s_nm}, {"idler_nm", s_nm}}},
      {"poling",
       {{"period_um", crystal.poling->period_um},
        {"orientation_unitless", crystal.poling->orientation},
        {"grating_wavevector_rad_per_um", crystal.poling->wavevector()}}},
      {"gvm",
       {{"kprime_pump_fs_per_um", gvm.kprime_pump},
        {"kprime_signal_fs_per_um", gvm.kprime_signal},
        {"kprime_idler_fs_per_um", gvm.kprime_idler},
        {"ridge_slope_unitless", gvm.ridge_slope},
        {"positively_correlated", gvm.positively_correlated},
        {"window_found", window.found},
        {"window_min_nm", window.min_nm},
        {"window_max_nm", window.max_nm},
        {"scan_min_nm", scan_lo},
        {"scan_max_nm", scan_hi},
        {"scan_step_nm", 5.0}}},
      {"spectral",
       {{"tau_ps", optimum.duration_ps},
        {"schmidt_number_unitless", optimum.schmidt_number},
        {"purity_unitless", schmidt.purity},
        {"leading_schmidt_coefficients_unitless", leading},
        {"optimum_on_search_edge", optimum.on_bracket_edge},
        {"search_min_ps", opt.tau_min_ps},
        {"search_max_ps", opt.tau_max_ps},
        {"grid_points_count", opt.grid_points},
        {"grid_half_range_pump_bandwidths_unitless", opt.grid_bandwidths}}},
      {"spatial",
       {{"pump", mode_json(spatial.pump)},
        {"signal", mode_json(spatial.signal)},
        {"idler", mode_json(spatial.idler)},
        {"focusing_parameter_unitless", spatial.focusing_parameter},
        {"signal_to_pump_divergence_ratio_unitless", spatial.signal.divergence_mrad / spatial.pump.divergence_mrad}}},
      {"rates",
       {{"pair_rate_pairs_per_s_per_mW", source.pair_rate_per_mW},
        {"laser_rep_rate_MHz", source.laser_rep_rate_MHz},
        {"trigger_rate_MHz", chain.detector.trigger_rate_MHz},
        {"chain_efficiency_fraction", eta},
        {"singles_rate_per_s_per_mW", source.pair_rate_per_mW * eta},
        {"coincidence_rate_per_s_per_mW", source.pair_rate_per_mW * eta * eta},
        {"gated_coincidence_rate_per_s_per_mW", source.pair_rate_per_mW * eta * eta * duty}}},
  };
}

std::map<std::string, double> golden_values(const CrystalSpec& crystal_in) {
  std::map<std::string, double> g;
  const auto& set = crystal_in.sellmeier;
  g["n_z_1552nm"] = refractive_index(set, Axis::z, 1552.0);
  g["n_y_776nm"] = refractive_index(set, Axis::y, 776.0);
  g["k_y_776nm_rad_per_um"] = wavenumber(g["n_y_776nm"], 776.0);

  CrystalSpec crystal = crystal_in;
  const auto gvm = gvm_report(crystal, 776.0);
  g["kprime_pump_fs_per_um"] = gvm.kprime_pump;
  g["kprime_signal_fs_per_um"] = gvm.kprime_signal;
  g["kprime_idler_fs_per_um"] = gvm.kprime_idler;
  g["ridge_slope"] = gvm.ridge_slope;

  const double dk0 = wavenumber(refractive_index(set, crystal.pump_axis, 776.0), 776.0) -
                     wavenumber(refractive_index(set, crystal.signal_axis, 1552.0), 1552.0) -
                     wavenumber(refractive_index(set, crystal.idler_axis, 1552.0), 1552.0);
  g["delta_k0_rad_per_um"] = dk0;
  crystal.poling = solve_poling_period(crystal, 776.0, 1552.0, 1552.0);
  g["poling_period_um"] = crystal.poling->period_um;

  const auto window = positive_correlation_window(gvm_scan(crystal, 600.0, 950.0, 5.0));
  g["gvm_window_min_nm"] = window.min_nm;
  g["gvm_window_max_nm"] = window.max_nm;

  for (const auto& [tag, tau] : {std::pair{"1p3ps", 1.3}, std::pair{"1p9ps", 1.9}}) {
    const PumpPulse pulse{776.0, tau};
    const auto jsa = build_jsa(crystal, pulse, SpectralGrid::around_pump(pulse));
    g[fmt::format("schmidt_tau_{}", tag)] = schmidt_decompose(jsa).schmidt_number;
    g[fmt::format("intensity_schmidt_tau_{}", tag)] = schmidt_from_intensity(jsa.intensity()).schmidt_number;
    g[fmt::format("blurred_intensity_schmidt_tau_{}", tag)] =
        schmidt_from_intensity(blur_intensity(jsa, 0.3)).schmidt_number;
  }
  const auto optimum = optimal_pulse_duration(crystal, 776.0, 0.5, 3.0);
  g["optimal_tau_ps"] = optimum.duration_ps;
  g["optimal_schmidt"] = optimum.schmidt_number;

  const auto pump = mode_from_divergence(776.0, 13.1);
  g["pump_waist_um"] = pump.waist_um;
  g["focusing_parameter"] = focusing_parameter(crystal, pump);
  g["waveplate_error_deg"] = calibrate_waveplate_error(0.947);
  return g;
}

json golden_check(const CrystalSpec& crystal, const std::string& golden_path) {
  std::ifstream in(golden_path);
  if (!in) throw ConfigError(fmt::format("cannot open golden file '{}'", golden_path));
  json pinned;
  try {
    pinned = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("cannot parse '{}': {}", golden_path, e.what()));
  }
  const auto values = golden_values(crystal);
  json entries = json::array();
  bool all_ok = true;
  for (const auto& [name, entry] : pinned.items()) {
    const double want = entry.at("value").get<double>();
    const double tol = entry.at("tolerance").get<double>();
    const auto it = values.find(name);
    const bool known = it != values.end();
    const double got = known ? it->second : std::nan("");
    const bool ok = known && std::abs(got - want) <= tol;
    all_ok = all_ok && ok;
    entries.push_back({{"name", name}, {"pinned", want}, {"computed", got}, {"tolerance", tol},
                       {"difference", got - want}, {"ok", ok}});
  }
  for (const auto& [name, _] : values) {
    if (!pinned.contains(name)) {
      all_ok = false;
      entries.push_back({{"name", name}, {"computed", values.at(name)}, {"ok", false},
                         {"difference", "not pinned"}});
    }
  }
  return {{"entries", entries}, {"all_ok", all_ok}};
}

}  // namespace spdc::cli
