#include "spdc/cli.hpp"

#include <cmath>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "design.hpp"
#include "output.hpp"
#include "run_config.hpp"
#include "spdc/biphoton.hpp"
#include "spdc/error.hpp"
#include "spdc/experiment.hpp"
#include "spdc/phasematch.hpp"
#include "spdc/spatial.hpp"
#include "spdc/units.hpp"

#ifndef SPDC_DEFAULT_CRYSTAL
#define SPDC_DEFAULT_CRYSTAL "data/ktp.json"
#endif
#ifndef SPDC_DEFAULT_GOLDEN
#define SPDC_DEFAULT_GOLDEN "data/golden.json"
#endif

namespace spdc::cli {

using nlohmann::json;

namespace {

struct Globals {
  std::string crystal = SPDC_DEFAULT_CRYSTAL;
  std::optional<double> length_mm;
  std::string pump_axis = "y";
  std::string signal_axis = "y";
  std::string idler_axis = "z";
  std::optional<std::uint64_t> seed;
  std::string out;
  Format format = Format::json;
  bool golden = false;
  std::string golden_file = SPDC_DEFAULT_GOLDEN;
};

CrystalSpec load_crystal(const Globals& g) {
  CrystalSpec crystal{SellmeierSet::load(g.crystal)};
  if (g.length_mm) crystal.length_mm = *g.length_mm;
  crystal.pump_axis = parse_axis(g.pump_axis);
  crystal.signal_axis = parse_axis(g.signal_axis);
  crystal.idler_axis = parse_axis(g.idler_axis);
  crystal.validate();
  return crystal;
}

std::vector<double> parse_triplet(const std::string& text, const char* what, std::size_t count) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ':')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw ConfigError(fmt::format("{} '{}' is not numeric", what, text));
    }
  }
  if (v.size() != count) throw ConfigError(fmt::format("{} '{}' needs {} ':'-separated numbers", what, text, count));
  return v;
}

json gvm_json(double pump_nm, const GvmReport& r) {
  return {{"pump_nm", pump_nm},
          {"kprime_pump_fs_per_um", r.kprime_pump},
          {"kprime_signal_fs_per_um", r.kprime_signal},
          {"kprime_idler_fs_per_um", r.kprime_idler},
          {"ridge_slope_unitless", r.ridge_slope},
          {"positively_correlated", r.positively_correlated}};
}

json schmidt_json(const SchmidtResult& s) {
  json leading = json::array();
  for (std::size_t j = 0; j < std::min<std::size_t>(5, s.coefficients.size()); ++j) leading.push_back(s.coefficients[j]);
  return {{"schmidt_number_unitless", s.schmidt_number}, {"purity_unitless", s.purity},
          {"leading_schmidt_coefficients_unitless", leading}};
}

std::uint64_t pick_seed(const Globals& g, const RunConfig& cfg) { return g.seed.value_or(cfg.seed); }

std::vector<double> default_sweep(double lo, double hi, double step) {
  std::vector<double> v;
  for (int j = 0; lo + step * j <= hi + 1e-9; ++j) v.push_back(lo + step * j);
  return v;
}

// Unweighted straight line with coefficient of determination.
json linear_summary(const std::vector<double>& x, const std::vector<double>& y) {
  const std::vector<double> ones(x.size(), 1.0);
  const auto fit = fit_line(x, y, ones);
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(y.size());
  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double r = y[j] - (fit.intercept + fit.slope * x[j]);
    ss_res += r * r;
    ss_tot += (y[j] - mean) * (y[j] - mean);
  }
  return {{"slope_per_mW", fit.slope}, {"intercept_counts", fit.intercept},
          {"r_squared_unitless", ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0}};
}

void emit_dir_or_stdout(const Globals& g, const Artifacts& files, const std::string& primary, std::ostream& out) {
  if (g.out.empty()) {
    out << files.at(primary);
  } else {
    write_artifacts(g.out, files);
  }
}

int cmd_gvm(const Globals& g, double pump_nm, const std::string& scan, std::ostream& out) {
  const auto crystal = load_crystal(g);
  json doc;
  if (scan.empty()) {
    doc = gvm_json(pump_nm, gvm_report(crystal, pump_nm));
  } else {
    const auto s = parse_triplet(scan, "--scan", 3);
    const auto rows = gvm_scan(crystal, s[0], s[1], s[2]);
    json list = json::array();
    for (const auto& row : rows) list.push_back(gvm_json(row.pump_nm, row.report));
    const auto w = positive_correlation_window(rows);
    doc = {{"rows", list},
           {"window", {{"found", w.found}, {"min_nm", w.min_nm}, {"max_nm", w.max_nm}, {"width_nm", w.width()}}}};
  }
  write_text(g.out, render(doc, g.format), out);
  return kExitOk;
}

int cmd_poling(const Globals& g, double pump_nm, std::optional<double> signal_nm,
               std::optional<double> idler_nm, std::ostream& out) {
  const auto crystal = load_crystal(g);
  const double s = signal_nm.value_or(2.0 * pump_nm);
  const double i = idler_nm.value_or(1.0 / (1.0 / pump_nm - 1.0 / s));
  const auto grating = solve_poling_period(crystal, pump_nm, s, i);
  const json doc = {{"pump_nm", pump_nm}, {"signal_nm", s}, {"idler_nm", i},
                    {"period_um", grating.period_um},
                    {"orientation_unitless", grating.orientation},
                    {"grating_wavevector_rad_per_um", grating.wavevector()}};
  write_text(g.out, render(doc, g.format), out);
  return kExitOk;
}

std::string jsa_csv(const JointAmplitude& jsa) {
  std::string s = "lambda_s_nm,lambda_i_nm,amplitude_re,amplitude_im,intensity\n";
  const auto& grid = jsa.grid;
  const double ws = units::angular_frequency(jsa.signal_center_nm);
  const double wi = units::angular_frequency(jsa.idler_center_nm);
  for (int r = 0; r < grid.points; ++r) {
    const double ls = units::wavelength_nm(ws + grid.nu_s(r));
    for (int c = 0; c < grid.points; ++c) {
      const auto v = jsa.values(r, c);
      s += fmt::format("{},{},{},{},{}\n", ls, units::wavelength_nm(wi + grid.nu_i(c)), v.real(), v.imag(), std::norm(v));
    }
  }
  return s;
}

int cmd_jsa(const Globals& g, double pump_nm, double tau_ps, int points, double bandwidths, std::ostream& out) {
  const auto crystal = load_crystal(g);
  const PumpPulse pulse{pump_nm, tau_ps};
  const auto grid = SpectralGrid::around_pump(pulse, points, bandwidths);
  const auto jsa = build_jsa(crystal, pulse, grid);
  json summary = schmidt_json(schmidt_decompose(jsa));
  summary["tau_ps"] = tau_ps;
  summary["pump_nm"] = pump_nm;
  summary["grid_points_count"] = points;
  summary["grid_half_range_rad_per_fs"] = grid.half_range_s;
  if (!g.out.empty()) {
    write_artifacts(g.out, {{"jsa.csv", jsa_csv(jsa)}, {"jsa.json", dump(summary)}});
  } else {
    out << (g.format == Format::csv ? jsa_csv(jsa) : dump(summary));
  }
  return kExitOk;
}

int cmd_schmidt(const Globals& g, double pump_nm, double tau_ps, int points, double bandwidths,
                const std::string& optimize, std::ostream& out) {
  const auto crystal = load_crystal(g);
  json doc;
  if (optimize.empty()) {
    const PumpPulse pulse{pump_nm, tau_ps};
    doc = schmidt_json(schmidt_decompose(build_jsa(crystal, pulse, SpectralGrid::around_pump(pulse, points, bandwidths))));
    doc["tau_ps"] = tau_ps;
  } else {
    const auto r = parse_triplet(optimize, "--optimize", 2);
    PulseSearchOptions opt;
    opt.grid_points = points;
    opt.grid_bandwidths = bandwidths;
    const auto best = optimal_pulse_duration(crystal, pump_nm, r[0], r[1], opt);
    doc = {{"tau_ps", best.duration_ps}, {"schmidt_number_unitless", best.schmidt_number},
           {"optimum_on_search_edge", best.on_bracket_edge}};
  }
  doc["pump_nm"] = pump_nm;
  write_text(g.out, render(doc, g.format), out);
  return kExitOk;
}

json mode_json(const GaussianMode& m) {
  return {{"wavelength_nm", m.wavelength_nm}, {"waist_um", m.waist_um}, {"divergence_mrad", m.divergence_mrad}};
}

int cmd_spatial(const Globals& g, double pump_nm, std::optional<double> divergence, std::ostream& out) {
  const auto crystal = load_crystal(g);
  SpatialDesign d;
  if (divergence) {
    d.pump = mode_from_divergence(pump_nm, *divergence);
    std::tie(d.signal, d.idler) = collection_modes(d.pump, 2.0 * pump_nm, 2.0 * pump_nm);
    d.focusing_parameter = focusing_parameter(crystal, d.pump);
  } else {
    d = spatial_design(crystal, pump_nm);
  }
  const json doc = {{"pump", mode_json(d.pump)}, {"signal", mode_json(d.signal)}, {"idler", mode_json(d.idler)},
                    {"focusing_parameter_unitless", d.focusing_parameter}};
  write_text(g.out, render(doc, g.format), out);
  return kExitOk;
}

int cmd_design(const Globals& g, const DesignOptions& opt, std::ostream& out) {
  const auto crystal = load_crystal(g);
  write_text(g.out, dump(design_report(crystal, opt)), out);
  return kExitOk;
}

int cmd_counts(const Globals& g, const std::string& config, std::ostream& out) {
  const auto cfg = RunConfig::load(config);
  const auto seed = pick_seed(g, cfg);
  const auto record = simulate_counts(cfg.source, cfg.chain_a, cfg.chain_b, cfg.power_mW, cfg.duration_s, seed);
  const auto powers = cfg.powers_mW.empty() ? default_sweep(1.0, 30.0, 1.0) : cfg.powers_mW;

  std::string csv = "power_mW,singles_a,singles_b,singles_geometric_mean,coincidences,accidentals\n";
  std::vector<double> x, singles;
  for (std::size_t j = 0; j < powers.size(); ++j) {
    const auto r = simulate_counts(cfg.source, cfg.chain_a, cfg.chain_b, powers[j], cfg.duration_s,
                                   derive_seed(seed, j + 1));
    csv += fmt::format("{},{},{},{},{},{}\n", powers[j], r.singles_a, r.singles_b, r.singles_geometric_mean(),
                       r.coincidences, r.accidental_estimate);
    x.push_back(powers[j]);
    singles.push_back(r.singles_geometric_mean());
  }

  const double eta = std::sqrt(chain_total(cfg.chain_a) * chain_total(cfg.chain_b));
  json summary = {{"seed", seed}, {"record", to_json(record)}, {"singles_efficiency_fraction", eta}};
  if (cfg.power_mW > 0.0) {
    const double c = coincidence_rate_per_mW(record, cfg.source, cfg.chain_a.detector);
    const double rate = infer_pair_rate(c, eta);
    summary["coincidence_rate_per_s_per_mW"] = c;
    summary["inferred_pair_rate_pairs_per_s_per_mW"] = rate;
    summary["inferred_pair_rate_sigma_pairs_per_s_per_mW"] =
        record.coincidences > 0 ? rate / std::sqrt(static_cast<double>(record.coincidences)) : 0.0;
  }
  if (x.size() >= 2) summary["singles_vs_power"] = linear_summary(x, singles);

  emit_dir_or_stdout(g, {{"record.json", dump(to_json(record))}, {"counts.csv", csv}, {"summary.json", dump(summary)}},
                     "summary.json", out);
  return kExitOk;
}

std::string fringe_csv(const std::vector<double>& angles, const std::vector<double>& counts) {
  std::string s = "angle_deg,counts\n";
  for (std::size_t j = 0; j < angles.size(); ++j) s += fmt::format("{},{}\n", angles[j], counts[j]);
  return s;
}

json fit_json(const FringeFit& f) {
  return {{"visibility_fraction", f.visibility}, {"visibility_sigma_fraction", f.visibility_sigma},
          {"amplitude_counts", f.amplitude}, {"phase_deg", f.phase_deg}, {"quadrature_unitless", f.quadrature},
          {"chi2_unitless", f.chi2}, {"dof_count", f.dof}};
}

json trend_json(const LinearFit& f) {
  return {{"slope_per_mW", f.slope}, {"slope_se_per_mW", f.slope_se}, {"intercept_fraction", f.intercept},
          {"intercept_se_fraction", f.intercept_se}};
}

int cmd_visibility(const Globals& g, const std::string& config, std::ostream& out) {
  const auto cfg = RunConfig::load(config);
  const auto seed = pick_seed(g, cfg);
  VisibilityPipeline pipe{cfg.source, cfg.chain_a, cfg.chain_b, cfg.polarization, cfg.fringe, cfg.basis_referenced};
  FringeData data;
  const auto row = measure_visibility(pipe, cfg.power_mW, seed, &data);
  const auto powers = cfg.powers_mW.empty() ? default_sweep(2.0, 30.0, 2.0) : cfg.powers_mW;
  const auto sweep = visibility_vs_power(pipe, powers, seed);

  std::string table = "power_mW,v_raw,v_raw_sigma,v_subtracted,v_subtracted_sigma\n";
  for (const auto& r : sweep.rows) {
    table += fmt::format("{},{},{},{},{}\n", r.power_mW, r.raw.visibility, r.raw.visibility_sigma,
                         r.subtracted.visibility, r.subtracted.visibility_sigma);
  }
  const auto state = displacer_state(cfg.polarization);
  json summary = {{"seed", seed},
                  {"power_mW", cfg.power_mW},
                  {"delta1_deg", cfg.polarization.delta1_deg},
                  {"delta2_deg", cfg.polarization.delta2_deg},
                  {"phi_rad", cfg.polarization.phi_rad},
                  {"intrinsic_basis_visibility_fraction", basis_visibility(state, cfg.fringe.analyzer_a_deg)},
                  {"basis_referenced", cfg.basis_referenced},
                  {"raw", fit_json(row.raw)},
                  {"subtracted", fit_json(row.subtracted)}};
  if (sweep.rows.size() >= 2) {
    summary["raw_trend"] = trend_json(sweep.raw_trend);
    summary["subtracted_trend"] = trend_json(sweep.subtracted_trend);
  }
  emit_dir_or_stdout(g,
                     {{"fringe_raw.csv", fringe_csv(data.angles_deg, data.raw)},
                      {"fringe_subtracted.csv", fringe_csv(data.angles_deg, data.subtracted)},
                      {"visibility_vs_power.csv", table},
                      {"visibility.json", dump(summary)}},
                     "visibility.json", out);
  return kExitOk;
}

int cmd_jsi(const Globals& g, const std::string& config, std::ostream& out) {
  const auto cfg = RunConfig::load(config);
  const auto seed = pick_seed(g, cfg);
  const auto crystal = load_crystal(g);
  const PumpPulse pulse{cfg.jsi.pump_nm, cfg.jsi.pump_duration_ps};
  const auto jsa = build_jsa(crystal, pulse, SpectralGrid::around_pump(pulse, cfg.jsi.grid_points, cfg.jsi.grid_bandwidths));
  JsiScanOptions opt;
  opt.resolution_nm = cfg.jsi.resolution_nm;
  opt.power_mW = cfg.power_mW;
  opt.dwell_s = cfg.jsi.dwell_s;
  opt.source = cfg.source;
  opt.chain_a = cfg.chain_a;
  opt.chain_b = cfg.chain_b;
  const auto scan = simulate_jsi_scan(jsa, opt, seed);

  std::string csv = "lambda_s_nm,lambda_i_nm,counts\n";
  for (int r = 0; r < scan.grid.points; ++r) {
    const double ls = scan.signal_nm(r);
    for (int c = 0; c < scan.grid.points; ++c) {
      csv += fmt::format("{},{},{}\n", ls, scan.idler_nm(c), scan.subtracted(r, c));
    }
  }
  const json summary = {{"seed", seed},
                        {"pump_nm", pulse.center_nm},
                        {"tau_ps", pulse.duration_ps},
                        {"power_mW", opt.power_mW},
                        {"dwell_s", opt.dwell_s},
                        {"resolution_nm", opt.resolution_nm},
                        {"grid_points_count", scan.grid.points},
                        {"measured_schmidt_number_unitless", schmidt_from_intensity(scan.subtracted).schmidt_number},
                        {"amplitude_schmidt_number_unitless", schmidt_decompose(jsa).schmidt_number},
                        {"total_raw_coincidences_counts", scan.raw.sum()},
                        {"total_accidentals_counts", scan.accidentals.sum()}};
  emit_dir_or_stdout(g, {{"jsi.csv", csv}, {"jsi.json", dump(summary)}}, "jsi.json", out);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"SPDC photon-pair source design and simulation", "spdc_tool"};
  app.fallthrough();
  Globals g;
  app.add_option("--crystal", g.crystal, "crystal dispersion JSON")->capture_default_str();
  app.add_option("--length-mm", g.length_mm, "crystal length (default 20)");
  app.add_option("--pump-axis", g.pump_axis)->capture_default_str();
  app.add_option("--signal-axis", g.signal_axis)->capture_default_str();
  app.add_option("--idler-axis", g.idler_axis)->capture_default_str();
  app.add_option("--seed", g.seed, "RNG seed (overrides the run configuration)");
  app.add_option("--out", g.out, "output file (design, gvm, ...) or directory (counts, visibility, jsi, jsa)");
  const std::map<std::string, Format> formats{{"json", Format::json}, {"csv", Format::csv}};
  app.add_option("--format", g.format)->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
  app.add_flag("--golden", g.golden, "recompute pinned reference constants and diff them");
  app.add_option("--golden-file", g.golden_file)->capture_default_str();

  double pump_nm = 776.0, tau_ps = 1.3, bandwidths = 5.0;
  int points = 512;
  std::string scan, optimize, config;
  std::optional<double> signal_nm, idler_nm, divergence;
  DesignOptions design;

  auto* gvm = app.add_subcommand("gvm", "group-velocity matching report or pump scan");
  gvm->add_option("--pump-nm", pump_nm)->capture_default_str();
  gvm->add_option("--scan", scan, "MIN:MAX:STEP pump scan in nm");
  auto* poling = app.add_subcommand("poling", "first-order QPM poling period");
  poling->add_option("--pump-nm", pump_nm)->capture_default_str();
  poling->add_option("--signal-nm", signal_nm);
  poling->add_option("--idler-nm", idler_nm);
  auto* jsa = app.add_subcommand("jsa", "joint spectral amplitude grid");
  auto* schmidt = app.add_subcommand("schmidt", "Schmidt decomposition or pulse-duration optimum");
  for (auto* sub : {jsa, schmidt}) {
    sub->add_option("--pump-nm", pump_nm)->capture_default_str();
    sub->add_option("--tau-ps", tau_ps, "pump intensity FWHM")->capture_default_str();
    sub->add_option("--points", points, "grid points per axis")->capture_default_str();
    sub->add_option("--bandwidths", bandwidths, "grid half range in pump bandwidths")->capture_default_str();
  }
  schmidt->add_option("--optimize", optimize, "MIN:MAX pulse duration search in ps");
  auto* spatial = app.add_subcommand("spatial", "pump focus and collection modes");
  spatial->add_option("--pump-nm", pump_nm)->capture_default_str();
  spatial->add_option("--divergence-mrad", divergence, "use this pump divergence instead of the design focus");
  auto* des = app.add_subcommand("design", "full design report");
  des->add_option("--pump-nm", design.pump_nm)->capture_default_str();
  des->add_option("--tau-min-ps", design.tau_min_ps)->capture_default_str();
  des->add_option("--tau-max-ps", design.tau_max_ps)->capture_default_str();
  des->add_option("--points", design.grid_points)->capture_default_str();
  des->add_option("--bandwidths", design.grid_bandwidths)->capture_default_str();
  auto* counts = app.add_subcommand("counts", "gated singles/coincidence simulation and power sweep");
  auto* vis = app.add_subcommand("visibility", "polarization fringes and visibility vs power");
  auto* jsi = app.add_subcommand("jsi", "simulated monochromator JSI scan");
  for (auto* sub : {counts, vis, jsi}) sub->add_option("config", config, "run configuration JSON")->required();
  app.require_subcommand(0, 1);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (g.golden) {
      const auto report = golden_check(load_crystal(g), g.golden_file);
      write_text(g.out, render(report, g.format), out);
      if (!report.at("all_ok").get<bool>()) {
        err << "golden values differ from the pinned set\n";
        return kExitNumeric;
      }
      return kExitOk;
    }
    if (*gvm) return cmd_gvm(g, pump_nm, scan, out);
    if (*poling) return cmd_poling(g, pump_nm, signal_nm, idler_nm, out);
    if (*jsa) return cmd_jsa(g, pump_nm, tau_ps, points, bandwidths, out);
    if (*schmidt) return cmd_schmidt(g, pump_nm, tau_ps, points, bandwidths, optimize, out);
    if (*spatial) return cmd_spatial(g, pump_nm, divergence, out);
    if (*des) return cmd_design(g, design, out);
    if (*counts) return cmd_counts(g, config, out);
    if (*vis) return cmd_visibility(g, config, out);
    if (*jsi) return cmd_jsi(g, config, out);
    err << app.help();
    return kExitConfig;
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const RangeError& e) {
    err << "range error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
}

}  // namespace spdc::cli
