#include "spdc/phasematch.hpp"

#include <cmath>

#include <fmt/format.h>

#include "spdc/error.hpp"
#include "spdc/units.hpp"

namespace spdc {

namespace {

// Center mismatch below this is treated as already phase matched (no first-order grating).
constexpr double kNoGratingMismatch = 1e-12;  // rad/um

double center_mismatch(const CrystalSpec& crystal, double pump_nm, double signal_nm,
                       double idler_nm) {
  const auto& s = crystal.sellmeier;
  const double kp = wavenumber_at(s, crystal.pump_axis, units::angular_frequency(pump_nm));
  const double ks = wavenumber_at(s, crystal.signal_axis, units::angular_frequency(signal_nm));
  const double ki = wavenumber_at(s, crystal.idler_axis, units::angular_frequency(idler_nm));
  return kp - ks - ki;
}

}  // namespace

void ThreeWaveConfig::validate() const {
  crystal.validate();
  const double lhs = 1.0 / pump_nm;
  const double rhs = 1.0 / signal_nm + 1.0 / idler_nm;
  if (!(pump_nm > 0.0 && signal_nm > 0.0 && idler_nm > 0.0) ||
      std::abs(lhs - rhs) > 1e-9 * lhs) {
    throw ConfigError(fmt::format(
        "centers violate energy conservation: 1/{} != 1/{} + 1/{}", pump_nm, signal_nm, idler_nm));
  }
}

ThreeWaveConfig ThreeWaveConfig::degenerate(CrystalSpec crystal, double pump_nm) {
  ThreeWaveConfig cfg{std::move(crystal)};
  cfg.pump_nm = pump_nm;
  cfg.signal_nm = 2.0 * pump_nm;
  cfg.idler_nm = 2.0 * pump_nm;
  return cfg;
}

double delta_k_exact(const ThreeWaveConfig& cfg) {
  cfg.validate();
  if (!cfg.crystal.poling) {
    throw ConfigError("crystal has no poling period; call solve_poling_period first");
  }
  const auto& c = cfg.crystal;
  const double ws = units::angular_frequency(cfg.signal_nm) + cfg.nu_s;
  const double wi = units::angular_frequency(cfg.idler_nm) + cfg.nu_i;
  const double kp = wavenumber_at(c.sellmeier, c.pump_axis, ws + wi);
  const double ks = wavenumber_at(c.sellmeier, c.signal_axis, ws);
  const double ki = wavenumber_at(c.sellmeier, c.idler_axis, wi);
  return kp - ks - ki - c.poling->wavevector();
}

MismatchSlopes mismatch_slopes(const CrystalSpec& crystal, double pump_nm, double signal_nm,
                               double idler_nm) {
  const auto& s = crystal.sellmeier;
  return {inverse_group_velocity(s, crystal.pump_axis, pump_nm),
          inverse_group_velocity(s, crystal.signal_axis, signal_nm),
          inverse_group_velocity(s, crystal.idler_axis, idler_nm)};
}

double delta_k_linearized(const ThreeWaveConfig& cfg) {
  cfg.validate();
  return mismatch_slopes(cfg.crystal, cfg.pump_nm, cfg.signal_nm, cfg.idler_nm)
      .at(cfg.nu_s, cfg.nu_i);
}

PolingGrating solve_poling_period(const CrystalSpec& crystal, double pump_nm, double signal_nm,
                                  double idler_nm) {
  CrystalSpec unpoled = crystal;
  unpoled.poling.reset();
  ThreeWaveConfig check{unpoled, pump_nm, signal_nm, idler_nm, 0.0, 0.0};
  check.validate();
  const double mismatch = center_mismatch(crystal, pump_nm, signal_nm, idler_nm);
  if (!std::isfinite(mismatch) || std::abs(mismatch) <= kNoGratingMismatch) {
    throw NumericError(fmt::format(
        "no first-order QPM solution: center mismatch {} rad/um at {} -> {} + {} nm", mismatch,
        pump_nm, signal_nm, idler_nm));
  }
  return PolingGrating{units::kTwoPi / std::abs(mismatch), mismatch > 0.0 ? +1 : -1};
}

std::complex<double> phase_matching_function(double delta_k, double length_mm) {
  if (!(length_mm > 0.0)) throw DomainError(fmt::format("crystal length {} mm must be > 0", length_mm));
  const double x = 0.5 * delta_k * units::mm_to_um(length_mm);
  const double sinc = (x == 0.0) ? 1.0 : std::sin(x) / x;
  return std::polar(1.0, x) * sinc;
}

GvmReport gvm_report(const CrystalSpec& crystal, double pump_nm) {
  crystal.validate();
  const auto slopes = mismatch_slopes(crystal, pump_nm, 2.0 * pump_nm, 2.0 * pump_nm);
  GvmReport r;
  r.kprime_pump = slopes.kprime_pump;
  r.kprime_signal = slopes.kprime_signal;
  r.kprime_idler = slopes.kprime_idler;
  const double denom = r.kprime_pump - r.kprime_signal;
  if (denom == 0.0) {
    throw NumericError(
        fmt::format("singular GVM configuration at {} nm: k'_p equals k'_s", pump_nm));
  }
  r.ridge_slope = -(r.kprime_pump - r.kprime_idler) / denom;
  // Strict betweenness; equivalent to ridge_slope > 0 whenever k'_p != k'_i.
  const double lo = std::min(r.kprime_signal, r.kprime_idler);
  const double hi = std::max(r.kprime_signal, r.kprime_idler);
  r.positively_correlated = r.kprime_pump > lo && r.kprime_pump < hi;
  return r;
}

std::vector<GvmScanRow> gvm_scan(const CrystalSpec& crystal, double min_nm, double max_nm,
                                 double step_nm) {
  if (!(step_nm > 0.0) || !(max_nm >= min_nm)) {
    throw ConfigError(fmt::format("invalid scan {}:{}:{}", min_nm, max_nm, step_nm));
  }
  std::vector<GvmScanRow> rows;
  const auto count = static_cast<long>(std::floor((max_nm - min_nm) / step_nm + 1e-9)) + 1;
  rows.reserve(static_cast<std::size_t>(count));
  for (long j = 0; j < count; ++j) {
    const double lp = min_nm + static_cast<double>(j) * step_nm;
    rows.push_back({lp, gvm_report(crystal, lp)});
  }
  return rows;
}

WavelengthWindow positive_correlation_window(const std::vector<GvmScanRow>& scan) {
  WavelengthWindow best;
  std::size_t j = 0;
  while (j < scan.size()) {
    if (!scan[j].report.positively_correlated) {
      ++j;
      continue;
    }
    std::size_t end = j;
    while (end + 1 < scan.size() && scan[end + 1].report.positively_correlated) ++end;
    const double width = scan[end].pump_nm - scan[j].pump_nm;
    if (!best.found || width > best.width()) best = {scan[j].pump_nm, scan[end].pump_nm, true};
    j = end + 1;
  }
  return best;
}

}  // namespace spdc
