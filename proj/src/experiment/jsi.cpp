#include "spdc/experiment/jsi.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <fmt/format.h>

#include "spdc/error.hpp"
#include "spdc/kernels.hpp"
#include "spdc/units.hpp"

namespace spdc {

namespace {

// Unit-sum Gaussian taps for an FWHM given in grid steps; {1} when narrower than a cell.
std::vector<double> gaussian_taps(double fwhm_steps) {
  const double sigma = fwhm_steps / (2.0 * std::sqrt(2.0 * units::kLn2));
  if (sigma < 0.05) return {1.0};
  const int r = static_cast<int>(std::ceil(4.0 * sigma));
  std::vector<double> taps(2 * r + 1);
  double sum = 0.0;
  for (int t = -r; t <= r; ++t) {
    taps[t + r] = std::exp(-0.5 * (t / sigma) * (t / sigma));
    sum += taps[t + r];
  }
  for (double& t : taps) t /= sum;
  return taps;
}

// Width of a unit-peak Gaussian passband: integral of exp(-4 ln2 x^2 / fwhm^2).
double passband_width(double fwhm) { return fwhm * std::sqrt(units::kPi / (4.0 * units::kLn2)); }

struct ArmResolution {
  double fwhm_s;  // rad/fs
  double fwhm_i;
};

ArmResolution check_resolution(const JointAmplitude& jsa, double resolution_nm) {
  if (!(resolution_nm > 0.0)) throw ConfigError("monochromator resolution must be > 0 nm");
  const auto& g = jsa.grid;
  g.validate();
  ArmResolution res{units::bandwidth_nm_to_rad_per_fs(resolution_nm, jsa.signal_center_nm),
                    units::bandwidth_nm_to_rad_per_fs(resolution_nm, jsa.idler_center_nm)};
  if (res.fwhm_s > 2.0 * g.half_range_s || res.fwhm_i > 2.0 * g.half_range_i) {
    throw ConfigError(fmt::format("resolution {} nm exceeds the spectral grid span", resolution_nm));
  }
  return res;
}

RealGrid blur(const RealGrid& in, const std::vector<double>& taps_rows,
              const std::vector<double>& taps_cols) {
  const auto rows = in.rows();
  const auto cols = in.cols();
  RealGrid tmp(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    kernels::convolve_same({in.row(r).data(), static_cast<std::size_t>(cols)}, taps_cols,
                           {tmp.row(r).data(), static_cast<std::size_t>(cols)});
  }
  // Column pass on the transpose so the kernel sees contiguous data.
  RealGrid t = tmp.transpose();
  RealGrid t_out(cols, rows);
  for (Eigen::Index c = 0; c < cols; ++c) {
    kernels::convolve_same({t.row(c).data(), static_cast<std::size_t>(rows)}, taps_rows,
                           {t_out.row(c).data(), static_cast<std::size_t>(rows)});
  }
  return t_out.transpose();
}

}  // namespace

double JsiScan::signal_nm(int j) const {
  return units::wavelength_nm(units::angular_frequency(signal_center_nm) + grid.nu_s(j));
}

double JsiScan::idler_nm(int j) const {
  return units::wavelength_nm(units::angular_frequency(idler_center_nm) + grid.nu_i(j));
}

RealGrid blur_intensity(const JointAmplitude& jsa, double resolution_nm) {
  const auto res = check_resolution(jsa, resolution_nm);
  return blur(jsa.intensity(), gaussian_taps(res.fwhm_s / jsa.grid.step_s()),
              gaussian_taps(res.fwhm_i / jsa.grid.step_i()));
}

JsiScan simulate_jsi_scan(const JointAmplitude& jsa, const JsiScanOptions& opt, std::uint64_t seed) {
  if (!jsa.normalized) throw DomainError("JSI scan needs a normalized amplitude");
  if (!(opt.power_mW >= 0.0)) throw ConfigError("pump power must be >= 0");
  if (!(opt.dwell_s > 0.0)) throw ConfigError("dwell must be > 0");
  opt.source.validate();
  const double eta_a = chain_total(opt.chain_a);
  const double eta_b = chain_total(opt.chain_b);
  if (opt.chain_a.detector.trigger_rate_MHz != opt.chain_b.detector.trigger_rate_MHz) {
    throw ConfigError("both detectors must share one trigger");
  }
  const auto res = check_resolution(jsa, opt.resolution_nm);
  const auto& g = jsa.grid;
  const auto taps_s = gaussian_taps(res.fwhm_s / g.step_s());
  const auto taps_i = gaussian_taps(res.fwhm_i / g.step_i());

  // Probability that a pair falls in both passbands / in one passband.
  const RealGrid density = jsa.intensity();
  const RealGrid joint = blur(density, taps_s, taps_i);
  const double width_s = taps_s.size() == 1 ? g.step_s() : passband_width(res.fwhm_s);
  const double width_i = taps_i.size() == 1 ? g.step_i() : passband_width(res.fwhm_i);

  const Eigen::Index n = density.rows();
  std::vector<double> marg_s(n), marg_i(n), pass_s(n), pass_i(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    marg_s[j] = density.row(j).sum() * g.step_i();
    marg_i[j] = density.col(j).sum() * g.step_s();
  }
  kernels::convolve_same(marg_s, taps_s, pass_s);
  kernels::convolve_same(marg_i, taps_i, pass_i);

  JsiScan scan;
  scan.grid = g;
  scan.signal_center_nm = jsa.signal_center_nm;
  scan.idler_center_nm = jsa.idler_center_nm;
  scan.gates_per_setting = static_cast<std::uint64_t>(
      std::llround(opt.chain_a.detector.trigger_rate_MHz * 1e6 * opt.dwell_s));
  scan.raw.resize(n, n);
  scan.accidentals.resize(n, n);
  scan.subtracted.resize(n, n);

  const double mu = opt.source.mean_pairs_per_pulse_per_mW() * opt.power_mW;
  const double gates = static_cast<double>(scan.gates_per_setting);
  const double dark_a = opt.chain_a.detector.dark_count_prob_per_gate;
  const double dark_b = opt.chain_b.detector.dark_count_prob_per_gate;
  Rng rng(seed);

  for (Eigen::Index r = 0; r < n; ++r) {
    const double a = std::clamp(eta_a * pass_s[r] * width_s, 0.0, 1.0);
    for (Eigen::Index c = 0; c < n; ++c) {
      const double b = std::clamp(eta_b * pass_i[c] * width_i, 0.0, 1.0);
      const double both = std::clamp(eta_a * eta_b * joint(r, c) * width_s * width_i, 0.0, std::min(a, b));
      double coinc = 0.0, acc = 0.0;
      if (opt.poisson) {
        GateModel model{mu, {a, b, both}, dark_a, dark_b};
        const auto counts = simulate_gates(model, scan.gates_per_setting, rng);
        coinc = static_cast<double>(counts.coincidences);
        acc = estimate_accidentals(static_cast<double>(counts.singles_a),
                                   static_cast<double>(counts.singles_b), gates);
      } else {
        // Expectations per gate for Poisson pair number.
        const double silent_a = (1.0 - dark_a) * std::exp(-mu * a);
        const double silent_b = (1.0 - dark_b) * std::exp(-mu * b);
        const double silent_ab = (1.0 - dark_a) * (1.0 - dark_b) * std::exp(-mu * (a + b - both));
        const double fire_a = 1.0 - silent_a;
        const double fire_b = 1.0 - silent_b;
        coinc = gates * (1.0 - silent_a - silent_b + silent_ab);
        acc = gates * fire_a * fire_b;
      }
      scan.raw(r, c) = coinc;
      scan.accidentals(r, c) = acc;
      scan.subtracted(r, c) = coinc - acc;
    }
  }
  return scan;
}

SchmidtResult schmidt_from_intensity(const RealGrid& intensity) {
  if (intensity.size() == 0) throw DomainError("empty intensity grid");
  if (!intensity.allFinite()) throw NumericError("intensity grid has non-finite entries");
  const ComplexGrid amplitude = intensity.cwiseMax(0.0).cwiseSqrt().cast<std::complex<double>>();
  if (amplitude.cwiseAbs2().sum() <= 0.0) throw DomainError("intensity grid is zero everywhere");
  return schmidt_decompose(amplitude);
}

}  // namespace spdc
