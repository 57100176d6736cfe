#include "spdc/biphoton.hpp"

#include <cmath>
#include <map>

#include <Eigen/SVD>
#include <fmt/format.h>

#include "spdc/error.hpp"
#include "spdc/kernels.hpp"
#include "spdc/phasematch.hpp"
#include "spdc/units.hpp"

namespace spdc {

double PumpPulse::bandwidth() const {
  return 4.0 * units::kLn2 / units::ps_to_fs(duration_ps);
}

std::complex<double> pump_envelope(const PumpPulse& pulse, double nu_sum) {
  if (!(pulse.duration_ps > 0.0)) {
    throw DomainError(fmt::format("pulse duration {} ps must be > 0", pulse.duration_ps));
  }
  const double tau = units::ps_to_fs(pulse.duration_ps);
  return {std::exp(-nu_sum * nu_sum * tau * tau / (8.0 * units::kLn2)), 0.0};
}

SpectralGrid SpectralGrid::around_pump(const PumpPulse& pulse, int points, double bandwidths) {
  const double half = bandwidths * pulse.bandwidth();
  SpectralGrid g{points, half, half};
  g.validate();
  return g;
}

void SpectralGrid::validate() const {
  if (points < 2) throw ConfigError(fmt::format("grid needs >= 2 points per axis (got {})", points));
  if (!(half_range_s > 0.0) || !(half_range_i > 0.0)) {
    throw ConfigError("grid ranges must have positive width");
  }
}

double JointAmplitude::norm() const {
  const std::span<const std::complex<double>> flat(values.data(),
                                                   static_cast<std::size_t>(values.size()));
  return kernels::sum_abs2(flat) * grid.cell_area();
}

void JointAmplitude::normalize() {
  const double total = norm();
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw NumericError(fmt::format("cannot normalize amplitude with norm {}", total));
  }
  values /= std::sqrt(total);
  normalized = true;
}

RealGrid JointAmplitude::intensity() const { return values.cwiseAbs2(); }

JointAmplitude build_jsa(const CrystalSpec& crystal_in, const PumpPulse& pulse,
                         const SpectralGrid& grid) {
  grid.validate();
  CrystalSpec crystal = crystal_in;
  crystal.validate();
  const double signal_nm = 2.0 * pulse.center_nm;
  const double idler_nm = 2.0 * pulse.center_nm;
  if (!crystal.poling) {
    crystal.poling = solve_poling_period(crystal, pulse.center_nm, signal_nm, idler_nm);
  }
  const auto& sell = crystal.sellmeier;
  const double ws0 = units::angular_frequency(signal_nm);
  const double wi0 = units::angular_frequency(idler_nm);
  const double grating = crystal.poling->wavevector();
  const auto n = static_cast<std::size_t>(grid.points);

  std::vector<double> ws(n), wi(n), ks(n), ki(n);
  for (std::size_t j = 0; j < n; ++j) {
    ws[j] = ws0 + grid.nu_s(static_cast<int>(j));
    wi[j] = wi0 + grid.nu_i(static_cast<int>(j));
  }
  try {
    wavenumbers_at(sell, crystal.signal_axis, ws, ks);
    wavenumbers_at(sell, crystal.idler_axis, wi, ki);
  } catch (const RangeError& e) {
    throw RangeError(fmt::format("grid edge nu_s=+-{}, nu_i=+-{} rad/fs: {}", grid.half_range_s,
                                 grid.half_range_i, e.what()));
  }

  JointAmplitude jsa;
  jsa.grid = grid;
  jsa.signal_center_nm = signal_nm;
  jsa.idler_center_nm = idler_nm;
  jsa.values.resize(grid.points, grid.points);

  std::vector<double> wp(n), kp(n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) wp[c] = ws[r] + wi[c];
    try {
      wavenumbers_at(sell, crystal.pump_axis, wp, kp);
    } catch (const RangeError& e) {
      throw RangeError(fmt::format("grid row nu_s={} rad/fs: {}", grid.nu_s(static_cast<int>(r)),
                                   e.what()));
    }
    const double nu_s = grid.nu_s(static_cast<int>(r));
    for (std::size_t c = 0; c < n; ++c) {
      const double dk = kp[c] - ks[r] - ki[c] - grating;
      const double nu_i = grid.nu_i(static_cast<int>(c));
      jsa.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          pump_envelope(pulse, nu_s + nu_i) * phase_matching_function(dk, crystal.length_mm);
    }
  }
  jsa.normalize();
  return jsa;
}

JointAmplitude build_jsa(const PumpPulse& pulse, const SpectralGrid& grid,
                         const PhaseMatchingFn& phase_matching) {
  grid.validate();
  JointAmplitude jsa;
  jsa.grid = grid;
  jsa.signal_center_nm = 2.0 * pulse.center_nm;
  jsa.idler_center_nm = 2.0 * pulse.center_nm;
  jsa.values.resize(grid.points, grid.points);
  for (int r = 0; r < grid.points; ++r) {
    for (int c = 0; c < grid.points; ++c) {
      const double nu_s = grid.nu_s(r);
      const double nu_i = grid.nu_i(c);
      jsa.values(r, c) = pump_envelope(pulse, nu_s + nu_i) * phase_matching(nu_s, nu_i);
    }
  }
  jsa.normalize();
  return jsa;
}

SchmidtResult schmidt_decompose(const ComplexGrid& amplitude) {
  if (amplitude.size() == 0) throw DomainError("empty amplitude matrix");
  if (!amplitude.allFinite()) throw NumericError("amplitude matrix has non-finite entries");
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(amplitude);
  if (svd.info() != Eigen::Success) throw NumericError("singular value decomposition failed");
  const Eigen::VectorXd s2 = svd.singularValues().array().square();
  const double total = s2.sum();
  if (!(total > 0.0)) throw DomainError("amplitude matrix is identically zero");

  SchmidtResult out;
  out.coefficients.resize(static_cast<std::size_t>(s2.size()));
  double sum_sq = 0.0;
  for (Eigen::Index j = 0; j < s2.size(); ++j) {
    const double lam = s2[j] / total;
    out.coefficients[static_cast<std::size_t>(j)] = lam;
    sum_sq += lam * lam;
  }
  out.schmidt_number = 1.0 / sum_sq;
  out.purity = sum_sq;
  return out;
}

SchmidtResult schmidt_decompose(const JointAmplitude& jsa) { return schmidt_decompose(jsa.values); }

double schmidt_number_for(const CrystalSpec& crystal, double pump_nm, double duration_ps,
                          const PulseSearchOptions& options) {
  const PumpPulse pulse{pump_nm, duration_ps};
  const auto grid = SpectralGrid::around_pump(pulse, options.grid_points, options.grid_bandwidths);
  return schmidt_decompose(build_jsa(crystal, pulse, grid)).schmidt_number;
}

PulseOptimum optimal_pulse_duration(const CrystalSpec& crystal_in, double pump_nm, double min_ps,
                                    double max_ps, const PulseSearchOptions& options) {
  if (!(min_ps > 0.0) || !(max_ps > min_ps)) {
    throw ConfigError(fmt::format("invalid pulse search range [{}, {}] ps", min_ps, max_ps));
  }
  CrystalSpec crystal = crystal_in;
  crystal.validate();
  if (!crystal.poling) {
    crystal.poling = solve_poling_period(crystal, pump_nm, 2.0 * pump_nm, 2.0 * pump_nm);
  }

  std::map<double, double> cache;
  auto schmidt_at = [&](double tau) {
    auto it = cache.find(tau);
    if (it != cache.end()) return it->second;
    const double k = schmidt_number_for(crystal, pump_nm, tau, options);
    cache.emplace(tau, k);
    return k;
  };

  const auto steps = static_cast<int>(std::ceil((max_ps - min_ps) / options.coarse_step_ps - 1e-9));
  std::vector<double> taus;
  for (int j = 0; j <= steps; ++j) taus.push_back(std::min(max_ps, min_ps + j * options.coarse_step_ps));
  std::size_t best = 0;
  for (std::size_t j = 0; j < taus.size(); ++j) {
    if (schmidt_at(taus[j]) < schmidt_at(taus[best])) best = j;
  }
  if (best == 0 || best + 1 == taus.size()) {
    return {taus[best], schmidt_at(taus[best]), true};
  }

  // Golden-section search on the coarse bracket.
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = taus[best - 1];
  double b = taus[best + 1];
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = schmidt_at(c);
  double fd = schmidt_at(d);
  while (b - a > options.tolerance_ps) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = schmidt_at(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = schmidt_at(d);
    }
  }
  const double tau = 0.5 * (a + b);
  PulseOptimum out{tau, schmidt_at(tau), false};
  // The midpoint can be marginally worse than the best probed interior point.
  for (double probe : {c, d}) {
    const double k = schmidt_at(probe);
    if (k < out.schmidt_number) out = {probe, k, false};
  }
  return out;
}

}  // namespace spdc
