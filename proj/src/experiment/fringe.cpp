#include "spdc/experiment/fringe.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "spdc/error.hpp"
#include "spdc/units.hpp"

namespace spdc {

namespace {

// Free phase: p = (C0, u, theta0), model C0 [1 - V cos 2(t - theta0)].
// Fixed phase: p = (C0, u, W), model C0 [1 - V cos 2(t - theta0) + W sin 2(t - theta0)];
// W absorbs the quadrature part so V is the contrast along the reference axis.
struct FringeProblem {
  std::span<const double> theta;  // rad
  std::span<const double> y;
  std::span<const double> sigma;
  bool fit_phase = true;
  double fixed_phase = 0.0;  // rad

  static constexpr int params() { return 3; }

  double phase(const Eigen::VectorXd& p) const { return fit_phase ? p[2] : fixed_phase; }
  double quadrature(const Eigen::VectorXd& p) const { return fit_phase ? 0.0 : p[2]; }

  Eigen::VectorXd residuals(const Eigen::VectorXd& p) const {
    Eigen::VectorXd r(static_cast<Eigen::Index>(y.size()));
    const double v = std::pow(std::sin(p[1]), 2);
    const double w = quadrature(p);
    for (std::size_t j = 0; j < y.size(); ++j) {
      const double psi = 2.0 * (theta[j] - phase(p));
      const double model = p[0] * (1.0 - v * std::cos(psi) + w * std::sin(psi));
      r[static_cast<Eigen::Index>(j)] = (model - y[j]) / sigma[j];
    }
    return r;
  }

  // dv_du = 1 gives the Jacobian in the physical parameters (C0, V, theta0 | W).
  Eigen::MatrixXd jacobian(double c0, double v, double dv_du, double phase0, double w) const {
    Eigen::MatrixXd jac(static_cast<Eigen::Index>(y.size()), params());
    for (std::size_t j = 0; j < y.size(); ++j) {
      const double psi = 2.0 * (theta[j] - phase0);
      const auto row = static_cast<Eigen::Index>(j);
      jac(row, 0) = (1.0 - v * std::cos(psi) + w * std::sin(psi)) / sigma[j];
      jac(row, 1) = -c0 * dv_du * std::cos(psi) / sigma[j];
      jac(row, 2) = fit_phase ? -2.0 * c0 * v * std::sin(psi) / sigma[j] : c0 * std::sin(psi) / sigma[j];
    }
    return jac;
  }

  Eigen::MatrixXd jacobian(const Eigen::VectorXd& p) const {
    return jacobian(p[0], std::pow(std::sin(p[1]), 2), std::sin(2.0 * p[1]), phase(p), quadrature(p));
  }
};

}  // namespace

FringeFit fit_visibility(std::span<const double> angles_deg, std::span<const double> counts,
                         std::span<const double> errors, const FringeFitOptions& options) {
  const std::size_t n = angles_deg.size();
  if (counts.size() != n || errors.size() != n) throw DomainError("fringe arrays differ in length");
  if (n < 6) throw DomainError(fmt::format("fringe fit needs >= 6 points (got {})", n));
  const auto [lo, hi] = std::minmax_element(angles_deg.begin(), angles_deg.end());
  if (*hi - *lo < 90.0) throw DomainError("fringe points must span at least half a period (90 deg)");
  for (std::size_t j = 0; j < n; ++j) {
    if (!(errors[j] > 0.0) || !std::isfinite(counts[j])) {
      throw DomainError("fringe errors must be positive and counts finite");
    }
  }

  std::vector<double> theta(n);
  for (std::size_t j = 0; j < n; ++j) theta[j] = units::deg_to_rad(angles_deg[j]);
  FringeProblem prob{theta, counts, errors, !options.fixed_phase_deg.has_value(),
                     units::deg_to_rad(options.fixed_phase_deg.value_or(0.0))};

  // Start from the weighted linear model a + b cos 2t + c sin 2t.
  const double ref = prob.fit_phase ? 0.0 : prob.fixed_phase;
  Eigen::MatrixXd design(static_cast<Eigen::Index>(n), 3);
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(n));
  for (std::size_t j = 0; j < n; ++j) {
    const auto row = static_cast<Eigen::Index>(j);
    const double w = 1.0 / errors[j];
    design(row, 0) = w;
    design(row, 1) = w * std::cos(2.0 * (theta[j] - ref));
    design(row, 2) = w * std::sin(2.0 * (theta[j] - ref));
    rhs[row] = w * counts[j];
  }
  const Eigen::VectorXd lin = design.colPivHouseholderQr().solve(rhs);
  Eigen::VectorXd p(prob.params());
  p[0] = std::abs(lin[0]) > 0.0 ? lin[0] : 1.0;
  double v0 = 0.5;
  if (prob.fit_phase) {
    v0 = std::hypot(lin[1], lin[2]) / std::abs(p[0]);
    p[2] = 0.5 * std::atan2(-lin[2], -lin[1]);
  } else {
    v0 = -lin[1] / p[0];
    p[2] = lin[2] / p[0];
  }
  v0 = std::clamp(v0, 1e-4, 1.0 - 1e-4);
  p[1] = std::asin(std::sqrt(v0));

  // Levenberg-Marquardt with multiplicative damping.
  double lambda = 1e-3;
  Eigen::VectorXd r = prob.residuals(p);
  double chi2 = r.squaredNorm();
  int it = 0;
  bool converged = false;
  for (; it < options.max_iterations; ++it) {
    const Eigen::MatrixXd jac = prob.jacobian(p);
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const Eigen::VectorXd grad = jac.transpose() * r;
    bool improved = false;
    for (int inner = 0; inner < 30 && !improved; ++inner) {
      Eigen::MatrixXd damped = jtj;
      damped.diagonal() += lambda * jtj.diagonal().cwiseMax(1e-12);
      const Eigen::VectorXd step = damped.ldlt().solve(-grad);
      const Eigen::VectorXd trial = p + step;
      const Eigen::VectorXd rt = prob.residuals(trial);
      const double chi2_trial = rt.squaredNorm();
      if (std::isfinite(chi2_trial) && chi2_trial <= chi2) {
        const double drop = chi2 - chi2_trial;
        p = trial;
        r = rt;
        chi2 = chi2_trial;
        lambda = std::max(lambda * 0.3, 1e-12);
        improved = true;
        if (drop <= 1e-14 * std::max(chi2, 1e-300) || step.norm() <= 1e-13 * (1.0 + p.norm())) {
          converged = true;
        }
      } else {
        lambda *= 10.0;
      }
    }
    if (!improved) {
      // No downhill step at any damping: at a minimum to machine precision.
      converged = grad.norm() <= 1e-6 * (1.0 + chi2);
      break;
    }
    if (converged) break;
  }
  if (!converged) {
    throw FitError(fmt::format("fringe fit did not converge after {} iterations (chi2 = {}, rms residual = {})",
                               it, chi2, std::sqrt(chi2 / static_cast<double>(n))));
  }

  FringeFit fit;
  fit.amplitude = p[0];
  fit.visibility = std::pow(std::sin(p[1]), 2);
  const double phase0 = prob.phase(p);
  // Report theta0 in (-90, 90].
  double ph = units::rad_to_deg(phase0);
  ph = std::fmod(ph, 180.0);
  if (ph <= -90.0) ph += 180.0;
  if (ph > 90.0) ph -= 180.0;
  fit.phase_deg = ph;
  fit.chi2 = chi2;
  fit.dof = static_cast<int>(n) - prob.params();
  fit.iterations = it;

  fit.quadrature = prob.quadrature(p);
  const Eigen::MatrixXd jp = prob.jacobian(fit.amplitude, fit.visibility, 1.0, phase0, fit.quadrature);
  const Eigen::MatrixXd info = jp.transpose() * jp;
  const Eigen::MatrixXd cov = info.inverse();
  if (!cov.allFinite() || cov(1, 1) < 0.0) throw FitError("singular fringe-fit covariance");
  fit.visibility_sigma = std::sqrt(cov(1, 1));
  return fit;
}

std::vector<double> FringeSettings::angles() const {
  if (!analyzer_b_deg.empty()) return analyzer_b_deg;
  std::vector<double> out;
  for (int j = 0; j <= 18; ++j) out.push_back(10.0 * j);
  return out;
}

FringeData acquire_fringe(const SourceModel& source, const EfficiencyChain& chain_a,
                          const EfficiencyChain& chain_b, const TwoPhotonState& state,
                          double power_mW, const FringeSettings& settings, std::uint64_t seed) {
  source.validate();
  if (!(power_mW >= 0.0)) throw DomainError("pump power must be >= 0");
  if (!(settings.dwell_s > 0.0)) throw ConfigError("fringe dwell must be > 0");
  const double eta_a = chain_total(chain_a);
  const double eta_b = chain_total(chain_b);
  const double ta = settings.analyzer_a_deg;

  FringeData data;
  data.power_mW = power_mW;
  data.angles_deg = settings.angles();
  const auto gates = static_cast<std::uint64_t>(
      std::llround(chain_a.detector.trigger_rate_MHz * 1e6 * settings.dwell_s));

  for (std::size_t k = 0; k < data.angles_deg.size(); ++k) {
    const double tb = data.angles_deg[k];
    const double joint = coincidence_probability(state, ta, tb);
    const double pass_a = joint + coincidence_probability(state, ta, tb + 90.0);
    const double pass_b = joint + coincidence_probability(state, ta + 90.0, tb);

    GateModel model;
    model.mean_pairs = source.mean_pairs_per_pulse_per_mW() * power_mW;
    model.pair = {eta_a * pass_a, eta_b * pass_b, eta_a * eta_b * joint};
    model.dark_a = chain_a.detector.dark_count_prob_per_gate;
    model.dark_b = chain_b.detector.dark_count_prob_per_gate;

    Rng rng(derive_seed(seed, k));
    const auto c = simulate_gates(model, gates, rng);
    CountRecord rec;
    rec.duration_s = settings.dwell_s;
    rec.pump_power_mW = power_mW;
    rec.gates = gates;
    rec.singles_a = c.singles_a;
    rec.singles_b = c.singles_b;
    rec.coincidences = c.coincidences;
    rec.accidental_estimate = estimate_accidentals(static_cast<double>(c.singles_a),
                                                   static_cast<double>(c.singles_b),
                                                   static_cast<double>(gates));
    data.records.push_back(rec);
    data.raw.push_back(static_cast<double>(c.coincidences));
    data.subtracted.push_back(static_cast<double>(c.coincidences) - rec.accidental_estimate);
    data.sigma.push_back(std::sqrt(std::max(1.0, static_cast<double>(c.coincidences))));
  }
  return data;
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y, std::span<const double> sigma) {
  const std::size_t n = x.size();
  if (y.size() != n || sigma.size() != n) throw DomainError("line-fit arrays differ in length");
  if (n < 2) throw DomainError("line fit needs >= 2 points");
  double s = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (!(sigma[j] > 0.0)) throw DomainError("line-fit errors must be positive");
    const double w = 1.0 / (sigma[j] * sigma[j]);
    s += w;
    sx += w * x[j];
    sy += w * y[j];
    sxx += w * x[j] * x[j];
    sxy += w * x[j] * y[j];
  }
  const double det = s * sxx - sx * sx;
  if (!(det > 0.0)) throw NumericError("degenerate abscissae in line fit");
  LinearFit f;
  f.slope = (s * sxy - sx * sy) / det;
  f.intercept = (sxx * sy - sx * sxy) / det;
  f.slope_se = std::sqrt(s / det);
  f.intercept_se = std::sqrt(sxx / det);
  return f;
}

VisibilityRow measure_visibility(const VisibilityPipeline& pipeline, double power_mW,
                                 std::uint64_t seed, FringeData* data_out) {
  const auto state = displacer_state(pipeline.polarization);
  const auto data = acquire_fringe(pipeline.source, pipeline.chain_a, pipeline.chain_b, state,
                                   power_mW, pipeline.fringe, seed);
  FringeFitOptions opts;
  if (pipeline.basis_referenced) opts.fixed_phase_deg = -pipeline.fringe.analyzer_a_deg;
  VisibilityRow row;
  row.power_mW = power_mW;
  row.raw = fit_visibility(data.angles_deg, data.raw, data.sigma, opts);
  row.subtracted = fit_visibility(data.angles_deg, data.subtracted, data.sigma, opts);
  if (data_out) *data_out = data;
  return row;
}

VisibilityVsPower visibility_vs_power(const VisibilityPipeline& pipeline,
                                      std::span<const double> powers_mW, std::uint64_t seed) {
  if (powers_mW.empty()) throw ConfigError("visibility sweep needs at least one power");
  VisibilityVsPower out;
  for (std::size_t j = 0; j < powers_mW.size(); ++j) {
    try {
      out.rows.push_back(measure_visibility(pipeline, powers_mW[j], derive_seed(seed, 1000 + j)));
    } catch (const FitError& e) {
      throw FitError(fmt::format("at {} mW: {}", powers_mW[j], e.what()));
    }
  }
  if (out.rows.size() >= 2) {
    std::vector<double> x, vr, sr, vs, ss;
    for (const auto& row : out.rows) {
      x.push_back(row.power_mW);
      vr.push_back(row.raw.visibility);
      sr.push_back(row.raw.visibility_sigma);
      vs.push_back(row.subtracted.visibility);
      ss.push_back(row.subtracted.visibility_sigma);
    }
    out.raw_trend = fit_line(x, vr, sr);
    out.subtracted_trend = fit_line(x, vs, ss);
  }
  return out;
}

}  // namespace spdc
