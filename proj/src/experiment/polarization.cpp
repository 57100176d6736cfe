#include "spdc/experiment/polarization.hpp"

#include <cmath>

#include <boost/math/tools/roots.hpp>
#include <fmt/format.h>

#include "spdc/error.hpp"
#include "spdc/units.hpp"

namespace spdc {

namespace {

using Jones = std::array<std::complex<double>, 2>;  // (H, V)

/// Half-wave plate with its fast axis at theta from H.
Jones half_wave_plate(double theta_deg, const Jones& in) {
  const double t = 2.0 * units::deg_to_rad(theta_deg);
  const double c = std::cos(t);
  const double s = std::sin(t);
  return {c * in[0] + s * in[1], s * in[0] - c * in[1]};
}

}  // namespace

double TwoPhotonState::norm() const {
  double sum = 0.0;
  for (const auto& a : amplitude) sum += std::norm(a);
  return std::sqrt(sum);
}

TwoPhotonState displacer_state(const PolarizationModel& model) {
  const Jones h{1.0, 0.0};
  const Jones v{0.0, 1.0};
  const Jones s2 = half_wave_plate(45.0 + model.delta1_deg, h);
  const Jones i2 = half_wave_plate(45.0 + model.delta2_deg, v);
  const std::complex<double> phase = std::polar(1.0, model.phi_rad);

  TwoPhotonState st;
  st.amplitude[1] = 1.0;  // path 1: |H>_s |V>_i
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) st.amplitude[2 * a + b] += phase * s2[a] * i2[b];
  }
  const double n = st.norm();
  if (!(n > 0.0)) throw NumericError("displacer paths interfere to a null state");
  for (auto& amp : st.amplitude) amp /= n;
  return st;
}

double coincidence_probability(const TwoPhotonState& state, double theta_a_deg, double theta_b_deg) {
  if (std::abs(state.norm() - 1.0) > 1e-9) {
    throw DomainError(fmt::format("state norm {} is not 1", state.norm()));
  }
  const double ta = units::deg_to_rad(theta_a_deg);
  const double tb = units::deg_to_rad(theta_b_deg);
  const double ca = std::cos(ta), sa = std::sin(ta);
  const double cb = std::cos(tb), sb = std::sin(tb);
  const auto& a = state.amplitude;
  const std::complex<double> proj = ca * cb * a[0] + ca * sb * a[1] + sa * cb * a[2] + sa * sb * a[3];
  return std::norm(proj);
}

double basis_visibility(const TwoPhotonState& state, double analyzer_deg) {
  const double same = coincidence_probability(state, analyzer_deg, analyzer_deg);
  const double cross = coincidence_probability(state, analyzer_deg, analyzer_deg + 90.0);
  if (!(same + cross > 0.0)) throw NumericError("no coincidences in the analysis basis");
  return (same - cross) / (same + cross);
}

double calibrate_waveplate_error(double target_visibility) {
  if (!(target_visibility > 0.0) || target_visibility > 1.0) {
    throw DomainError(fmt::format("target visibility {} not in (0, 1]", target_visibility));
  }
  auto residual = [&](double delta) {
    return basis_visibility(displacer_state({delta, delta, 0.0})) - target_visibility;
  };
  if (residual(0.0) <= 0.0) return 0.0;
  boost::uintmax_t iterations = 200;
  const auto [lo, hi] = boost::math::tools::toms748_solve(
      residual, 0.0, 22.5, boost::math::tools::eps_tolerance<double>(50), iterations);
  return 0.5 * (lo + hi);
}

}  // namespace spdc
