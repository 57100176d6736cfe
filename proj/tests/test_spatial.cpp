#include <doctest.h>

#include <cmath>
#include <map>

#include "spdc/error.hpp"
#include "spdc/spatial.hpp"
#include "spdc/units.hpp"
#include "support.hpp"

using namespace spdc;
using spdc::test::golden;

TEST_CASE("waist and divergence identity") {
  const auto m = mode_from_divergence(776.0, 13.1);
  CHECK(m.waist_um == doctest::Approx(golden("pump_waist_um")).epsilon(1e-12));
  CHECK(m.waist_um == doctest::Approx(18.9).epsilon(0.01));
  CHECK(std::abs(units::mrad_to_rad(m.divergence_mrad) * m.waist_um - 0.776 / units::kPi) < 1e-9);

  const auto back = mode_from_waist(776.0, m.waist_um);
  CHECK(std::abs(back.divergence_mrad - 13.1) < 1e-12);

  const auto doubled = mode_from_waist(1552.0, m.waist_um);
  CHECK(doubled.divergence_mrad == doctest::Approx(2.0 * back.divergence_mrad).epsilon(1e-14));

  CHECK_THROWS_AS(mode_from_divergence(776.0, 0.0), DomainError);
  CHECK_THROWS_AS(mode_from_waist(-1.0, 10.0), DomainError);
}

TEST_CASE("calibrated focusing reproduces the reference pump") {
  const auto crystal = test::reference_crystal();
  CHECK(kOptimalFocusingParameter == doctest::Approx(golden("focusing_parameter")).epsilon(1e-12));
  CHECK(kOptimalFocusingParameter == doctest::Approx(4.0).epsilon(0.05));
  const auto pump = optimal_pump_focus(crystal, 776.0);
  CHECK(std::abs(pump.divergence_mrad - 13.1) <= 0.1);
  CHECK(focusing_parameter(crystal, pump) == doctest::Approx(kOptimalFocusingParameter).epsilon(1e-12));
}

TEST_CASE("divergence scales as L^-1/2 at fixed focusing") {
  auto crystal = test::reference_crystal();
  const double t1 = optimal_pump_focus(crystal, 776.0).divergence_mrad;
  crystal.length_mm *= 4.0;
  const double t4 = optimal_pump_focus(crystal, 776.0).divergence_mrad;
  CHECK(t4 == doctest::Approx(0.5 * t1).epsilon(1e-12));
}

TEST_CASE("collection modes") {
  const auto pump = mode_from_divergence(776.0, 13.1);
  const auto [s, i] = collection_modes(pump, 1552.0, 1552.0);
  CHECK(std::abs(s.divergence_mrad / pump.divergence_mrad - std::sqrt(2.0)) < 1e-9);
  CHECK(std::abs(i.divergence_mrad / pump.divergence_mrad - std::sqrt(2.0)) < 1e-9);
  // Within 3% of the measured 18.4 and 18.1 mrad.
  CHECK(std::abs(s.divergence_mrad - 18.4) / 18.4 < 0.03);
  CHECK(std::abs(i.divergence_mrad - 18.1) / 18.1 < 0.03);

  for (double theta : {2.0, 7.5, 13.1, 40.0}) {
    const auto p = mode_from_divergence(700.0, theta);
    const auto modes = collection_modes(p, 1400.0, 1400.0);
    const double ratio = modes.first.divergence_mrad / p.divergence_mrad;
    CHECK(ratio >= 1.40);
    CHECK(ratio <= 1.42);
  }
}

TEST_CASE("dispersionless fixture gives the exact sqrt(2) ratio") {
  std::map<Axis, SellmeierCoefficients> axes{{Axis::y, SellmeierCoefficients::constant_index(1.8)},
                                             {Axis::z, SellmeierCoefficients::constant_index(1.9)}};
  const CrystalSpec c{SellmeierSet("fixture", axes, 300.0, 4000.0, "test")};
  const auto d = spatial_design(c, 800.0);
  CHECK(d.signal.divergence_mrad / d.pump.divergence_mrad == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(d.focusing_parameter == doctest::Approx(kOptimalFocusingParameter).epsilon(1e-12));
}
