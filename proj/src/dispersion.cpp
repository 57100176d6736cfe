#include "spdc/dispersion.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include <fmt/format.h>

#include "spdc/error.hpp"
#include "spdc/kernels.hpp"
#include "spdc/units.hpp"

namespace spdc {

namespace {

// Relative clearance from the range edges required for the group-velocity derivative.
constexpr double kDerivativeMargin = 1e-3;

double index_at_um(const SellmeierCoefficients& c, double lambda_um) {
  double n = 0.0;
  kernels::scalar::sellmeier_index(c, std::span<const double>(&lambda_um, 1),
                                   std::span<double>(&n, 1));
  return n;
}

void check_index(double n, Axis axis, double lambda_nm) {
  if (!std::isfinite(n) || n <= 1.0 || n >= 4.0) {
    throw NumericError(fmt::format("refractive index {} on axis {} at {} nm outside (1, 4)", n,
                                   axis_name(axis), lambda_nm));
  }
}

}  // namespace

Axis parse_axis(std::string_view label) {
  if (label == "x") return Axis::x;
  if (label == "y") return Axis::y;
  if (label == "z") return Axis::z;
  throw ConfigError(fmt::format("unknown crystal axis '{}' (expected x, y or z)", label));
}

std::string_view axis_name(Axis axis) {
  switch (axis) {
    case Axis::x:
      return "x";
    case Axis::y:
      return "y";
    case Axis::z:
      return "z";
  }
  return "?";
}

SellmeierSet::SellmeierSet(std::string material, std::map<Axis, SellmeierCoefficients> axes,
                           double min_nm, double max_nm, std::string citation)
    : material_(std::move(material)),
      axes_(std::move(axes)),
      min_nm_(min_nm),
      max_nm_(max_nm),
      citation_(std::move(citation)) {
  if (!(min_nm_ > 0.0) || !(max_nm_ > min_nm_)) {
    throw ConfigError(fmt::format("invalid validity range [{}, {}] nm", min_nm_, max_nm_));
  }
  if (axes_.empty()) throw ConfigError("Sellmeier set defines no axes");
}

SellmeierSet SellmeierSet::constant(double n, double min_nm, double max_nm) {
  const auto c = SellmeierCoefficients::constant_index(n);
  return SellmeierSet(fmt::format("constant-n{}", n), {{Axis::x, c}, {Axis::y, c}, {Axis::z, c}},
                      min_nm, max_nm, "test fixture");
}

const SellmeierCoefficients& SellmeierSet::coefficients(Axis axis) const {
  auto it = axes_.find(axis);
  if (it == axes_.end()) {
    throw ConfigError(
        fmt::format("material '{}' has no coefficients for axis {}", material_, axis_name(axis)));
  }
  return it->second;
}

void SellmeierSet::check_range(Axis axis, double lambda_nm) const {
  if (!(lambda_nm >= min_nm_ && lambda_nm <= max_nm_)) {
    throw RangeError(fmt::format("wavelength {} nm on axis {} outside validity range [{}, {}] nm",
                                 lambda_nm, axis_name(axis), min_nm_, max_nm_));
  }
}

SellmeierSet SellmeierSet::from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ConfigError("crystal data must be a JSON object");
  static const std::set<std::string> known = {"material", "formula_id", "axes", "range_nm",
                                              "citation"};
  for (const auto& [key, _] : doc.items()) {
    if (!known.contains(key)) throw ConfigError(fmt::format("unknown crystal data field '{}'", key));
  }
  for (const auto& key : known) {
    if (!doc.contains(key)) throw ConfigError(fmt::format("missing crystal data field '{}'", key));
  }
  try {
    const auto formula = doc.at("formula_id").get<std::string>();
    if (formula != kSellmeierFormulaId) {
      throw ConfigError(fmt::format("unsupported formula_id '{}' (expected '{}')", formula,
                                    kSellmeierFormulaId));
    }
    const auto& range = doc.at("range_nm");
    if (!range.is_array() || range.size() != 2) {
      throw ConfigError("range_nm must be [min, max]");
    }
    std::map<Axis, SellmeierCoefficients> axes;
    const auto& axes_doc = doc.at("axes");
    if (!axes_doc.is_object()) throw ConfigError("axes must be an object keyed by x, y, z");
    for (const auto& [label, coeffs] : axes_doc.items()) {
      const Axis axis = parse_axis(label);
      if (!coeffs.is_array() || coeffs.size() != 6) {
        throw ConfigError(fmt::format("axis {} needs 6 coefficients [a,b,c,d,e,f]", label));
      }
      const auto v = coeffs.get<std::vector<double>>();
      axes[axis] = SellmeierCoefficients{v[0], v[1], v[2], v[3], v[4], v[5]};
    }
    SellmeierSet set(doc.at("material").get<std::string>(), std::move(axes),
                     range[0].get<double>(), range[1].get<double>(),
                     doc.at("citation").get<std::string>());
    // Reject datasets that leave the physical index band anywhere in their range.
    for (const auto& [axis, c] : set.axes_) {
      for (int j = 0; j <= 64; ++j) {
        const double l_nm = set.min_nm_ + (set.max_nm_ - set.min_nm_) * j / 64.0;
        const double n = index_at_um(c, units::nm_to_um(l_nm));
        if (!std::isfinite(n) || n <= 1.0 || n >= 4.0) {
          throw ConfigError(fmt::format("axis {} gives n = {} at {} nm, outside (1, 4)",
                                        axis_name(axis), n, l_nm));
        }
      }
    }
    return set;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(fmt::format("malformed crystal data: {}", e.what()));
  }
}

SellmeierSet SellmeierSet::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open crystal data file '{}'", path.string()));
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(fmt::format("cannot parse '{}': {}", path.string(), e.what()));
  }
  return from_json(doc);
}

nlohmann::json SellmeierSet::to_json() const {
  nlohmann::json axes = nlohmann::json::object();
  for (const auto& [axis, c] : axes_) {
    axes[std::string(axis_name(axis))] = {c.a, c.b, c.c, c.d, c.e, c.f};
  }
  return {{"material", material_},
          {"formula_id", kSellmeierFormulaId},
          {"axes", axes},
          {"range_nm", {min_nm_, max_nm_}},
          {"citation", citation_}};
}

double refractive_index(const SellmeierSet& set, Axis axis, double lambda_nm) {
  const auto& c = set.coefficients(axis);
  set.check_range(axis, lambda_nm);
  const double n = index_at_um(c, units::nm_to_um(lambda_nm));
  check_index(n, axis, lambda_nm);
  return n;
}

double wavenumber(double n, double lambda_nm) {
  if (!(n > 0.0) || !(lambda_nm > 0.0)) {
    throw DomainError(fmt::format("wavenumber needs n > 0 and lambda > 0 (got n={}, lambda={} nm)",
                                  n, lambda_nm));
  }
  return units::kTwoPi * n / units::nm_to_um(lambda_nm);
}

double group_index(const SellmeierSet& set, Axis axis, double lambda_nm) {
  const auto& c = set.coefficients(axis);
  const double lo = set.min_nm() * (1.0 + kDerivativeMargin);
  const double hi = set.max_nm() * (1.0 - kDerivativeMargin);
  if (!(lambda_nm > lo && lambda_nm < hi)) {
    throw RangeError(fmt::format(
        "wavelength {} nm on axis {} too close to the validity range [{}, {}] nm for a derivative",
        lambda_nm, axis_name(axis), set.min_nm(), set.max_nm()));
  }
  const double l = units::nm_to_um(lambda_nm);
  const double l2 = l * l;
  const double n = index_at_um(c, l);
  check_index(n, axis, lambda_nm);
  const double p1 = l2 - c.c;
  const double p2 = l2 - c.e;
  // d(n^2)/dl = 2 l (-b/p1^2 - d/p2^2 - f)
  const double dn2_dl = 2.0 * l * (-c.b / (p1 * p1) - c.d / (p2 * p2) - c.f);
  const double dn_dl = dn2_dl / (2.0 * n);
  return n - l * dn_dl;
}

double inverse_group_velocity(const SellmeierSet& set, Axis axis, double lambda_nm) {
  return group_index(set, axis, lambda_nm) / units::kSpeedOfLight;
}

double wavenumber_at(const SellmeierSet& set, Axis axis, double omega) {
  double k = 0.0;
  wavenumbers_at(set, axis, std::span<const double>(&omega, 1), std::span<double>(&k, 1));
  return k;
}

void wavenumbers_at(const SellmeierSet& set, Axis axis, std::span<const double> omega,
                    std::span<double> k_out) {
  const auto& c = set.coefficients(axis);
  std::vector<double> lambda_um(omega.size());
  for (std::size_t j = 0; j < omega.size(); ++j) {
    if (!(omega[j] > 0.0)) {
      throw DomainError(fmt::format("angular frequency {} rad/fs is not positive", omega[j]));
    }
    lambda_um[j] = units::kTwoPi * units::kSpeedOfLight / omega[j];
    set.check_range(axis, units::um_to_nm(lambda_um[j]));
  }
  kernels::sellmeier_index(c, lambda_um, k_out);
  for (std::size_t j = 0; j < omega.size(); ++j) {
    check_index(k_out[j], axis, units::um_to_nm(lambda_um[j]));
    k_out[j] = k_out[j] * omega[j] / units::kSpeedOfLight;
  }
}

double PolingGrating::wavevector() const {
  return static_cast<double>(orientation) * units::kTwoPi / period_um;
}

void CrystalSpec::validate() const {
  if (!(length_mm > 0.0)) throw ConfigError(fmt::format("crystal length {} mm must be > 0", length_mm));
  if (poling) {
    if (!(poling->period_um > 0.0)) {
      throw ConfigError(fmt::format("poling period {} um must be > 0", poling->period_um));
    }
    if (poling->orientation != 1 && poling->orientation != -1) {
      throw ConfigError("grating orientation must be +1 or -1");
    }
  }
  if (signal_axis == idler_axis) {
    throw ConfigError("type-II configuration needs orthogonal signal and idler axes");
  }
  for (Axis a : {pump_axis, signal_axis, idler_axis}) sellmeier.coefficients(a);
}

double CrystalSpec::length_um() const { return units::mm_to_um(length_mm); }

}  // namespace spdc
