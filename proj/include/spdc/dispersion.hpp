#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <string_view>

#include <nlohmann/json.hpp>

namespace spdc {

enum class Axis { x, y, z };

Axis parse_axis(std::string_view label);
std::string_view axis_name(Axis axis);

/// Coefficients of the two-pole + quadratic Sellmeier form, wavelength in um:
///
///   n^2(l) = a + b / (l^2 - c) + d / (l^2 - e) - f * l^2
///
/// Single-pole datasets set d = 0; datasets without the IR correction set f = 0.
struct SellmeierCoefficients {
  double a = 1.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;
  double e = 0.0;
  double f = 0.0;

  static SellmeierCoefficients constant_index(double n) { return {n * n, 0, 0, 0, 0, 0}; }
};

inline constexpr std::string_view kSellmeierFormulaId = "sellmeier_two_pole_quadratic_um";

/// Material dispersion dataset. Immutable after construction.
class SellmeierSet {
public:
  SellmeierSet(std::string material, std::map<Axis, SellmeierCoefficients> axes, double min_nm,
               double max_nm, std::string citation);

  /// Parses the crystal data file schema:
  /// {material, formula_id, axes: {x|y|z: [a,b,c,d,e,f]}, range_nm: [min,max], citation}.
  /// Unknown fields are rejected.
  static SellmeierSet from_json(const nlohmann::json& doc);
  static SellmeierSet load(const std::filesystem::path& path);

  nlohmann::json to_json() const;

  /// Same coefficient set on every requested axis: n(l) == n exactly.
  static SellmeierSet constant(double n, double min_nm = 300.0, double max_nm = 4000.0);

  const std::string& material() const { return material_; }
  const std::string& citation() const { return citation_; }
  double min_nm() const { return min_nm_; }
  double max_nm() const { return max_nm_; }
  bool has_axis(Axis axis) const { return axes_.contains(axis); }
  const SellmeierCoefficients& coefficients(Axis axis) const;

  /// Throws RangeError naming the axis and bounds when lambda_nm is outside the range.
  void check_range(Axis axis, double lambda_nm) const;

private:
  std::string material_;
  std::map<Axis, SellmeierCoefficients> axes_;
  double min_nm_;
  double max_nm_;
  std::string citation_;
};

/// Refractive index on one crystal axis.
double refractive_index(const SellmeierSet& set, Axis axis, double lambda_nm);

/// k = 2 pi n / lambda, in rad/um.
double wavenumber(double n, double lambda_nm);

/// dk/domega at the carrier, fs/um, from the analytic Sellmeier derivative.
double inverse_group_velocity(const SellmeierSet& set, Axis axis, double lambda_nm);

/// Group index n - lambda dn/dlambda.
double group_index(const SellmeierSet& set, Axis axis, double lambda_nm);

/// Wavenumber (rad/um) at an angular frequency (rad/fs).
double wavenumber_at(const SellmeierSet& set, Axis axis, double omega);

/// Batched wavenumbers for a span of angular frequencies (rad/fs). Runs through
/// the dispatched Sellmeier kernel; results are bit-identical to wavenumber_at.
void wavenumbers_at(const SellmeierSet& set, Axis axis, std::span<const double> omega,
                    std::span<double> k_out);

/// Geometry and material of a quasi-phase-matched crystal.
struct PolingGrating {
  double period_um = 0.0;
  /// +1 when the grating vector points along the pump (subtracted from k_p - k_s - k_i),
  /// -1 when it points the other way.
  int orientation = +1;

  double wavevector() const;  // signed grating wavevector, rad/um
};

struct CrystalSpec {
  explicit CrystalSpec(SellmeierSet set) : sellmeier(std::move(set)) {}

  SellmeierSet sellmeier;
  double length_mm = 20.0;
  std::optional<PolingGrating> poling;
  Axis pump_axis = Axis::y;
  Axis signal_axis = Axis::y;
  Axis idler_axis = Axis::z;
  Axis propagation_axis = Axis::x;

  /// L > 0, period > 0, type-II (signal_axis != idler_axis), axes defined in the dataset.
  void validate() const;
  double length_um() const;
};

}  // namespace spdc
