#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace spectherm {

enum class Shape { Cylindrical, Pouch };

/// Geometry and lumped thermo-physical properties of one cell.
///
/// For pouch cells `L` is the height H, `D` the width, `k_r` the in-plane
/// conductivity k_x and `k_z` the conductivity k_y along the height. The pouch
/// model is strictly 2D and is booked with a unit depth of 1 m.
struct CellSpec {
  Shape shape = Shape::Cylindrical;
  double L = 0.0;      ///< height [m]
  double R_out = 0.0;  ///< outer radius [m], cylinder only
  double R_in = 0.0;   ///< inner (mandrel) radius [m], cylinder only
  double D = 0.0;      ///< width [m], pouch only
  double rho = 0.0;    ///< density [kg/m^3]
  double cp = 0.0;     ///< specific heat [J/(kg K)]
  double k_r = 0.0;    ///< radial / x conductivity [W/(m K)]
  double k_z = 0.0;    ///< axial / y conductivity [W/(m K)]

  /// Throws std::invalid_argument when an invariant is violated.
  void validate() const;

  double heat_capacity_density() const { return rho * cp; }
};

/// 45 Ah LFP cylindrical cell (L = 198 mm, R_out = 32 mm, R_in = 4 mm).
CellSpec lfp_cylinder();

/// Cell volume; pouch cells use a unit depth of 1 m.
double cell_volume(const CellSpec& spec);

/// Maps the first physical coordinate (r or x) onto [-1, 1]: 2/(R_out-R_in) or 2/D.
double first_axis_scale(const CellSpec& spec);
/// Maps the second physical coordinate (z or y) onto [-1, 1]: 2/L.
double second_axis_scale(const CellSpec& spec);
/// Physical radius at scaled coordinate xi (cylinder), 1 for pouch cells.
double volume_weight(const CellSpec& spec, double xi);

/// Cell boundaries. For pouch cells Surface is the front side (x = D) and
/// Core the back side (x = 0).
enum class Side : int { Surface = 0, Core = 1, Top = 2, Bottom = 3 };
inline constexpr std::array<Side, 4> kAllSides{Side::Surface, Side::Core, Side::Top,
                                               Side::Bottom};

constexpr int index_of(Side s) { return static_cast<int>(s); }
/// +1 for the sides at scaled coordinate +1 (surface/front, top), -1 otherwise.
constexpr double side_sign(Side s) {
  return (s == Side::Surface || s == Side::Top) ? 1.0 : -1.0;
}
std::string_view side_name(Side s, Shape shape);

struct SideCooling {
  double h = 0.0;      ///< convection coefficient [W/(m^2 K)]
  double T_inf = 0.0;  ///< coolant free-stream temperature [degC]
};

struct CoolingConfig {
  std::array<SideCooling, 4> sides{};
  std::string scenario_name;

  const SideCooling& operator[](Side s) const { return sides[index_of(s)]; }
  SideCooling& operator[](Side s) { return sides[index_of(s)]; }

  /// h >= 0 everywhere; the cylinder core is adiabatic (h = 0).
  void validate(Shape shape) const;
};

/// Cooling power per unit area on each side [W/m^2]:
/// u = h T_inf on the +1 sides and u = -h T_inf on the -1 sides.
struct BoundaryInput {
  std::array<double, 4> u{};

  double operator[](Side s) const { return u[index_of(s)]; }
  double& operator[](Side s) { return u[index_of(s)]; }

  static BoundaryInput from_cooling(const CoolingConfig& cooling);
};

/// Sides that carry a model input: {surface, top, bottom} for cylinders (the
/// core input is identically zero) and all four for pouch cells.
std::vector<Side> input_sides(Shape shape);

Eigen::VectorXd to_input_vector(const BoundaryInput& input, const std::vector<Side>& sides);
BoundaryInput from_input_vector(const Eigen::VectorXd& u, const std::vector<Side>& sides);

}  // namespace spectherm
