#include "spectherm/cell.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace spectherm {

namespace {
void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw std::invalid_argument(std::string("CellSpec: ") + name + " must be positive and finite");
  }
}
}  // namespace

void CellSpec::validate() const {
  require_positive(L, "L");
  require_positive(rho, "rho");
  require_positive(cp, "cp");
  require_positive(k_r, "k_r");
  require_positive(k_z, "k_z");
  if (shape == Shape::Cylindrical) {
    require_positive(R_in, "R_in");
    require_positive(R_out, "R_out");
    if (!(R_out > R_in)) {
      throw std::invalid_argument("CellSpec: R_out must exceed R_in");
    }
  } else {
    require_positive(D, "D");
  }
}

CellSpec lfp_cylinder() {
  CellSpec spec;
  spec.shape = Shape::Cylindrical;
  spec.L = 0.198;
  spec.R_out = 0.032;
  spec.R_in = 0.004;
  spec.rho = 2118.0;
  spec.cp = 795.0;
  spec.k_r = 0.67;
  spec.k_z = 66.6;
  return spec;
}

double cell_volume(const CellSpec& spec) {
  spec.validate();
  if (spec.shape == Shape::Cylindrical) {
    return std::numbers::pi * (spec.R_out * spec.R_out - spec.R_in * spec.R_in) * spec.L;
  }
  return spec.D * spec.L * 1.0;
}

double first_axis_scale(const CellSpec& spec) {
  return spec.shape == Shape::Cylindrical ? 2.0 / (spec.R_out - spec.R_in) : 2.0 / spec.D;
}

double second_axis_scale(const CellSpec& spec) { return 2.0 / spec.L; }

double volume_weight(const CellSpec& spec, double xi) {
  if (spec.shape == Shape::Pouch) return 1.0;
  const double alpha = first_axis_scale(spec);
  return (1.0 + xi + alpha * spec.R_in) / alpha;
}

std::string_view side_name(Side s, Shape shape) {
  switch (s) {
    case Side::Surface:
      return shape == Shape::Cylindrical ? "surface" : "front";
    case Side::Core:
      return shape == Shape::Cylindrical ? "core" : "back";
    case Side::Top:
      return "top";
    case Side::Bottom:
      return "bottom";
  }
  return "?";
}

void CoolingConfig::validate(Shape shape) const {
  for (Side s : kAllSides) {
    const auto& c = (*this)[s];
    if (!(c.h >= 0.0) || !std::isfinite(c.h) || !std::isfinite(c.T_inf)) {
      throw std::invalid_argument("CoolingConfig: h must be finite and non-negative on side " +
                                  std::string(side_name(s, shape)));
    }
  }
  if (shape == Shape::Cylindrical && (*this)[Side::Core].h != 0.0) {
    throw std::invalid_argument("CoolingConfig: the cylinder core is adiabatic (h_c must be 0)");
  }
}

BoundaryInput BoundaryInput::from_cooling(const CoolingConfig& cooling) {
  BoundaryInput in;
  for (Side s : kAllSides) {
    in[s] = side_sign(s) * cooling[s].h * cooling[s].T_inf;
  }
  return in;
}

std::vector<Side> input_sides(Shape shape) {
  if (shape == Shape::Cylindrical) return {Side::Surface, Side::Top, Side::Bottom};
  return {Side::Surface, Side::Core, Side::Top, Side::Bottom};
}

Eigen::VectorXd to_input_vector(const BoundaryInput& input, const std::vector<Side>& sides) {
  Eigen::VectorXd u(static_cast<Eigen::Index>(sides.size()));
  for (std::size_t j = 0; j < sides.size(); ++j) u(static_cast<Eigen::Index>(j)) = input[sides[j]];
  return u;
}

BoundaryInput from_input_vector(const Eigen::VectorXd& u, const std::vector<Side>& sides) {
  if (u.size() != static_cast<Eigen::Index>(sides.size())) {
    throw std::invalid_argument("from_input_vector: size mismatch");
  }
  BoundaryInput in;
  for (std::size_t j = 0; j < sides.size(); ++j) in[sides[j]] = u(static_cast<Eigen::Index>(j));
  return in;
}

}  // namespace spectherm
