#pragma once

#include <array>
#include <vector>

#include <Eigen/Core>

#include "spectherm/cell.hpp"
#include "spectherm/chebyshev.hpp"

namespace spectherm {

/// Sign convention for the derivative term of the scaled Robin conditions.
///
/// Physical: heat leaves through every side, `h T + a k dT/dxi = u` at the +1
/// sides and `-h T + a k dT/dxi = u` at the -1 sides. AsPrinted flips the
/// derivative term, giving the literal s1 = h_s - a k_r, c2 = -h_c + 2 a k_r
/// family, which is anti-dissipative and kept only for comparison.
enum class RobinConvention { Physical, AsPrinted };

/// Lifting coefficients of the four sides: value and slope of the quadratic
/// lifting (xi, xi^2) or (zeta, zeta^2) seen through each Robin operator.
struct BoundaryScalars {
  double s1 = 0.0, s2 = 0.0;
  double c1 = 0.0, c2 = 0.0;
  double t1 = 0.0, t2 = 0.0;
  double b1 = 0.0, b2 = 0.0;

  double det_vertical() const { return s1 * c2 - s2 * c1; }
  double det_horizontal() const { return t1 * b2 - t2 * b1; }
};

/// Throws DegenerateBoundaryError when either determinant vanishes.
BoundaryScalars boundary_scalars(const CellSpec& spec, const CoolingConfig& cooling,
                                 RobinConvention convention = RobinConvention::Physical);

/// Homogeneous Robin pair of one side in scaled coordinates.
RobinPair side_robin_pair(const CellSpec& spec, const CoolingConfig& cooling, Side side);

/// Basis along the first (r or x) and second (z or y) scaled coordinate.
struct ModelBases {
  BasisSet r;
  BasisSet z;
};

ModelBases build_model_bases(const CellSpec& spec, const CoolingConfig& cooling, int M, int N);

/// Per-unit-input coefficient vectors of the four lifting components.
struct SideCoefficients {
  Eigen::VectorXd d1_s, d2_s, d1_c, d2_c;  // length N
  Eigen::VectorXd d1_t, d2_t, d1_b, d2_b;  // length M
};

/// Solves the boundary Galerkin systems
///   Phi_v (s1 D1 + s2 D2) = S_v u_s,  Phi_v (c1 D1 + c2 D2) = S_v u_c,
///   Phi_h (t1 D3 + t2 D4) = S_h u_t,  Phi_h (b1 D3 + b2 D4) = S_h u_b
/// for unit inputs. Phi_h and S_h carry the radial weight on cylinders.
SideCoefficients solve_side_coefficients(const ModelBases& bases, const BoundaryScalars& scalars,
                                         const CellSpec& spec, const Quadrature& quad);

/// One factor of a separable term: either the monomial x^power or a
/// combination sum_k coeffs[k] phi_k(x) of the basis along `axis`.
struct AxisFunction {
  enum class Axis { R, Z };
  int power = -1;
  Axis axis = Axis::R;
  Eigen::VectorXd coeffs;

  bool is_monomial() const { return power >= 0; }
};

ChebDerivs eval_axis(const AxisFunction& f, const ModelBases& bases, double x);

/// f_r(xi) * f_z(zeta)
struct SeparableTerm {
  AxisFunction f_r;
  AxisFunction f_z;
};

struct FieldDerivs {
  double value = 0.0;
  double d_xi = 0.0;
  double d_zeta = 0.0;
};

/// The lifting field split by side: T_p = sum_side T_p^side u_side with
///   T_p^s = sum_n (d1_s xi + d2_s xi^2) psi_n(zeta), and likewise for core,
///   T_p^t = sum_m (d1_t zeta + d2_t zeta^2) phi_m(xi), and likewise for bottom.
struct ParticularComponents {
  ModelBases bases;
  SideCoefficients coeffs;
  std::array<std::vector<SeparableTerm>, 4> terms;

  const std::vector<SeparableTerm>& side_terms(Side s) const { return terms[index_of(s)]; }
};

ParticularComponents build_particular(const ModelBases& bases, const SideCoefficients& coeffs);

/// T_p^side at (xi, zeta) per unit input. Throws std::domain_error outside
/// the unit square.
double eval_Tp_component(const ParticularComponents& pc, Side side, double xi, double zeta);
FieldDerivs eval_Tp_component_derivs(const ParticularComponents& pc, Side side, double xi,
                                     double zeta);

/// sum over `inputs` of T_p^side(xi, zeta) u_side
double eval_Tp(const ParticularComponents& pc, const std::vector<Side>& inputs,
               const Eigen::VectorXd& u, double xi, double zeta);

/// Entry (i, j) is T_p^{inputs[j]} at locations[i].
Eigen::MatrixXd feedthrough_matrix(const ParticularComponents& pc,
                                   const std::vector<std::array<double, 2>>& locations,
                                   const std::vector<Side>& inputs);

}  // namespace spectherm
