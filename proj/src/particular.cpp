#include "spectherm/particular.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "spectherm/errors.hpp"

namespace spectherm {

namespace {

constexpr double kMaxGramCondition = 1e12;

double relative_det_tolerance(double a, double b, double c, double d) {
  return 1e-14 * std::max({std::abs(a * d), std::abs(b * c), 1e-300});
}

Eigen::VectorXd solve_gram(const Eigen::MatrixXd& gram, const Eigen::VectorXd& rhs,
                           const char* name) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(gram);
  const auto& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  if (!(smin > 0.0) || sv(0) / smin > kMaxGramCondition) {
    throw IllConditionedBasisError(std::string("singular or ill-conditioned Gram matrix ") + name);
  }
  return gram.fullPivLu().solve(rhs);
}

AxisFunction monomial(int p, AxisFunction::Axis axis) {
  AxisFunction f;
  f.power = p;
  f.axis = axis;
  return f;
}

AxisFunction combination(const Eigen::VectorXd& c, AxisFunction::Axis axis) {
  AxisFunction f;
  f.axis = axis;
  f.coeffs = c;
  return f;
}

void check_unit_square(double xi, double zeta) {
  if (!(std::abs(xi) <= 1.0 + 1e-14) || !(std::abs(zeta) <= 1.0 + 1e-14)) {
    throw std::domain_error("point outside the scaled unit square");
  }
}

}  // namespace

BoundaryScalars boundary_scalars(const CellSpec& spec, const CoolingConfig& cooling,
                                 RobinConvention convention) {
  const double sigma = convention == RobinConvention::Physical ? 1.0 : -1.0;
  const double ar = sigma * first_axis_scale(spec) * spec.k_r;
  const double az = sigma * second_axis_scale(spec) * spec.k_z;
  const double hs = cooling[Side::Surface].h, hc = cooling[Side::Core].h;
  const double ht = cooling[Side::Top].h, hb = cooling[Side::Bottom].h;

  BoundaryScalars s;
  s.s1 = hs + ar;
  s.s2 = hs + 2.0 * ar;
  s.c1 = hc + ar;
  s.c2 = -hc - 2.0 * ar;
  s.t1 = ht + az;
  s.t2 = ht + 2.0 * az;
  s.b1 = hb + az;
  s.b2 = -hb - 2.0 * az;
  if (std::abs(s.det_vertical()) <= relative_det_tolerance(s.s1, s.s2, s.c1, s.c2)) {
    throw DegenerateBoundaryError("surface/core lifting system is singular");
  }
  if (std::abs(s.det_horizontal()) <= relative_det_tolerance(s.t1, s.t2, s.b1, s.b2)) {
    throw DegenerateBoundaryError("top/bottom lifting system is singular");
  }
  return s;
}

RobinPair side_robin_pair(const CellSpec& spec, const CoolingConfig& cooling, Side side) {
  const bool radial = side == Side::Surface || side == Side::Core;
  const double ak = radial ? first_axis_scale(spec) * spec.k_r : second_axis_scale(spec) * spec.k_z;
  return {side_sign(side) * cooling[side].h, ak};
}

ModelBases build_model_bases(const CellSpec& spec, const CoolingConfig& cooling, int M, int N) {
  return {build_basis(M, side_robin_pair(spec, cooling, Side::Core),
                      side_robin_pair(spec, cooling, Side::Surface)),
          build_basis(N, side_robin_pair(spec, cooling, Side::Bottom),
                      side_robin_pair(spec, cooling, Side::Top))};
}

SideCoefficients solve_side_coefficients(const ModelBases& bases, const BoundaryScalars& sc,
                                         const CellSpec& spec, const Quadrature& quad) {
  if (std::abs(sc.det_vertical()) <= relative_det_tolerance(sc.s1, sc.s2, sc.c1, sc.c2) ||
      std::abs(sc.det_horizontal()) <= relative_det_tolerance(sc.t1, sc.t2, sc.b1, sc.b2)) {
    throw DegenerateBoundaryError("degenerate lifting determinant");
  }
  const int M = bases.r.count, N = bases.z.count;
  const auto one = [](double) { return 1.0; };
  const auto radial_weight = [&](double x) { return volume_weight(spec, x); };

  Eigen::MatrixXd phi_v(N, N), phi_h(M, M);
  Eigen::VectorXd s_v(N), s_h(M);
  for (int i = 0; i < N; ++i) {
    const auto fi = [&](double x) { return basis_eval(bases.z, i, x); };
    s_v(i) = inner_product_1d(fi, one, one, quad);
    for (int n = 0; n < N; ++n) {
      phi_v(i, n) = inner_product_1d(fi, [&](double x) { return basis_eval(bases.z, n, x); }, one,
                                     quad);
    }
  }
  for (int j = 0; j < M; ++j) {
    const auto fj = [&](double x) { return basis_eval(bases.r, j, x); };
    s_h(j) = inner_product_1d(fj, one, radial_weight, quad);
    for (int m = 0; m < M; ++m) {
      phi_h(j, m) = inner_product_1d(fj, [&](double x) { return basis_eval(bases.r, m, x); },
                                     radial_weight, quad);
    }
  }
  const Eigen::VectorXd p_v = solve_gram(phi_v, s_v, "Phi_v");
  const Eigen::VectorXd p_h = solve_gram(phi_h, s_h, "Phi_h");

  const double dv = sc.det_vertical(), dh = sc.det_horizontal();
  SideCoefficients d;
  d.d1_s = (sc.c2 / dv) * p_v;
  d.d2_s = (-sc.c1 / dv) * p_v;
  d.d1_c = (-sc.s2 / dv) * p_v;
  d.d2_c = (sc.s1 / dv) * p_v;
  d.d1_t = (sc.b2 / dh) * p_h;
  d.d2_t = (-sc.b1 / dh) * p_h;
  d.d1_b = (-sc.t2 / dh) * p_h;
  d.d2_b = (sc.t1 / dh) * p_h;
  return d;
}

ChebDerivs eval_axis(const AxisFunction& f, const ModelBases& bases, double x) {
  if (f.is_monomial()) {
    const int p = f.power;
    const double v = std::pow(x, p);
    const double d1 = p >= 1 ? p * std::pow(x, p - 1) : 0.0;
    const double d2 = p >= 2 ? p * (p - 1) * std::pow(x, p - 2) : 0.0;
    return {v, d1, d2};
  }
  const BasisSet& bs = f.axis == AxisFunction::Axis::R ? bases.r : bases.z;
  ChebDerivs out;
  for (int k = 0; k < static_cast<int>(f.coeffs.size()); ++k) {
    const auto b = basis_eval_derivs(bs, k, x);
    out.value += f.coeffs(k) * b.value;
    out.d1 += f.coeffs(k) * b.d1;
    out.d2 += f.coeffs(k) * b.d2;
  }
  return out;
}

ParticularComponents build_particular(const ModelBases& bases, const SideCoefficients& d) {
  using Ax = AxisFunction::Axis;
  ParticularComponents pc;
  pc.bases = bases;
  pc.coeffs = d;
  auto vertical = [&](const Eigen::VectorXd& c1, const Eigen::VectorXd& c2) {
    return std::vector<SeparableTerm>{{monomial(1, Ax::R), combination(c1, Ax::Z)},
                                      {monomial(2, Ax::R), combination(c2, Ax::Z)}};
  };
  auto horizontal = [&](const Eigen::VectorXd& c1, const Eigen::VectorXd& c2) {
    return std::vector<SeparableTerm>{{combination(c1, Ax::R), monomial(1, Ax::Z)},
                                      {combination(c2, Ax::R), monomial(2, Ax::Z)}};
  };
  pc.terms[index_of(Side::Surface)] = vertical(d.d1_s, d.d2_s);
  pc.terms[index_of(Side::Core)] = vertical(d.d1_c, d.d2_c);
  pc.terms[index_of(Side::Top)] = horizontal(d.d1_t, d.d2_t);
  pc.terms[index_of(Side::Bottom)] = horizontal(d.d1_b, d.d2_b);
  return pc;
}

FieldDerivs eval_Tp_component_derivs(const ParticularComponents& pc, Side side, double xi,
                                     double zeta) {
  check_unit_square(xi, zeta);
  FieldDerivs out;
  for (const auto& term : pc.side_terms(side)) {
    const auto fr = eval_axis(term.f_r, pc.bases, xi);
    const auto fz = eval_axis(term.f_z, pc.bases, zeta);
    out.value += fr.value * fz.value;
    out.d_xi += fr.d1 * fz.value;
    out.d_zeta += fr.value * fz.d1;
  }
  return out;
}

double eval_Tp_component(const ParticularComponents& pc, Side side, double xi, double zeta) {
  return eval_Tp_component_derivs(pc, side, xi, zeta).value;
}

double eval_Tp(const ParticularComponents& pc, const std::vector<Side>& inputs,
               const Eigen::VectorXd& u, double xi, double zeta) {
  double acc = 0.0;
  for (std::size_t j = 0; j < inputs.size(); ++j) {
    acc += eval_Tp_component(pc, inputs[j], xi, zeta) * u(static_cast<Eigen::Index>(j));
  }
  return acc;
}

Eigen::MatrixXd feedthrough_matrix(const ParticularComponents& pc,
                                   const std::vector<std::array<double, 2>>& locations,
                                   const std::vector<Side>& inputs) {
  Eigen::MatrixXd D(static_cast<Eigen::Index>(locations.size()),
                    static_cast<Eigen::Index>(inputs.size()));
  for (std::size_t i = 0; i < locations.size(); ++i) {
    for (std::size_t j = 0; j < inputs.size(); ++j) {
      D(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          eval_Tp_component(pc, inputs[j], locations[i][0], locations[i][1]);
    }
  }
  return D;
}

}  // namespace spectherm
