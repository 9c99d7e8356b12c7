#pragma once

#include <utility>
#include <vector>

namespace spectherm {

/// Chebyshev polynomial of the first kind, T_k(x) = cos(k arccos x), by the
/// three-term recurrence. Throws std::domain_error for |x| > 1.
double cheb_eval(int k, double x);

struct ChebDerivs {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

/// T_k and its first two derivatives, using the differentiated recurrences
/// (valid up to and including the endpoints).
ChebDerivs cheb_eval_derivs(int k, double x);

/// (T'_k(-1), T'_k(+1)) = ((-1)^(k+1) k^2, k^2).
std::pair<double, double> cheb_deriv_at_endpoints(int k);

/// Homogeneous Robin condition `value * f + deriv * f' = 0` at one end of [-1, 1].
struct RobinPair {
  double value = 0.0;
  double deriv = 0.0;
};

/// Compact Robin-compatible basis on [-1, 1]:
///   phi_k = T_k + a_k T_{k+1} + b_k T_{k+2},  k = 0 .. count-1,
/// each member satisfying both end conditions.
struct BasisSet {
  int count = 0;
  RobinPair robin_minus;
  RobinPair robin_plus;
  std::vector<double> a;
  std::vector<double> b;

  int max_degree() const { return count + 1; }
};

/// Solves the per-index 2x2 system for (a_k, b_k). Throws
/// BasisConstructionError naming the index when the system is singular.
BasisSet build_basis(int count, RobinPair robin_minus, RobinPair robin_plus);

double basis_eval(const BasisSet& bs, int k, double x);
double basis_deriv1(const BasisSet& bs, int k, double x);
double basis_deriv2(const BasisSet& bs, int k, double x);
ChebDerivs basis_eval_derivs(const BasisSet& bs, int k, double x);

/// Largest end-condition residual of phi_k, with each Robin pair normalised
/// to unit max-norm.
double robin_residual(const BasisSet& bs, int k);

/// Gauss-Legendre rule on [-1, 1].
struct Quadrature {
  std::vector<double> nodes;
  std::vector<double> weights;
  int order = 0;
};

Quadrature gauss_quadrature(int order);

/// Default rule size for bases whose largest member has degree `max_degree`.
int default_quadrature_order(int max_degree);

/// sum_i w_i weight(x_i) f(x_i) g(x_i)
template <class F, class G, class W>
double inner_product_1d(F&& f, G&& g, W&& weight, const Quadrature& quad) {
  double acc = 0.0;
  for (std::size_t i = 0; i < quad.nodes.size(); ++i) {
    const double x = quad.nodes[i];
    acc += quad.weights[i] * weight(x) * f(x) * g(x);
  }
  return acc;
}

}  // namespace spectherm
