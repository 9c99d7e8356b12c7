#include "spectherm/chebyshev.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "spectherm/errors.hpp"

namespace spectherm {

namespace {

constexpr double kDomainSlack = 1e-14;

void check_domain(double x) {
  if (!(std::abs(x) <= 1.0 + kDomainSlack)) {
    throw std::domain_error("Chebyshev argument outside [-1, 1]: " + std::to_string(x));
  }
}

double parity(int k) { return (k % 2 == 0) ? 1.0 : -1.0; }

}  // namespace

ChebDerivs cheb_eval_derivs(int k, double x) {
  if (k < 0) throw std::invalid_argument("cheb_eval: negative degree");
  check_domain(x);
  ChebDerivs prev{1.0, 0.0, 0.0};
  if (k == 0) return prev;
  ChebDerivs cur{x, 1.0, 0.0};
  for (int j = 1; j < k; ++j) {
    // T_{j+1} = 2x T_j - T_{j-1}, differentiated twice.
    ChebDerivs next{2.0 * x * cur.value - prev.value,
                    2.0 * cur.value + 2.0 * x * cur.d1 - prev.d1,
                    4.0 * cur.d1 + 2.0 * x * cur.d2 - prev.d2};
    prev = cur;
    cur = next;
  }
  return cur;
}

double cheb_eval(int k, double x) { return cheb_eval_derivs(k, x).value; }

std::pair<double, double> cheb_deriv_at_endpoints(int k) {
  if (k < 0) throw std::invalid_argument("cheb_deriv_at_endpoints: negative degree");
  const double k2 = static_cast<double>(k) * k;
  return {parity(k + 1) * k2, k2};
}

BasisSet build_basis(int count, RobinPair robin_minus, RobinPair robin_plus) {
  if (count < 1) throw std::invalid_argument("build_basis: count must be >= 1");
  BasisSet bs;
  bs.count = count;
  bs.robin_minus = robin_minus;
  bs.robin_plus = robin_plus;
  bs.a.resize(static_cast<std::size_t>(count));
  bs.b.resize(static_cast<std::size_t>(count));

  // Robin functional applied to T_j at x = -1 and x = +1.
  auto at_minus = [&](int j) {
    return robin_minus.value * parity(j) + robin_minus.deriv * cheb_deriv_at_endpoints(j).first;
  };
  auto at_plus = [&](int j) {
    return robin_plus.value + robin_plus.deriv * cheb_deriv_at_endpoints(j).second;
  };

  for (int k = 0; k < count; ++k) {
    const double m11 = at_minus(k + 1), m12 = at_minus(k + 2);
    const double m21 = at_plus(k + 1), m22 = at_plus(k + 2);
    const double r1 = -at_minus(k), r2 = -at_plus(k);
    const double det = m11 * m22 - m12 * m21;
    const double scale = std::max({std::abs(m11 * m22), std::abs(m12 * m21), 1e-300});
    if (std::abs(det) <= 1e-13 * scale) {
      throw BasisConstructionError(
          "build_basis: singular Robin system for basis index " + std::to_string(k), k);
    }
    bs.a[static_cast<std::size_t>(k)] = (r1 * m22 - m12 * r2) / det;
    bs.b[static_cast<std::size_t>(k)] = (m11 * r2 - r1 * m21) / det;
  }
  return bs;
}

ChebDerivs basis_eval_derivs(const BasisSet& bs, int k, double x) {
  if (k < 0 || k >= bs.count) throw std::out_of_range("basis index out of range");
  const auto p0 = cheb_eval_derivs(k, x);
  const auto p1 = cheb_eval_derivs(k + 1, x);
  const auto p2 = cheb_eval_derivs(k + 2, x);
  const double a = bs.a[static_cast<std::size_t>(k)];
  const double b = bs.b[static_cast<std::size_t>(k)];
  return {p0.value + a * p1.value + b * p2.value, p0.d1 + a * p1.d1 + b * p2.d1,
          p0.d2 + a * p1.d2 + b * p2.d2};
}

double basis_eval(const BasisSet& bs, int k, double x) { return basis_eval_derivs(bs, k, x).value; }
double basis_deriv1(const BasisSet& bs, int k, double x) { return basis_eval_derivs(bs, k, x).d1; }
double basis_deriv2(const BasisSet& bs, int k, double x) { return basis_eval_derivs(bs, k, x).d2; }

double robin_residual(const BasisSet& bs, int k) {
  auto normalised = [](RobinPair p) {
    const double n = std::max(std::abs(p.value), std::abs(p.deriv));
    return n > 0.0 ? RobinPair{p.value / n, p.deriv / n} : p;
  };
  const RobinPair lo = normalised(bs.robin_minus);
  const RobinPair hi = normalised(bs.robin_plus);
  const auto m = basis_eval_derivs(bs, k, -1.0);
  const auto p = basis_eval_derivs(bs, k, 1.0);
  return std::max(std::abs(lo.value * m.value + lo.deriv * m.d1),
                  std::abs(hi.value * p.value + hi.deriv * p.d1));
}

Quadrature gauss_quadrature(int order) {
  if (order < 1) throw std::invalid_argument("gauss_quadrature: order must be >= 1");
  Quadrature q;
  q.order = order;
  q.nodes.resize(static_cast<std::size_t>(order));
  q.weights.resize(static_cast<std::size_t>(order));
  const int n = order;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Newton iteration on P_n starting from the Tricomi estimate.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      const double pn = (n == 1) ? x : p1;
      const double pnm1 = (n == 1) ? 1.0 : p0;
      dp = n * (x * pn - pnm1) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0, p1 = x;
    for (int j = 2; j <= n; ++j) {
      const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
      p0 = p1;
      p1 = p2;
    }
    const double pn = (n == 1) ? x : p1;
    const double pnm1 = (n == 1) ? 1.0 : p0;
    dp = n * (x * pn - pnm1) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    q.nodes[lo] = -x;
    q.nodes[hi] = x;
    q.weights[lo] = w;
    q.weights[hi] = w;
  }
  if (n % 2 == 1) q.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
  return q;
}

int default_quadrature_order(int max_degree) { return 4 * (max_degree + 2); }

}  // namespace spectherm
