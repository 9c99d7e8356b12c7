#pragma once

#include <functional>

#include <Eigen/Core>
#include <Eigen/LU>

#include "spectherm/cell.hpp"

namespace testutil {

inline spectherm::CellSpec pouch_cell() {
  spectherm::CellSpec s;
  s.shape = spectherm::Shape::Pouch;
  s.L = 0.2;
  s.D = 0.1;
  s.rho = 2000.0;
  s.cp = 900.0;
  s.k_r = 1.2;
  s.k_z = 25.0;
  return s;
}

/// Classical RK4 on x' = f(x) with n equal substeps.
inline Eigen::VectorXd rk4(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
                           Eigen::VectorXd x, double dt, int n) {
  const double h = dt / n;
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd k1 = f(x);
    const Eigen::VectorXd k2 = f(x + 0.5 * h * k1);
    const Eigen::VectorXd k3 = f(x + 0.5 * h * k2);
    const Eigen::VectorXd k4 = f(x + h * k3);
    x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return x;
}

}  // namespace testutil
