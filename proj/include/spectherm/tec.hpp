#pragma once

#include <vector>

#include <Eigen/Core>

#include "spectherm/cell.hpp"

namespace spectherm {

/// Two-state lumped thermal equivalent circuit:
///   C_c T_c' = q + (T_s - T_c) / R_c
///   C_s T_s' = (T_inf - T_s) / R_u + (T_c - T_s) / R_c
struct TecModel {
  double C_c = 1079.6;  ///< core heat capacity [J/K]
  double C_s = 48.35;   ///< surface heat capacity [J/K]
  double R_c = 0.65;    ///< core-surface conduction resistance [K/W]
  double R_u = 0.08;    ///< surface-coolant convection resistance [K/W]
  double T_inf = 15.0;  ///< coolant temperature [degC]

  void validate() const;
};

struct TecState {
  double T_c = 0.0;
  double T_s = 0.0;
};

/// Exact zero-order-hold step for the 2x2 system; q in W.
TecState tec_step(const TecModel& m, TecState x, double q, double dt);

/// Precomputed exact discretization for repeated steps with one dt.
class TecStepper {
 public:
  TecStepper(const TecModel& m, double dt);
  TecState step(TecState x, double q) const;

 private:
  Eigen::Matrix2d Ad_;
  Eigen::Matrix2d Bd_;  // columns: q, T_inf
  double T_inf_;
};

/// T_s = T_inf + q R_u, T_c = T_s + q R_c.
TecState tec_steady_state(const TecModel& m, double q);

struct TecMetrics {
  double T_mean = 0.0;
  double dTr = 0.0;  ///< (T_c - T_s) / (R_out - R_in) [K/m]
};

/// Throws UnsupportedShapeError for pouch cells.
TecMetrics tec_metrics(double T_c, double T_s, const CellSpec& spec);

struct TecRun {
  std::vector<double> times;
  std::vector<TecState> states;
};

/// q_watts sampled on t_k = k dt (size n + 1 or 1).
TecRun tec_run(const TecModel& m, TecState x0, const std::vector<double>& q_watts, double dt,
               double horizon);

}  // namespace spectherm
