#pragma once

#include <vector>

#include <Eigen/Core>

#include "spectherm/galerkin.hpp"

namespace spectherm {

/// Exact zero-order-hold discretization
///   X_{k+1} = Ad X_k + Bd [u_k; w_k].
struct DiscreteSystem {
  double dt = 0.0;
  Eigen::MatrixXd Ad;
  Eigen::MatrixXd Bd;  ///< O x (n_inputs + 1); the last column multiplies w

  Eigen::VectorXd step(const Eigen::VectorXd& x, const Eigen::VectorXd& u, double w) const;
};

/// Throws InstabilityError when the exponential overflows.
DiscreteSystem discretize(const ReducedModel& model, double dt);

struct ThermalMetrics {
  double T_mean = 0.0;
  double T_max = 0.0;
  double T_min = 0.0;
  double dT = 0.0;        ///< T_max - T_min
  double dTr_max = 0.0;   ///< max |dT/dr| [K/m]
  double dTz_max = 0.0;   ///< max |dT/dz| [K/m]
  double dTr_mean = 0.0;  ///< grid mean of |dT/dr| [K/m]
  double dTz_mean = 0.0;  ///< grid mean of |dT/dz| [K/m]
};

/// Field on a uniform tensor grid of the scaled square (endpoints included),
/// with scaled-coordinate derivatives.
struct FieldGrid {
  Eigen::VectorXd xi;
  Eigen::VectorXd zeta;
  Eigen::MatrixXd values;  ///< rows follow xi, columns follow zeta
  Eigen::MatrixXd d_xi;
  Eigen::MatrixXd d_zeta;
};

Eigen::VectorXd uniform_nodes(int n);

FieldGrid reconstruct_field(const ReducedModel& model, const Eigen::VectorXd& X,
                            const Eigen::VectorXd& u, int n_r, int n_z);

ThermalMetrics compute_metrics(const FieldGrid& grid, const CellSpec& spec);

/// Tabulates basis and lifting fields on a fixed grid so repeated
/// reconstructions cost two small matrix products.
class FieldEvaluator {
 public:
  FieldEvaluator(const ReducedModel& model, int n_r, int n_z);

  FieldGrid field(const Eigen::VectorXd& X, const Eigen::VectorXd& u) const;
  ThermalMetrics metrics(const Eigen::VectorXd& X, const Eigen::VectorXd& u) const;
  /// Volume-weighted mean only.
  double mean(const Eigen::VectorXd& X, const Eigen::VectorXd& u) const;

 private:
  CellSpec spec_;
  int M_, N_;
  Eigen::VectorXd xi_, zeta_;
  Eigen::MatrixXd phi_, dphi_, psi_, dpsi_;
  std::vector<Eigen::MatrixXd> tp_, tp_dxi_, tp_dzeta_;
  Eigen::RowVectorXd mean_state_;
  Eigen::RowVectorXd mean_input_;
};

struct RunOptions {
  int grid_r = 41;
  int grid_z = 41;
  int metrics_stride = 1;  ///< 0 disables metrics
  bool record_states = true;
};

/// Inputs sampled on t_k = k dt: U is n_inputs x (n_steps + 1), or a single
/// column held for the whole horizon; w likewise (size n_steps + 1 or 1).
struct InputSeries {
  Eigen::MatrixXd U;
  std::vector<double> w;

  static InputSeries constant(const Eigen::VectorXd& u, double w);
  Eigen::VectorXd u_at(long k) const;
  double w_at(long k) const;
};

struct SimResult {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> states;
  std::vector<Eigen::VectorXd> outputs;  ///< Y_k = C X_k + Dft u_k
  std::vector<double> metric_times;
  std::vector<ThermalMetrics> metrics;
};

/// Steps the model from X0 over floor(horizon / dt) steps. Throws
/// NumericalFailure with the step index when the state turns non-finite.
SimResult run(const ReducedModel& model, const Eigen::VectorXd& X0, const InputSeries& inputs,
              double dt, double horizon, const RunOptions& options = {});

/// Equilibrium state for constant inputs: A X + B u + F w = 0.
Eigen::VectorXd steady_state(const ReducedModel& model, const Eigen::VectorXd& u, double w);

}  // namespace spectherm
