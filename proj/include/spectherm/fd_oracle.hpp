#pragma once

#include <vector>

#include <Eigen/Core>

#include "spectherm/cell.hpp"
#include "spectherm/simulate.hpp"

namespace spectherm {

enum class FdScheme { BackwardEuler, CrankNicolson };

struct FdConfig {
  int n_r = 128;  ///< nodes across r (or x), boundaries included
  int n_z = 128;  ///< nodes across z (or y), boundaries included
  double dt = 0.05;
  FdScheme scheme = FdScheme::CrankNicolson;
  int record_stride = 1;  ///< steps between recorded outputs and means
  int metrics_stride = 0; ///< steps between full-field metrics; 0 disables

  void validate() const;
};

/// Vertex-centred finite differences on the physical (r, z) or (x, y) domain
/// with ghost-node Robin closures:
///   rho cp T' = k_r (T_rr + T_r / r) + k_z T_zz + q.
///
/// The operator is K_r (x) I + I (x) K_z with tridiagonal factors, so each
/// factor is symmetrised by a diagonal similarity and diagonalised once;
/// every implicit step is then a pointwise update in modal coordinates.
class FdSolver {
 public:
  FdSolver(const CellSpec& spec, const CoolingConfig& cooling, const FdConfig& cfg);

  void reset(double T_init);
  /// Advances one step with boundary inputs u (ordered as input_sides) and
  /// heat q held over the step.
  void step(const Eigen::VectorXd& u, double q);

  double time() const { return time_; }
  long steps() const { return steps_; }
  /// Temperatures at the surface, core, top and bottom mid-points.
  Eigen::Vector4d outputs() const;
  double mean() const;
  /// Nodal temperatures, rows along r, columns along z.
  Eigen::MatrixXd field() const;
  /// Field with gradients in the scaled-coordinate layout of FieldGrid.
  FieldGrid field_grid() const;
  ThermalMetrics metrics() const;

  const Eigen::VectorXd& r_nodes() const { return r_; }
  const Eigen::VectorXd& z_nodes() const { return z_; }
  const std::vector<Side>& inputs() const { return inputs_; }

 private:
  CellSpec spec_;
  FdConfig cfg_;
  std::vector<Side> inputs_;
  Eigen::VectorXd r_, z_;
  Eigen::MatrixXd Vr_, Vz_;  // eigenvectors of the 1D operators
  Eigen::MatrixXd amp_, gain_;
  Eigen::MatrixXd src_q_;
  std::vector<Eigen::MatrixXd> src_u_;
  Eigen::MatrixXd init_mode_;
  Eigen::Matrix<double, Eigen::Dynamic, 4> out_r_, out_z_;
  Eigen::VectorXd mean_r_, mean_z_;
  double mean_total_ = 1.0;
  Eigen::MatrixXd X_;
  double time_ = 0.0;
  long steps_ = 0;
};

struct FdResult {
  std::vector<double> times;
  std::vector<Eigen::Vector4d> outputs;
  std::vector<double> T_mean;
  std::vector<double> metric_times;
  std::vector<ThermalMetrics> metrics;
  Eigen::MatrixXd final_field;
};

/// Runs the oracle from a uniform T_init. `inputs` is sampled on t_k = k cfg.dt.
FdResult fd_solve(const CellSpec& spec, const CoolingConfig& cooling, const InputSeries& inputs,
                  double horizon, const FdConfig& cfg, double T_init);

}  // namespace spectherm
