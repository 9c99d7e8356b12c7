#pragma once

#include <array>
#include <vector>

#include <Eigen/Core>

#include "spectherm/cell.hpp"
#include "spectherm/particular.hpp"

namespace spectherm {

/// Output locations in scaled coordinates: mid-points of the surface, core,
/// top and bottom sides (front/back for pouch cells).
struct OutputSpec {
  static std::vector<std::array<double, 2>> locations() {
    return {{1.0, 0.0}, {-1.0, 0.0}, {0.0, 1.0}, {0.0, -1.0}};
  }
};

/// Reduced state-space model  G X' = A X + B u + F w,  Y = C X + Dft u.
///
/// The state is the coefficient vector c_mn ordered row-major over (m, n):
/// index m * N + n. Inputs u follow `inputs` (W/m^2); w is the volumetric
/// heat generation (W/m^3).
struct ReducedModel {
  CellSpec spec;
  CoolingConfig cooling;
  int M = 0;
  int N = 0;
  int quad_order = 0;
  ModelBases bases;
  ParticularComponents particular;
  std::vector<Side> inputs;

  Eigen::MatrixXd G;
  Eigen::MatrixXd A;
  Eigen::MatrixXd B;
  Eigen::VectorXd F;
  Eigen::MatrixXd C;
  Eigen::MatrixXd Dft;
  /// Column j: <w T_p^{inputs[j]}, eta>, used to project initial fields.
  Eigen::MatrixXd Tp_projection;

  int order() const { return M * N; }
  int n_inputs() const { return static_cast<int>(inputs.size()); }
  int state_index(int m, int n) const { return m * N + n; }
};

/// Builds bases, lifting components and all system matrices. Throws
/// AssemblyAccuracyError when doubling the quadrature order moves any matrix
/// entry by more than 1e-8 relative to the matrix scale, and
/// IllConditionedBasisError when G is singular.
ReducedModel assemble(const CellSpec& spec, const CoolingConfig& cooling, int M, int N);

/// C rows for arbitrary locations (one row per location).
Eigen::MatrixXd output_matrix(const ModelBases& bases,
                              const std::vector<std::array<double, 2>>& locations);

/// Solves G X0 = rho cp <w (T_init - T_p u0), eta>.
Eigen::VectorXd project_initial_state(const ReducedModel& model, double T_init,
                                      const Eigen::VectorXd& u0);
Eigen::VectorXd project_initial_state(const ReducedModel& model, double T_init,
                                      const BoundaryInput& u0);

/// Rebuilds the model for a new cooling configuration; the input model is
/// left untouched.
ReducedModel reassemble_cooling(const ReducedModel& model, const CoolingConfig& cooling);

/// Input vector u for the model's input ordering.
Eigen::VectorXd model_input(const ReducedModel& model, const BoundaryInput& u);
Eigen::VectorXd model_input(const ReducedModel& model, const CoolingConfig& cooling);

}  // namespace spectherm
