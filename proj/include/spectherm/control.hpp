#pragma once

#include <memory>
#include <vector>

#include <Eigen/Core>

#include "spectherm/fd_oracle.hpp"
#include "spectherm/galerkin.hpp"
#include "spectherm/scenario.hpp"
#include "spectherm/simulate.hpp"

namespace spectherm {

/// PI law on the coolant temperature of one side:
///   command = bias + kp e + ki * integral(e),  clamped to [lo, hi].
/// With anti-windup the integral is not advanced on steps that saturate.
struct PiController {
  double kp = 2.0;
  double ki = 0.05;
  double integral = 0.0;
  double lo = -20.0;
  double hi = 40.0;
  double bias = 0.0;
  bool anti_windup = true;
};

double pi_step(PiController& c, double error, double dt);

/// Open-loop copy of the reduced model driven with the plant's inputs.
class EstimatorState {
 public:
  EstimatorState(const ReducedModel& model, double dt, double T_init, const Eigen::VectorXd& u0,
                 int grid_r = 41, int grid_z = 41);

  const Eigen::VectorXd& state() const { return x_; }
  double mean() const { return evaluator_.mean(x_, u_); }
  ThermalMetrics metrics() const { return evaluator_.metrics(x_, u_); }
  void advance(const Eigen::VectorXd& u, double w);

 private:
  DiscreteSystem sys_;
  FieldEvaluator evaluator_;
  Eigen::VectorXd x_;
  Eigen::VectorXd u_;
};

/// Propagates the estimator one step with (u, w) and returns the new mean.
double estimate_mean(EstimatorState& est, const Eigen::VectorXd& u, double w);

/// Thermal plant driven with boundary inputs ordered as input_sides(shape).
class Plant {
 public:
  virtual ~Plant() = default;
  virtual void reset(double T_init, const Eigen::VectorXd& u0) = 0;
  /// Holds (u, q) for one control interval.
  virtual void step(const Eigen::VectorXd& u, double q) = 0;
  virtual ThermalMetrics metrics() const = 0;
  virtual Eigen::Vector4d outputs() const = 0;
  virtual const CellSpec& spec() const = 0;
  virtual const CoolingConfig& cooling() const = 0;
};

class ReducedPlant : public Plant {
 public:
  ReducedPlant(ReducedModel model, double dt, int grid_r = 41, int grid_z = 41);
  void reset(double T_init, const Eigen::VectorXd& u0) override;
  void step(const Eigen::VectorXd& u, double q) override;
  ThermalMetrics metrics() const override;
  Eigen::Vector4d outputs() const override;
  const CellSpec& spec() const override { return model_.spec; }
  const CoolingConfig& cooling() const override { return model_.cooling; }

 private:
  ReducedModel model_;
  DiscreteSystem sys_;
  FieldEvaluator evaluator_;
  Eigen::VectorXd x_, u_;
};

class FdPlant : public Plant {
 public:
  /// `dt` is the control interval; it must be a whole multiple of cfg.dt.
  FdPlant(const CellSpec& spec, const CoolingConfig& cooling, const FdConfig& cfg, double dt);
  void reset(double T_init, const Eigen::VectorXd& u0) override;
  void step(const Eigen::VectorXd& u, double q) override;
  ThermalMetrics metrics() const override { return solver_.metrics(); }
  Eigen::Vector4d outputs() const override { return solver_.outputs(); }
  const CellSpec& spec() const override { return spec_; }
  const CoolingConfig& cooling() const override { return cooling_; }

 private:
  CellSpec spec_;
  CoolingConfig cooling_;
  FdSolver solver_;
  long substeps_;
};

struct ControlOptions {
  double setpoint = 20.0;
  double T_init = kAmbientC;
  double baseline_T_inf = kAmbientC;
  double kp = 2.0;
  double ki = 0.05;
  double lo = -20.0;
  double hi = 40.0;
};

struct ControlTrace {
  std::vector<Side> inputs;
  std::vector<bool> active;            ///< per input: driven by a PI controller
  std::vector<double> times;
  std::vector<double> T_mean;          ///< plant
  std::vector<double> T_hat;           ///< estimator
  std::vector<Eigen::VectorXd> u;      ///< applied over [t_k, t_k+1) [W/m^2]
  std::vector<Eigen::VectorXd> T_cmd;  ///< coolant commands [degC]
  std::vector<double> dTr_mean;
  std::vector<double> dTz_mean;
  std::vector<double> dTr_max;
  std::vector<double> dTz_max;
};

/// Runs the regulation loop. `plant` must carry the scenario's cooling and
/// `estimator_model` must be assembled for the same cooling. `q` is sampled
/// on t_k = k dt (size n + 1 or 1).
ControlTrace closed_loop_run(Plant& plant, const ReducedModel& estimator_model, Scenario scenario,
                             const std::vector<double>& q, double dt, double horizon,
                             const ControlOptions& options = {});

/// Boundary input of a side for a coolant temperature: sign(side) h T_inf.
double side_input(const CoolingConfig& cooling, Side side, double T_inf);

}  // namespace spectherm
