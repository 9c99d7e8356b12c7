#include "spectherm/control.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "spectherm/errors.hpp"
#include "spectherm/heat_profile.hpp"

namespace spectherm {

double pi_step(PiController& c, double error, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("pi_step: dt must be positive");
  if (!(c.lo <= c.hi)) throw std::invalid_argument("pi_step: lo must not exceed hi");
  const double integral = c.integral + error * dt;
  const double raw = c.bias + c.kp * error + c.ki * integral;
  const double out = std::clamp(raw, c.lo, c.hi);
  if (!c.anti_windup || out == raw) c.integral = integral;
  return out;
}

EstimatorState::EstimatorState(const ReducedModel& model, double dt, double T_init,
                               const Eigen::VectorXd& u0, int grid_r, int grid_z)
    : sys_(discretize(model, dt)), evaluator_(model, grid_r, grid_z),
      x_(project_initial_state(model, T_init, u0)), u_(u0) {}

void EstimatorState::advance(const Eigen::VectorXd& u, double w) {
  x_ = sys_.step(x_, u, w);
  u_ = u;
}

double estimate_mean(EstimatorState& est, const Eigen::VectorXd& u, double w) {
  est.advance(u, w);
  return est.mean();
}

ReducedPlant::ReducedPlant(ReducedModel model, double dt, int grid_r, int grid_z)
    : model_(std::move(model)), sys_(discretize(model_, dt)), evaluator_(model_, grid_r, grid_z) {
  reset(kAmbientC, model_input(model_, model_.cooling));
}

void ReducedPlant::reset(double T_init, const Eigen::VectorXd& u0) {
  x_ = project_initial_state(model_, T_init, u0);
  u_ = u0;
}

void ReducedPlant::step(const Eigen::VectorXd& u, double q) {
  x_ = sys_.step(x_, u, q);
  u_ = u;
  if (!x_.allFinite()) throw NumericalFailure("ReducedPlant: non-finite state", 0);
}

ThermalMetrics ReducedPlant::metrics() const { return evaluator_.metrics(x_, u_); }

Eigen::Vector4d ReducedPlant::outputs() const { return model_.C * x_ + model_.Dft * u_; }

FdPlant::FdPlant(const CellSpec& spec, const CoolingConfig& cooling, const FdConfig& cfg,
                 double dt)
    : spec_(spec), cooling_(cooling), solver_(spec, cooling, cfg),
      substeps_(std::lround(dt / cfg.dt)) {
  if (substeps_ < 1 || std::abs(substeps_ * cfg.dt - dt) > 1e-9 * dt) {
    throw std::invalid_argument("FdPlant: control interval must be a multiple of the FD step");
  }
}

void FdPlant::reset(double T_init, const Eigen::VectorXd&) { solver_.reset(T_init); }

void FdPlant::step(const Eigen::VectorXd& u, double q) {
  for (long s = 0; s < substeps_; ++s) solver_.step(u, q);
}

double side_input(const CoolingConfig& cooling, Side side, double T_inf) {
  return side_sign(side) * cooling[side].h * T_inf;
}

ControlTrace closed_loop_run(Plant& plant, const ReducedModel& estimator_model, Scenario scenario,
                             const std::vector<double>& q, double dt, double horizon,
                             const ControlOptions& opt) {
  const long n = step_count(dt, horizon);
  if (q.empty() || (q.size() != 1 && static_cast<long>(q.size()) < n + 1)) {
    throw std::invalid_argument("closed_loop_run: heat series shorter than the horizon");
  }
  const CellSpec& spec = plant.spec();
  const CoolingConfig& cooling = plant.cooling();

  ControlTrace tr;
  tr.inputs = input_sides(spec.shape);
  const auto driven = active_sides(scenario, spec.shape);
  const auto n_in = static_cast<Eigen::Index>(tr.inputs.size());
  std::vector<PiController> pis(tr.inputs.size());
  for (std::size_t j = 0; j < tr.inputs.size(); ++j) {
    tr.active.push_back(std::find(driven.begin(), driven.end(), tr.inputs[j]) != driven.end());
    pis[j] = PiController{opt.kp, opt.ki, 0.0, opt.lo, opt.hi, opt.baseline_T_inf, true};
  }

  Eigen::VectorXd cmd = Eigen::VectorXd::Constant(n_in, opt.baseline_T_inf);
  auto inputs_for = [&](const Eigen::VectorXd& t_inf) {
    Eigen::VectorXd u(n_in);
    for (Eigen::Index j = 0; j < n_in; ++j) {
      u(j) = side_input(cooling, tr.inputs[static_cast<std::size_t>(j)], t_inf(j));
    }
    return u;
  };
  Eigen::VectorXd u = inputs_for(cmd);
  plant.reset(opt.T_init, u);
  EstimatorState est(estimator_model, dt, opt.T_init, u);
  double t_hat = est.mean();

  for (long k = 0; k <= n; ++k) {
    if (k < n) {
      const double e = opt.setpoint - t_hat;
      for (std::size_t j = 0; j < pis.size(); ++j) {
        if (tr.active[j]) cmd(static_cast<Eigen::Index>(j)) = pi_step(pis[j], e, dt);
      }
    }
    const ThermalMetrics m = plant.metrics();
    tr.times.push_back(static_cast<double>(k) * dt);
    tr.T_mean.push_back(m.T_mean);
    tr.T_hat.push_back(t_hat);
    tr.dTr_mean.push_back(m.dTr_mean);
    tr.dTz_mean.push_back(m.dTz_mean);
    tr.dTr_max.push_back(m.dTr_max);
    tr.dTz_max.push_back(m.dTz_max);
    if (k == n) {
      tr.u.push_back(u);
      tr.T_cmd.push_back(cmd);
      break;
    }
    u = inputs_for(cmd);
    tr.u.push_back(u);
    tr.T_cmd.push_back(cmd);
    const double qk = q.size() == 1 ? q[0] : q[static_cast<std::size_t>(k)];
    plant.step(u, qk);
    t_hat = estimate_mean(est, u, qk);
  }
  return tr;
}

}  // namespace spectherm
