#include "spectherm/tec.hpp"

#include <stdexcept>

#include <unsupported/Eigen/MatrixFunctions>

#include "spectherm/errors.hpp"
#include "spectherm/heat_profile.hpp"

namespace spectherm {

void TecModel::validate() const {
  if (!(C_c > 0.0 && C_s > 0.0 && R_c > 0.0 && R_u > 0.0)) {
    throw std::invalid_argument("TecModel: capacities and resistances must be positive");
  }
}

TecStepper::TecStepper(const TecModel& m, double dt) : T_inf_(m.T_inf) {
  m.validate();
  if (!(dt > 0.0)) throw std::invalid_argument("TecStepper: dt must be positive");
  Eigen::Matrix4d aug = Eigen::Matrix4d::Zero();
  aug(0, 0) = -1.0 / (m.R_c * m.C_c);
  aug(0, 1) = 1.0 / (m.R_c * m.C_c);
  aug(1, 0) = 1.0 / (m.R_c * m.C_s);
  aug(1, 1) = -(1.0 / m.R_c + 1.0 / m.R_u) / m.C_s;
  aug(0, 2) = 1.0 / m.C_c;
  aug(1, 3) = 1.0 / (m.R_u * m.C_s);
  const Eigen::Matrix4d phi = (aug * dt).exp();
  Ad_ = phi.topLeftCorner<2, 2>();
  Bd_ = phi.topRightCorner<2, 2>();
}

TecState TecStepper::step(TecState x, double q) const {
  const Eigen::Vector2d next =
      Ad_ * Eigen::Vector2d(x.T_c, x.T_s) + Bd_ * Eigen::Vector2d(q, T_inf_);
  return {next(0), next(1)};
}

TecState tec_step(const TecModel& m, TecState x, double q, double dt) {
  return TecStepper(m, dt).step(x, q);
}

TecState tec_steady_state(const TecModel& m, double q) {
  m.validate();
  const double T_s = m.T_inf + q * m.R_u;
  return {T_s + q * m.R_c, T_s};
}

TecMetrics tec_metrics(double T_c, double T_s, const CellSpec& spec) {
  if (spec.shape != Shape::Cylindrical) {
    throw UnsupportedShapeError("tec_metrics: the lumped benchmark is defined for cylindrical cells");
  }
  return {0.5 * (T_s + T_c), (T_c - T_s) / (spec.R_out - spec.R_in)};
}

TecRun tec_run(const TecModel& m, TecState x0, const std::vector<double>& q_watts, double dt,
               double horizon) {
  const long n = step_count(dt, horizon);
  if (q_watts.empty() || (q_watts.size() != 1 && static_cast<long>(q_watts.size()) < n + 1)) {
    throw std::invalid_argument("tec_run: heat series shorter than the horizon");
  }
  const TecStepper stepper(m, dt);
  TecRun run;
  run.times.reserve(static_cast<std::size_t>(n + 1));
  run.states.reserve(static_cast<std::size_t>(n + 1));
  TecState x = x0;
  for (long k = 0; k <= n; ++k) {
    run.times.push_back(static_cast<double>(k) * dt);
    run.states.push_back(x);
    if (k < n) x = stepper.step(x, q_watts.size() == 1 ? q_watts[0] : q_watts[static_cast<std::size_t>(k)]);
  }
  return run;
}

}  // namespace spectherm
