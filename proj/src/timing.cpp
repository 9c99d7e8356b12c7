#include "spectherm/timing.hpp"

#include <algorithm>
#include <chrono>
#include <memory>
#include <stdexcept>

#include "spectherm/simulate.hpp"

namespace spectherm {

namespace {
// Keeps the optimiser from discarding timed work.
volatile double g_sink = 0.0;
}  // namespace

std::vector<TimingRow> timing_harness(const std::vector<TimedModel>& models,
                                      const std::vector<double>& q_profile, int repetitions) {
  if (repetitions < 3) throw std::invalid_argument("timing_harness: repetitions must be >= 3");
  std::vector<TimingRow> rows;
  for (const auto& m : models) {
    m.simulate(q_profile);  // warm-up
    double total = 0.0, best = 1e300;
    for (int rep = 0; rep < repetitions; ++rep) {
      const auto t0 = std::chrono::steady_clock::now();
      m.simulate(q_profile);
      const auto t1 = std::chrono::steady_clock::now();
      const double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
      total += ms;
      best = std::min(best, ms);
    }
    rows.push_back({m.name, total / repetitions, best, repetitions});
  }
  return rows;
}

TimedModel timed_reduced_model(const std::string& name, const ReducedModel& model, double dt,
                               const Eigen::VectorXd& u, double T_init) {
  auto sys = std::make_shared<DiscreteSystem>(discretize(model, dt));
  auto x0 = std::make_shared<Eigen::VectorXd>(project_initial_state(model, T_init, u));
  auto C = std::make_shared<Eigen::MatrixXd>(model.C);
  const Eigen::VectorXd y_bias = model.Dft * u;
  const Eigen::Index ni = sys->Bd.cols() - 1;
  const Eigen::VectorXd bu = sys->Bd.leftCols(ni) * u;
  const Eigen::VectorXd bw = sys->Bd.col(ni);
  return {name, [sys, x0, C, y_bias, bu, bw](const std::vector<double>& q) {
            Eigen::VectorXd x = *x0, next(x.size()), y(C->rows());
            double acc = 0.0;
            for (double qk : q) {
              y.noalias() = *C * x;
              y += y_bias;
              acc += y(0);
              next.noalias() = sys->Ad * x;
              next += bu + bw * qk;
              x.swap(next);
            }
            g_sink = g_sink + acc;
          }};
}

TimedModel timed_tec(const std::string& name, const TecModel& tec, double dt,
                     double cell_volume) {
  const TecStepper stepper(tec, dt);
  const TecState x0{tec.T_inf, tec.T_inf};
  return {name, [stepper, x0, cell_volume](const std::vector<double>& q) {
            TecState x = x0;
            double acc = 0.0;
            for (double qk : q) {
              acc += x.T_s;
              x = stepper.step(x, qk * cell_volume);
            }
            g_sink = g_sink + acc;
          }};
}

}  // namespace spectherm
