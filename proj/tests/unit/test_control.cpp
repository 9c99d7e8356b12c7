#include <doctest.h>

#include <cmath>

#include "spectherm/control.hpp"
#include "spectherm/experiments.hpp"
#include "spectherm/scenario.hpp"

using namespace spectherm;

TEST_CASE("pi_step examples") {
  PiController c;
  c.kp = 2.0;
  c.ki = 0.1;
  CHECK(pi_step(c, 0.0, 1.0) == 0.0);
  CHECK(pi_step(c, 1.0, 1.0) == doctest::Approx(2.1));
  CHECK(pi_step(c, 1.0, 1.0) == doctest::Approx(2.2));
  CHECK_THROWS_AS(pi_step(c, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("anti-windup freezes the integral while clamped") {
  PiController c;
  c.lo = -1.0;
  c.hi = 1.0;
  for (int k = 0; k < 50; ++k) CHECK(pi_step(c, -10.0, 1.0) == -1.0);
  CHECK(c.integral == 0.0);
  c.anti_windup = false;
  pi_step(c, -10.0, 1.0);
  CHECK(c.integral == -10.0);
}

TEST_CASE("estimator equals the plant when the models coincide") {
  const auto spec = lfp_cylinder();
  const auto cool = make_cooling(Scenario::aTSC, spec.shape);
  const ReducedModel m = assemble_order(spec, cool, 4);
  ReducedPlant plant(m, 1.0);
  const Eigen::VectorXd u = model_input(m, cool);
  plant.reset(15.0, u);
  EstimatorState est(m, 1.0, 15.0, u);
  for (int k = 0; k < 200; ++k) {
    plant.step(u, 4e4);
    const double th = estimate_mean(est, u, 4e4);
    CHECK(std::abs(th - plant.metrics().T_mean) <= 1e-9);
  }
}

TEST_CASE("estimator stays flat at equilibrium") {
  const auto spec = lfp_cylinder();
  const auto cool = make_cooling(Scenario::SC, spec.shape);
  const ReducedModel m = assemble_order(spec, cool, 9);
  const Eigen::VectorXd u = model_input(m, cool);
  EstimatorState est(m, 1.0, 15.0, u);
  const double t0 = est.mean();
  for (int k = 0; k < 100; ++k) CHECK(std::abs(estimate_mean(est, u, 0.0) - t0) <= 1e-9);
}

TEST_CASE("estimator tracks the FD plant at steady state") {
  const auto spec = lfp_cylinder();
  const auto cool = make_cooling(Scenario::aTSC, spec.shape);
  const ReducedModel m = assemble_order(spec, cool, 4);
  FdConfig cfg;
  cfg.n_r = 48;
  cfg.n_z = 48;
  cfg.dt = 1.0;
  FdPlant plant(spec, cool, cfg, 20.0);
  const Eigen::VectorXd u = model_input(m, cool);
  plant.reset(15.0, u);
  EstimatorState est(m, 20.0, 15.0, u);
  double th = est.mean();
  for (int k = 0; k < 300; ++k) {
    plant.step(u, 5e4);
    th = estimate_mean(est, u, 5e4);
  }
  CHECK(std::abs(th - plant.metrics().T_mean) <= 0.3);
}

TEST_CASE("zero error keeps commands at baseline") {
  const auto spec = lfp_cylinder();
  // The projected initial field carries a small basis error, so the
  // zero-error setpoint is the estimator's own initial mean.
  const auto cool = make_cooling(Scenario::aTSC, spec.shape);
  const ReducedModel m = assemble_order(spec, cool, 4);
  ControlOptions opt;
  opt.setpoint = EstimatorState(m, 1.0, opt.T_init, model_input(m, cool)).mean();
  const ControlTrace tr = reduced_closed_loop(spec, Scenario::aTSC, 4, 4, {0.0}, 1.0, 200.0, opt);
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    for (Eigen::Index j = 0; j < tr.T_cmd[k].size(); ++j) {
      CHECK(std::abs(tr.T_cmd[k](j) - opt.baseline_T_inf) <= 1e-6);
    }
    CHECK(std::abs(tr.T_mean[k] - tr.T_mean.front()) <= 1e-9);
  }
}

TEST_CASE("closed-loop invariants") {
  const auto spec = lfp_cylinder();
  ControlOptions opt;
  const ControlTrace tr = reduced_closed_loop(spec, Scenario::SC, 9, 9, {6e4}, 1.0, 600.0, opt);
  const auto cool = make_cooling(Scenario::SC, spec.shape);
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    for (std::size_t j = 0; j < tr.inputs.size(); ++j) {
      const double cmd = tr.T_cmd[k](static_cast<Eigen::Index>(j));
      CHECK(cmd >= opt.lo);
      CHECK(cmd <= opt.hi);
      if (!tr.active[j]) {
        CHECK(tr.u[k](static_cast<Eigen::Index>(j)) == side_input(cool, tr.inputs[j], opt.baseline_T_inf));
      }
    }
  }
  CHECK(tr.active == std::vector<bool>{true, false, false});
  // Integral action removes the steady error when unsaturated.
  CHECK(std::abs(tr.T_mean.back() - opt.setpoint) <= 0.05);
}

TEST_CASE("tracking error decays monotonically after the first overshoot") {
  const auto spec = lfp_cylinder();
  const ControlTrace tr = reduced_closed_loop(spec, Scenario::aTSC, 9, 9, {3e4}, 1.0, 1200.0);
  std::vector<double> e;
  for (double t : tr.T_mean) e.push_back(std::abs(t - 20.0));
  // Envelope of |e|: successive local maxima do not grow once past the first peak.
  std::vector<double> peaks;
  for (std::size_t k = 1; k + 1 < e.size(); ++k) {
    if (e[k] >= e[k - 1] && e[k] >= e[k + 1] && e[k] > 1e-6) peaks.push_back(e[k]);
  }
  for (std::size_t i = 2; i < peaks.size(); ++i) CHECK(peaks[i] <= peaks[i - 1] + 1e-9);
}
