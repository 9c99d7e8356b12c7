#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "spectherm/errors.hpp"
#include "spectherm/fd_oracle.hpp"
#include "spectherm/scenario.hpp"
#include "spectherm/tec.hpp"
#include "spectherm/timing.hpp"

using namespace spectherm;

namespace {

/// Steady radial conduction with an adiabatic mandrel and convection at R_out.
double radial_steady(const CellSpec& s, double q, double h, double T_inf, double r) {
  const double ro = s.R_out, ri = s.R_in, k = s.k_r;
  const double Ts = T_inf + q * (ro * ro - ri * ri) / (2.0 * h * ro);
  return Ts + q / (4.0 * k) * (ro * ro - r * r) - q * ri * ri / (2.0 * k) * std::log(ro / r);
}

CoolingConfig insulated() {
  CoolingConfig c;
  for (Side s : kAllSides) c[s] = {0.0, 0.0};
  return c;
}

}  // namespace

TEST_CASE("FD oracle conserves energy in an insulated cell") {
  for (bool pouch : {false, true}) {
    const CellSpec spec = pouch ? testutil::pouch_cell() : lfp_cylinder();
    FdConfig cfg;
    cfg.n_r = 24;
    cfg.n_z = 20;
    cfg.dt = 0.5;
    FdSolver fd(spec, insulated(), cfg);
    fd.reset(10.0);
    const Eigen::VectorXd u = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(fd.inputs().size()));
    for (int k = 0; k < 40; ++k) fd.step(u, 5e4);
    CHECK(fd.mean() == doctest::Approx(10.0 + 20.0 * 5e4 / spec.heat_capacity_density()).epsilon(1e-10));
    CHECK(fd.time() == doctest::Approx(20.0));
    CHECK(fd.steps() == 40);
  }
}

TEST_CASE("FD oracle reaches the closed-form radial steady state") {
  const auto spec = lfp_cylinder();
  CoolingConfig cool = insulated();
  cool[Side::Surface] = {kActiveH, kAmbientC};
  FdConfig cfg;
  cfg.n_r = 161;
  cfg.n_z = 5;
  cfg.dt = 2000.0;
  cfg.scheme = FdScheme::BackwardEuler;
  FdSolver fd(spec, cool, cfg);
  fd.reset(kAmbientC);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(3);
  u(0) = kActiveH * kAmbientC;
  for (int k = 0; k < 400; ++k) fd.step(u, 1e5);
  const Eigen::MatrixXd T = fd.field();
  const Eigen::VectorXd& r = fd.r_nodes();
  for (Eigen::Index i = 0; i < r.size(); i += 20) {
    CHECK(T(i, 2) == doctest::Approx(radial_steady(spec, 1e5, kActiveH, kAmbientC, r(i))).epsilon(1e-4));
  }
  const Eigen::Vector4d y = fd.outputs();
  CHECK(y(0) == doctest::Approx(radial_steady(spec, 1e5, kActiveH, kAmbientC, spec.R_out)).epsilon(1e-4));
}

TEST_CASE("CN and BE agree as the step shrinks") {
  const auto spec = lfp_cylinder();
  const auto cool = make_cooling(Scenario::bTSC, spec.shape);
  const Eigen::VectorXd u =
      to_input_vector(BoundaryInput::from_cooling(cool), input_sides(spec.shape));
  auto run = [&](FdScheme s, double dt) {
    FdConfig cfg;
    cfg.n_r = 20;
    cfg.n_z = 20;
    cfg.dt = dt;
    cfg.scheme = s;
    FdSolver fd(spec, cool, cfg);
    fd.reset(kAmbientC);
    const long n = std::lround(60.0 / dt);
    for (long k = 0; k < n; ++k) fd.step(u, 1e5);
    return fd.outputs();
  };
  const Eigen::Vector4d cn = run(FdScheme::CrankNicolson, 0.25);
  const Eigen::Vector4d be = run(FdScheme::BackwardEuler, 0.01);
  CHECK((cn - be).cwiseAbs().maxCoeff() <= 5e-3);
}

TEST_CASE("FD configuration is validated") {
  FdConfig cfg;
  cfg.n_r = 2;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = FdConfig{};
  cfg.dt = -1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("TEC steady state") {
  const TecModel m;
  const TecState s = tec_steady_state(m, 10.0);
  CHECK(s.T_s == doctest::Approx(15.8).epsilon(1e-12));
  CHECK(s.T_c == doctest::Approx(22.3).epsilon(1e-12));
  TecState x{15.0, 15.0};
  const TecStepper st(m, 100.0);
  for (int k = 0; k < 2000; ++k) x = st.step(x, 10.0);
  CHECK(std::abs(x.T_s - 15.8) <= 1e-6);
  CHECK(std::abs(x.T_c - 22.3) <= 1e-6);
}

TEST_CASE("TEC step matches RK4") {
  const TecModel m;
  auto f = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    Eigen::VectorXd d(2);
    d(0) = (25.0 + (x(1) - x(0)) / m.R_c) / m.C_c;
    d(1) = ((m.T_inf - x(1)) / m.R_u + (x(0) - x(1)) / m.R_c) / m.C_s;
    return d;
  };
  Eigen::VectorXd x0(2);
  x0 << 30.0, 18.0;
  const Eigen::VectorXd ref = testutil::rk4(f, x0, 7.0, 20000);
  const TecState s = tec_step(m, {30.0, 18.0}, 25.0, 7.0);
  CHECK(s.T_c == doctest::Approx(ref(0)).epsilon(1e-10));
  CHECK(s.T_s == doctest::Approx(ref(1)).epsilon(1e-10));
}

TEST_CASE("TEC metrics") {
  const auto spec = lfp_cylinder();
  const TecMetrics mt = tec_metrics(22.0, 16.0, spec);
  CHECK(mt.T_mean == doctest::Approx(19.0));
  CHECK(mt.dTr == doctest::Approx(6.0 / (spec.R_out - spec.R_in)));
  CHECK_THROWS_AS(tec_metrics(22.0, 16.0, testutil::pouch_cell()), UnsupportedShapeError);
  TecModel bad;
  bad.R_u = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("timing harness") {
  const auto spec = lfp_cylinder();
  const auto cool = make_cooling(Scenario::SC, spec.shape);
  const ReducedModel m = assemble(spec, cool, 1, 1);
  std::vector<TimedModel> models{timed_tec("TEC", TecModel{}, 1.0, cell_volume(spec)),
                                 timed_reduced_model("O1", m, 1.0, model_input(m, cool), 15.0)};
  const std::vector<double> q(200, 1e5);
  CHECK_THROWS_AS(timing_harness(models, q, 2), std::invalid_argument);
  const auto rows = timing_harness(models, q, 3);
  REQUIRE(rows.size() == 2);
  for (const auto& r : rows) {
    CHECK(r.mean_ms >= r.min_ms);
    CHECK(r.min_ms >= 0.0);
    CHECK(r.repetitions == 3);
  }
}
