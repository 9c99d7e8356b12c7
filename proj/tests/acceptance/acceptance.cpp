// Acceptance checks: one PASS/FAIL line per criterion.
//   acceptance            run every criterion
//   acceptance <n>        run criterion n only

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "spectherm/chebyshev.hpp"
#include "spectherm/experiments.hpp"
#include "spectherm/heat_profile.hpp"
#include "spectherm/particular.hpp"
#include "spectherm/scenario.hpp"
#include "spectherm/tec.hpp"
#include "spectherm/timing.hpp"

using namespace spectherm;

namespace {

// Tolerances and budgets.
constexpr double kBasisResidualTol = 1e-10;
constexpr double kO25ErrorTol = 0.1;      // K
constexpr double kO1ErrorTol = 1.5;       // K
constexpr double kSurfaceRiseRelTol = 0.01;
constexpr double kCoreSurfaceRelTol = 0.02;
constexpr double kEnergyRateRelTol = 1e-3;
constexpr double kSuperpositionRelTol = 1e-9;
constexpr double kTecSteadyTol = 1e-6;    // K
constexpr double kTrackingTol = 0.5;      // K
constexpr double kTimingRatioMax = 10.0;

constexpr double kConvergenceQ = 1e5;       // W/m^3
constexpr double kConvergenceHorizon = 600.0;
constexpr double kScenarioQ = 1e5;
constexpr double kScenarioHorizon = 1800.0;
constexpr double kControlQ = 3e4;
constexpr double kControlHorizon = 1200.0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::vector<double> constant_q(double q, double dt, double horizon) {
  return std::vector<double>(static_cast<std::size_t>(step_count(dt, horizon)) + 1, q);
}

/// Pulse train: amplitude for the first `on` seconds of every period.
std::vector<double> pulse_q(double amplitude, double period, double on, double dt,
                            double horizon) {
  std::vector<double> q;
  for (long k = 0; k <= step_count(dt, horizon); ++k) {
    q.push_back(std::fmod(static_cast<double>(k) * dt, period) < on ? amplitude : 0.0);
  }
  return q;
}

CellSpec pouch_cell() {
  CellSpec s;
  s.shape = Shape::Pouch;
  s.L = 0.2;
  s.D = 0.1;
  s.rho = 2000.0;
  s.cp = 900.0;
  s.k_r = 1.2;
  s.k_z = 25.0;
  return s;
}

Outcome basis_correctness() {
  double worst = 0.0;
  for (bool pouch : {false, true}) {
    const CellSpec spec = pouch ? pouch_cell() : lfp_cylinder();
    for (Scenario sc : kAllScenarios) {
      const CoolingConfig cool = make_cooling(sc, spec.shape);
      const ModelBases b = build_model_bases(spec, cool, 11, 11);
      for (int k = 0; k <= 10; ++k) {
        worst = std::max({worst, robin_residual(b.r, k), robin_residual(b.z, k)});
      }
    }
  }
  return {worst <= kBasisResidualTol, "max scaled residual " + fmt("%.3g", worst)};
}

Outcome spectral_convergence() {
  const CellSpec spec = lfp_cylinder();
  FdConfig fd;  // 128 x 128, CN, dt = 0.05
  const auto rows = convergence_study(spec, make_cooling(Scenario::SC, spec.shape),
                                      constant_q(kConvergenceQ, 1.0, kConvergenceHorizon), 1.0,
                                      kConvergenceHorizon, {1, 4, 9, 16, 25}, fd, kAmbientC);
  bool monotone = true;
  std::string detail = "max output error:";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    detail += " O" + std::to_string(rows[i].order) + "=" + fmt("%.4f", rows[i].max_error);
    if (i > 0 && rows[i].max_error > rows[i - 1].max_error) monotone = false;
  }
  const bool o25 = rows.back().max_error <= kO25ErrorTol;
  const bool o1 = rows.front().max_error <= kO1ErrorTol;
  detail += std::string(" | non-increasing ") + (monotone ? "yes" : "no");
  detail += std::string(", O25<=0.1 ") + (o25 ? "yes" : "no");
  detail += std::string(", O1<=1.5 ") + (o1 ? "yes" : "no");
  return {monotone && o25 && o1, detail};
}

Outcome analytic_steady_state() {
  const CellSpec spec = lfp_cylinder();
  CoolingConfig cool;
  cool[Side::Surface] = {kActiveH, kAmbientC};
  cool.scenario_name = "SC-insulated-tabs";
  const double q = 1e5, h = kActiveH, ro = spec.R_out, ri = spec.R_in, k = spec.k_r;
  // Radial ODE k (r T')' / r + q = 0, T'(R_in) = 0, -k T'(R_out) = h (T - T_inf).
  const double rise = q * (ro * ro - ri * ri) / (2.0 * h * ro);
  const double core_minus_surface = q / (4.0 * k) * (ro * ro - ri * ri) -
                                    q * ri * ri / (2.0 * k) * std::log(ro / ri);
  bool ok = true;
  std::string detail = "expected rise " + fmt("%.4f", rise) + ", core-surface " +
                       fmt("%.4f", core_minus_surface) + ";";
  for (int order : {16, 25}) {
    const ReducedModel m = assemble_order(spec, cool, order);
    const Eigen::VectorXd u = model_input(m, cool);
    const Eigen::VectorXd xs = steady_state(m, u, q);
    const Eigen::VectorXd y = m.C * xs + m.Dft * u;
    const double got_rise = y(0) - kAmbientC;
    const double got_diff = y(1) - y(0);
    const bool pass = std::abs(got_rise - rise) <= kSurfaceRiseRelTol * rise &&
                      std::abs(got_diff - core_minus_surface) <= kCoreSurfaceRelTol * core_minus_surface;
    ok = ok && pass;
    detail += " O" + std::to_string(order) + ": rise " + fmt("%.4f", got_rise) + ", diff " +
              fmt("%.4f", got_diff);
  }
  return {ok, detail};
}

Outcome energy_balance() {
  const double q = 5e4, horizon = 100.0;
  bool ok = true;
  std::string detail;
  for (bool pouch : {false, true}) {
    const CellSpec spec = pouch ? pouch_cell() : lfp_cylinder();
    const double expected = q / spec.heat_capacity_density();
    CoolingConfig cool;
    cool.scenario_name = "insulated";
    double worst = 0.0;
    for (int order : {1, 4, 9, 16, 25}) {
      const ReducedModel m = assemble_order(spec, cool, order);
      RunOptions ro;
      const SimResult r = run_cooled(m, constant_q(q, 1.0, horizon), 1.0, horizon, kAmbientC, ro);
      const double rate = (r.metrics.back().T_mean - r.metrics.front().T_mean) / horizon;
      worst = std::max(worst, std::abs(rate - expected) / expected);
    }
    FdConfig fd;
    const FdResult f = run_oracle(spec, cool, constant_q(q, 1.0, horizon), 1.0, horizon, fd,
                                  kAmbientC, false);
    const double fd_rate = (f.T_mean.back() - f.T_mean.front()) / horizon;
    const double fd_err = std::abs(fd_rate - expected) / expected;
    ok = ok && worst <= kEnergyRateRelTol && fd_err <= kEnergyRateRelTol;
    detail += std::string(pouch ? " pouch" : "cylinder") + ": expected " + fmt("%.6f", expected) +
              " K/s, CSG rel err " + fmt("%.2e", worst) + ", FD rel err " + fmt("%.2e", fd_err) +
              ";";
  }
  return {ok, detail};
}

Outcome superposition() {
  bool ok = true;
  std::string detail;
  for (bool pouch : {false, true}) {
    const CellSpec spec = pouch ? pouch_cell() : lfp_cylinder();
    const CoolingConfig cool = make_cooling(Scenario::aTSC, spec.shape);
    const ReducedModel m = assemble_order(spec, cool, 9);
    const DiscreteSystem sys = discretize(m, 1.0);
    const int n_in = m.n_inputs();
    auto response = [&](const Eigen::VectorXd& u) {
      std::vector<Eigen::VectorXd> ys;
      Eigen::VectorXd x = Eigen::VectorXd::Zero(m.order());
      for (int k = 0; k < 200; ++k) {
        x = sys.step(x, u, 0.0);
        ys.push_back(m.C * x + m.Dft * u);
      }
      return ys;
    };
    Eigen::VectorXd all = Eigen::VectorXd::Zero(n_in);
    std::vector<Eigen::VectorXd> sum(200, Eigen::VectorXd::Zero(4));
    for (int j = 0; j < n_in; ++j) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(n_in);
      e(j) = 1.0 + 0.5 * j;
      all(j) = e(j);
      const auto ys = response(e);
      for (int k = 0; k < 200; ++k) sum[static_cast<std::size_t>(k)] += ys[static_cast<std::size_t>(k)];
    }
    const auto joint = response(all);
    double worst = 0.0;
    for (int k = 0; k < 200; ++k) {
      const auto& a = joint[static_cast<std::size_t>(k)];
      const auto& b = sum[static_cast<std::size_t>(k)];
      worst = std::max(worst, (a - b).cwiseAbs().maxCoeff() / std::max(1e-300, a.cwiseAbs().maxCoeff()));
    }
    ok = ok && worst <= kSuperpositionRelTol;
    detail += std::string(pouch ? " pouch" : "cylinder") + " (" + std::to_string(n_in) +
              " inputs) rel err " + fmt("%.2e", worst) + ";";
  }
  return {ok, detail};
}

Outcome tec_steady() {
  const TecModel m;  // C_c 1079.6, C_s 48.35, R_c 0.65, R_u 0.08, T_inf 15
  const double q = 10.0;
  // At rest the full heat flows through both resistances in series.
  const double Ts = m.T_inf + q * m.R_u, Tc = Ts + q * m.R_c;
  TecState x{m.T_inf, m.T_inf};
  const TecStepper st(m, 10.0);
  for (int k = 0; k < 20000; ++k) x = st.step(x, q);
  const bool ok = std::abs(Ts - 15.8) <= kTecSteadyTol && std::abs(Tc - 22.3) <= kTecSteadyTol &&
                  std::abs(x.T_s - 15.8) <= kTecSteadyTol && std::abs(x.T_c - 22.3) <= kTecSteadyTol;
  return {ok, "simulated T_s " + fmt("%.9f", x.T_s) + ", T_c " + fmt("%.9f", x.T_c)};
}

Outcome tec_fidelity() {
  const CellSpec spec = lfp_cylinder();
  const CoolingConfig cool = make_cooling(Scenario::SC, spec.shape);
  const double horizon = 1800.0;
  const auto q = pulse_q(1e5, 900.0, 600.0, 1.0, horizon);
  FdConfig fd;
  const IndicatorTrace ref =
      oracle_indicators(run_oracle(spec, cool, q, 1.0, horizon, fd, kAmbientC, true));
  const IndicatorErrors csg = indicator_errors(
      model_indicators("O1", run_cooled(assemble_order(spec, cool, 1), q, 1.0, horizon, kAmbientC)),
      ref);
  const IndicatorErrors tec =
      indicator_errors(tec_indicators(TecModel{}, spec, q, 1.0, horizon, kAmbientC), ref);
  const bool ok = csg.T_mean < tec.T_mean && csg.T_max < tec.T_max && csg.dTr_max < tec.dTr_max;
  return {ok, "O1 errors T_mean " + fmt("%.3f", csg.T_mean) + ", T_max " + fmt("%.3f", csg.T_max) +
                  ", dTr_max " + fmt("%.1f", csg.dTr_max) + " | TEC " + fmt("%.3f", tec.T_mean) +
                  ", " + fmt("%.3f", tec.T_max) + ", " + fmt("%.1f", tec.dTr_max)};
}

Outcome scenario_ordering() {
  const CellSpec spec = lfp_cylinder();
  const auto q = constant_q(kScenarioQ, 1.0, kScenarioHorizon);
  std::map<Scenario, Merits> m;
  for (Scenario s : kAllScenarios) {
    m[s] = scenario_merits(spec, s, 9, q, 1.0, kScenarioHorizon, kAmbientC);
  }
  bool ok = true;
  for (Scenario s : kAllScenarios) {
    if (s != Scenario::aTSC) {
      ok = ok && m[Scenario::aTSC].T_mean < m[s].T_mean && m[Scenario::aTSC].T_max < m[s].T_max;
    }
    if (s != Scenario::btTC) {
      ok = ok && m[Scenario::btTC].dTr_max < m[s].dTr_max && m[Scenario::btTC].dT < m[s].dT;
    }
    if (s != Scenario::bTC) ok = ok && m[Scenario::bTC].T_mean > m[s].T_mean;
  }
  std::string detail = "peak T_mean/T_max/dTr_max/dT:";
  for (Scenario s : kAllScenarios) {
    detail += " " + std::string(scenario_name(s)) + " " + fmt("%.2f", m[s].T_mean) + "/" +
              fmt("%.2f", m[s].T_max) + "/" + fmt("%.0f", m[s].dTr_max) + "/" + fmt("%.2f", m[s].dT);
  }
  return {ok, detail};
}

Outcome closed_loop() {
  const CellSpec spec = lfp_cylinder();
  const double t_tail = 0.8 * kControlHorizon;
  std::map<Scenario, double> grad;
  double dev = 0.0;
  for (Scenario s : kAllScenarios) {
    const ControlTrace tr =
        reduced_closed_loop(spec, s, 9, 9, {kControlQ}, 1.0, kControlHorizon);
    grad[s] = tail_mean(tr.times, tr.dTr_mean, t_tail);
    if (s == Scenario::aTSC) dev = tail_max_deviation(tr.times, tr.T_mean, 20.0, t_tail);
  }
  bool lowest = true;
  for (Scenario s : kAllScenarios) {
    if (s != Scenario::btTC) lowest = lowest && grad[Scenario::btTC] < grad[s];
  }
  std::string detail = "aTSC max |T_mean-20| " + fmt("%.4f", dev) + "; dTr_mean:";
  for (Scenario s : kAllScenarios) detail += " " + std::string(scenario_name(s)) + " " + fmt("%.2f", grad[s]);
  return {dev <= kTrackingTol && lowest, detail};
}

Outcome geometry_sweep_check() {
  const CellSpec base = lfp_cylinder();
  const std::vector<double> ratios{2, 3, 4, 5, 6, 7, 8};
  const auto pts = geometry_sweep(base, Scenario::btTC, 9, ratios,
                                  constant_q(kScenarioQ, 1.0, kScenarioHorizon), 1.0,
                                  kScenarioHorizon, kAmbientC);
  bool ok = pts.size() == ratios.size();
  std::string detail = "T_mean/dTz_max:";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    detail += " " + fmt("%.0f", pts[i].ratio) + ":" + fmt("%.3f", pts[i].merits.T_mean) + "/" +
              fmt("%.1f", pts[i].merits.dTz_max);
    ok = ok && std::abs(cell_volume(pts[i].spec) / cell_volume(base) - 1.0) <= 1e-10;
    if (i > 0) {
      ok = ok && pts[i].merits.T_mean >= pts[i - 1].merits.T_mean &&
           pts[i].merits.dTz_max >= pts[i - 1].merits.dTz_max;
    }
  }
  return {ok, detail};
}

Outcome timing_report() {
  const CellSpec spec = lfp_cylinder();
  const CoolingConfig cool = make_cooling(Scenario::SC, spec.shape);
  const auto q = pulse_q(1e5, 900.0, 600.0, 1.0, 18000.0);
  std::vector<TimedModel> models{timed_tec("TEC", TecModel{}, 1.0, cell_volume(spec))};
  for (int order : {1, 4, 9, 16, 25}) {
    const ReducedModel m = assemble_order(spec, cool, order);
    models.push_back(timed_reduced_model("O" + std::to_string(order), m, 1.0,
                                         model_input(m, cool), kAmbientC));
  }
  const auto rows = timing_harness(models, q, 5);
  std::string detail = "mean ms:";
  for (const auto& r : rows) detail += " " + r.name + " " + fmt("%.4f", r.mean_ms);
  const double ratio = rows[1].mean_ms / rows[0].mean_ms;
  detail += "; O1/TEC " + fmt("%.2f", ratio);
  const bool ok = rows.size() == 6 && ratio <= kTimingRatioMax && ratio >= 1.0 / kTimingRatioMax;
  return {ok, detail};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / "spectherm_acceptance_determinism";
  fs::remove_all(root);
  fs::create_directories(root);
  const fs::path cfg = root / "config.json";
  {
    std::ofstream out(cfg);
    out << R"({
  "schema_version": 1,
  "orders": [1, 4],
  "horizon": 120,
  "fd": {"n_r": 32, "n_z": 32, "dt": 0.25},
  "profile": {"kind": "ScaledRandomDrive", "current_rms": 90, "segment": 5},
  "control": {"c_rates": [1, 2], "estimator_order": 4, "plant_order": 4},
  "sweep": {"order": 4, "ratios": [2, 4, 8]},
  "timing": {"repetitions": 3}
})";
  }
  const std::vector<std::string> commands{"validate", "compare-tec", "scenarios",
                                          "control",  "sweep-geometry", "simulate"};
  for (const char* run : {"a", "b"}) {
    for (const auto& c : commands) {
      const std::string cmd = std::string("\"") + SPECTHERM_CLI + "\" " + c + " --config \"" +
                              cfg.string() + "\" --out \"" + (root / run).string() +
                              "\" --seed 1234 > /dev/null";
      if (std::system(cmd.c_str()) != 0) return {false, "command '" + c + "' failed"};
    }
  }
  std::size_t files = 0;
  for (const auto& e : fs::recursive_directory_iterator(root / "a")) {
    if (!e.is_regular_file()) continue;
    const auto ext = e.path().extension();
    if (ext != ".csv" && ext != ".json") continue;
    const fs::path other = root / "b" / fs::relative(e.path(), root / "a");
    if (!fs::exists(other) || slurp(e.path()) != slurp(other)) {
      return {false, "differs: " + fs::relative(e.path(), root / "a").string()};
    }
    ++files;
  }
  fs::remove_all(root);
  return {files > 0, std::to_string(files) + " CSV/JSON files byte-identical across runs"};
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> check;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "basis correctness", 1.0, basis_correctness},
      {2, "spectral convergence", 120.0, spectral_convergence},
      {3, "analytic steady state", 30.0, analytic_steady_state},
      {4, "energy balance", 10.0, energy_balance},
      {5, "superposition", 10.0, superposition},
      {6, "TEC steady state", 1.0, tec_steady},
      {7, "TEC vs CSG fidelity", 60.0, tec_fidelity},
      {8, "scenario ordering", 120.0, scenario_ordering},
      {9, "closed-loop tracking", 120.0, closed_loop},
      {10, "geometry sweep", 180.0, geometry_sweep_check},
      {11, "timing report", 60.0, timing_report},
      {12, "determinism", 60.0, determinism},
  };
  const int only = argc > 1 ? std::atoi(argv[1]) : 0;
  int failures = 0;
  for (const auto& c : criteria) {
    if (only != 0 && c.id != only) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_budget = secs < c.budget_s;
    const bool pass = o.pass && in_budget;
    failures += !pass;
    std::printf("%s criterion %d (%s): %s [%.2f s of %.0f s]\n", pass ? "PASS" : "FAIL", c.id,
                c.name, o.detail.c_str(), secs, c.budget_s);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
