#include "spectherm/app/commands.hpp"

#include <cstdio>
#include <future>
#include <ostream>
#include <sstream>

#include <Eigen/Core>

#include "spectherm/app/output.hpp"
#include "spectherm/app/profiles.hpp"
#include "spectherm/errors.hpp"
#include "spectherm/experiments.hpp"
#include "spectherm/timing.hpp"

namespace spectherm::app {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

/// Evaluates f on every item concurrently; results keep the input order.
template <class T, class F>
auto parallel_map(const std::vector<T>& items, F f) {
  using R = decltype(f(items.front()));
  std::vector<std::future<R>> jobs;
  jobs.reserve(items.size());
  for (const T& item : items) jobs.push_back(std::async(std::launch::async, f, std::cref(item)));
  std::vector<R> out;
  out.reserve(items.size());
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

ordered_json provenance(const std::string& command, const RunConfig& cfg, std::uint64_t seed) {
  ordered_json j;
  j["command"] = command;
  j["config_hash"] = config_hash(cfg);
  j["seed"] = seed;
  j["versions"] = {{"spectherm", kVersion},
                   {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                 std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                 std::to_string(EIGEN_MINOR_VERSION)},
                   {"schema", kSchemaVersion}};
  return j;
}

std::string order_label(int order) { return "O" + std::to_string(order); }

std::string c_rate_label(double c) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%gC", c);
  return buf;
}

/// Input symbol of a side: s, c, t, b for cylinders and fs, bs, t, b for pouches.
std::string input_symbol(Side s, Shape shape) {
  switch (s) {
    case Side::Surface:
      return shape == Shape::Cylindrical ? "s" : "fs";
    case Side::Core:
      return shape == Shape::Cylindrical ? "c" : "bs";
    case Side::Top:
      return "t";
    case Side::Bottom:
      return "b";
  }
  return "?";
}

void require_cylinder(const RunConfig& cfg, const std::string& command) {
  if (cfg.cell.shape != Shape::Cylindrical) {
    throw UnsupportedShapeError(command + " requires a cylindrical cell");
  }
}

bool non_increasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[i - 1]) return false;
  }
  return true;
}

CsvTable indicator_table(const IndicatorTrace& t) {
  CsvTable csv({"t_s", "T_mean_degC", "T_max_degC", "dTr_max_Kpm"});
  for (std::size_t k = 0; k < t.times.size(); ++k) {
    csv.add({t.times[k], t.T_mean[k], t.T_max[k], t.dTr_max[k]});
  }
  return csv;
}

template <class Pick>
std::string argbest(const std::vector<Scenario>& names, const std::vector<Merits>& m, Pick pick,
                    bool lowest) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < m.size(); ++i) {
    if (lowest ? pick(m[i]) < pick(m[best]) : pick(m[i]) > pick(m[best])) best = i;
  }
  return std::string(scenario_name(names[best]));
}

struct MarketCell {
  const char* name;
  double ratio;
};
constexpr MarketCell kMarketCells[] = {{"18650", 7.22}, {"26650", 5.42}, {"21700", 6.67},
                                       {"4680", 3.48}};

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"validate", "compare-tec", "scenarios",
                                              "control",  "sweep-geometry", "simulate"};
  return names;
}

ordered_json cmd_validate(const RunConfig& cfg, const fs::path& dir, std::uint64_t seed) {
  const std::vector<double> q = config_heat_series(cfg, seed);
  const auto studies = parallel_map(cfg.scenarios, [&](const Scenario& s) {
    return convergence_study(cfg.cell, cfg.cooling_for(s), q, cfg.dt, cfg.horizon, cfg.orders,
                             cfg.fd, cfg.T_init);
  });

  std::vector<std::string> header{"scenario", "order", "max_error_K"};
  for (Side s : kAllSides) header.push_back(std::string(side_name(s, cfg.cell.shape)) + "_error_K");
  header.push_back("t_at_max_s");
  CsvTable csv(header);
  ordered_json summary = provenance("validate", cfg, seed);
  summary["fd"] = {{"n_r", cfg.fd.n_r}, {"n_z", cfg.fd.n_z}, {"dt_s", cfg.fd.dt}};
  auto& per = summary["scenarios"];
  for (std::size_t i = 0; i < cfg.scenarios.size(); ++i) {
    const std::string name(scenario_name(cfg.scenarios[i]));
    std::vector<double> errs;
    ordered_json rows = ordered_json::array();
    for (const ConvergenceRow& r : studies[i]) {
      csv.add(name, {static_cast<double>(r.order), r.max_error, r.per_output[0], r.per_output[1],
                     r.per_output[2], r.per_output[3], r.t_at_max});
      errs.push_back(r.max_error);
      rows.push_back({{"order", r.order}, {"max_error_K", r.max_error}});
    }
    per[name] = {{"orders", rows}, {"non_increasing", non_increasing(errs)}};
  }
  csv.write(dir / "convergence.csv");
  return summary;
}

ordered_json cmd_compare_tec(const RunConfig& cfg, const fs::path& dir, std::uint64_t seed) {
  require_cylinder(cfg, "compare-tec");
  const std::vector<double> q = config_heat_series(cfg, seed);
  const Scenario scenario = cfg.scenarios.front();
  const CoolingConfig cooling = cfg.cooling_for(scenario);

  auto oracle = std::async(std::launch::async, [&] {
    return oracle_indicators(
        run_oracle(cfg.cell, cooling, q, cfg.dt, cfg.horizon, cfg.fd, cfg.T_init, true));
  });
  const auto models = parallel_map(cfg.orders, [&](const int& order) {
    return assemble_order(cfg.cell, cooling, order);
  });
  std::vector<IndicatorTrace> traces;
  for (std::size_t i = 0; i < models.size(); ++i) {
    traces.push_back(model_indicators(order_label(cfg.orders[i]),
                                      run_cooled(models[i], q, cfg.dt, cfg.horizon, cfg.T_init)));
  }
  TecModel tec = cfg.tec;
  const IndicatorTrace tec_trace = tec_indicators(tec, cfg.cell, q, cfg.dt, cfg.horizon, cfg.T_init);
  const IndicatorTrace ref = oracle.get();

  CsvTable profile({"t_s", "q_Wm3"});
  for (std::size_t k = 0; k < ref.times.size(); ++k) profile.add({ref.times[k], q[k]});
  profile.write(dir / "profile.csv");
  indicator_table(ref).write(dir / "FD.csv");
  indicator_table(tec_trace).write(dir / "TEC.csv");
  for (const auto& t : traces) indicator_table(t).write(dir / (t.name + ".csv"));

  CsvTable errors({"model", "T_mean_error_K", "T_max_error_K", "dTr_max_error_Kpm"});
  ordered_json summary = provenance("compare-tec", cfg, seed);
  summary["scenario"] = std::string(scenario_name(scenario));
  auto& rows = summary["errors"];
  const IndicatorErrors tec_err = indicator_errors(tec_trace, ref);
  std::vector<IndicatorErrors> all{tec_err};
  for (const auto& t : traces) all.push_back(indicator_errors(t, ref));
  for (const auto& e : all) {
    errors.add(e.name, {e.T_mean, e.T_max, e.dTr_max});
    rows[e.name] = {{"T_mean_K", e.T_mean}, {"T_max_K", e.T_max}, {"dTr_max_Kpm", e.dTr_max}};
  }
  errors.write(dir / "errors.csv");
  for (std::size_t i = 1; i < all.size(); ++i) {
    summary["beats_tec"][all[i].name] = all[i].T_mean < tec_err.T_mean &&
                                        all[i].T_max < tec_err.T_max &&
                                        all[i].dTr_max < tec_err.dTr_max;
  }

  // Wall times vary run to run, so they stay out of the CSV/JSON outputs.
  const Eigen::VectorXd u0 = to_input_vector(BoundaryInput::from_cooling(cooling),
                                             input_sides(cfg.cell.shape));
  std::vector<TimedModel> timed{timed_tec("TEC", tec, cfg.dt, cell_volume(cfg.cell))};
  for (std::size_t i = 0; i < models.size(); ++i) {
    timed.push_back(timed_reduced_model(order_label(cfg.orders[i]), models[i], cfg.dt, u0,
                                        cfg.T_init));
  }
  const auto timing = timing_harness(timed, q, cfg.timing_repetitions);
  std::ostringstream txt;
  txt << "model mean_ms min_ms repetitions\n";
  char line[160];
  for (const auto& r : timing) {
    std::snprintf(line, sizeof line, "%s %.6f %.6f %d\n", r.name.c_str(), r.mean_ms, r.min_ms,
                  r.repetitions);
    txt << line;
  }
  if (timing.size() > 1) {
    std::snprintf(line, sizeof line, "%s vs TEC: %+.1f%% wall time\n", timing[1].name.c_str(),
                  100.0 * (timing[1].mean_ms / timing[0].mean_ms - 1.0));
    txt << line;
  }
  write_text(dir / "timing.txt", txt.str());
  return summary;
}

ordered_json cmd_scenarios(const RunConfig& cfg, const fs::path& dir, std::uint64_t seed) {
  const std::vector<double> q = config_heat_series(cfg, seed);
  const std::vector<Scenario> all(kAllScenarios.begin(), kAllScenarios.end());
  const auto merits = parallel_map(all, [&](const Scenario& s) {
    std::vector<Merits> per_order;
    for (int order : cfg.orders) {
      per_order.push_back(scenario_merits(cfg.cell, s, order, q, cfg.dt, cfg.horizon, cfg.T_init));
    }
    return per_order;
  });

  CsvTable csv({"scenario", "order", "T_mean_degC", "T_max_degC", "dTr_max_Kpm", "dTz_max_Kpm",
                "dT_K"});
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = 0; j < cfg.orders.size(); ++j) {
      const Merits& m = merits[i][j];
      csv.add(std::string(scenario_name(all[i])),
              {static_cast<double>(cfg.orders[j]), m.T_mean, m.T_max, m.dTr_max, m.dTz_max, m.dT});
    }
  }
  csv.write(dir / "merits.csv");

  ordered_json summary = provenance("scenarios", cfg, seed);
  summary["merits"] = "peak over the horizon";
  for (std::size_t j = 0; j < cfg.orders.size(); ++j) {
    std::vector<Merits> col;
    for (const auto& per : merits) col.push_back(per[j]);
    summary["ranking"][order_label(cfg.orders[j])] = {
        {"lowest_T_mean", argbest(all, col, [](const Merits& m) { return m.T_mean; }, true)},
        {"lowest_T_max", argbest(all, col, [](const Merits& m) { return m.T_max; }, true)},
        {"lowest_dTr_max", argbest(all, col, [](const Merits& m) { return m.dTr_max; }, true)},
        {"lowest_dT", argbest(all, col, [](const Merits& m) { return m.dT; }, true)},
        {"highest_T_mean", argbest(all, col, [](const Merits& m) { return m.T_mean; }, false)}};
  }
  return summary;
}

ordered_json cmd_control(const RunConfig& cfg, const fs::path& dir, std::uint64_t seed) {
  const std::vector<double> base = config_heat_series(cfg, seed);
  const ControlSection& c = cfg.control;
  ControlOptions opt;
  opt.setpoint = c.setpoint;
  opt.T_init = cfg.T_init;
  opt.baseline_T_inf = cfg.T_init;
  opt.kp = c.kp;
  opt.ki = c.ki;
  opt.lo = c.lo;
  opt.hi = c.hi;

  struct Job {
    Scenario scenario;
    double c_rate;
  };
  std::vector<Job> jobs;
  for (Scenario s : c.scenarios) {
    for (double rate : c.c_rates) jobs.push_back({s, rate});
  }
  const auto traces = parallel_map(jobs, [&](const Job& job) {
    // Joule-type heat scales with the square of the current.
    std::vector<double> q = base;
    for (double& v : q) v *= job.c_rate * job.c_rate;
    const CoolingConfig cooling = make_cooling(job.scenario, cfg.cell.shape, opt.baseline_T_inf);
    const ReducedModel est = assemble_order(cfg.cell, cooling, c.estimator_order);
    std::unique_ptr<Plant> plant;
    if (c.plant_order == 0) {
      plant = std::make_unique<FdPlant>(cfg.cell, cooling, cfg.fd, cfg.dt);
    } else {
      plant = std::make_unique<ReducedPlant>(assemble_order(cfg.cell, cooling, c.plant_order),
                                             cfg.dt);
    }
    return closed_loop_run(*plant, est, job.scenario, q, cfg.dt, cfg.horizon, opt);
  });

  const double t_tail = 0.8 * cfg.horizon;
  CsvTable table({"scenario", "c_rate", "T_mean_tail_degC", "max_tracking_error_K",
                  "dTr_mean_Kpm", "dTz_mean_Kpm"});
  ordered_json summary = provenance("control", cfg, seed);
  summary["plant"] = c.plant_order == 0 ? std::string("FD") : order_label(c.plant_order);
  summary["estimator"] = order_label(c.estimator_order);
  summary["window"] = "final 20% of the horizon";
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const ControlTrace& tr = traces[i];
    const std::string name = std::string(scenario_name(jobs[i].scenario)) + "_" +
                             c_rate_label(jobs[i].c_rate);
    std::vector<std::string> header{"t_s", "T_mean_degC", "T_hat_degC"};
    for (Side s : tr.inputs) header.push_back("u_" + input_symbol(s, cfg.cell.shape) + "_Wpm2");
    header.push_back("dTr_mean_Kpm");
    header.push_back("dTz_mean_Kpm");
    CsvTable csv(header);
    for (std::size_t k = 0; k < tr.times.size(); ++k) {
      std::vector<double> row{tr.times[k], tr.T_mean[k], tr.T_hat[k]};
      for (Eigen::Index j = 0; j < tr.u[k].size(); ++j) row.push_back(tr.u[k](j));
      row.push_back(tr.dTr_mean[k]);
      row.push_back(tr.dTz_mean[k]);
      csv.add(row);
    }
    csv.write(dir / (name + ".csv"));

    const double dtr = tail_mean(tr.times, tr.dTr_mean, t_tail);
    const double dtz = tail_mean(tr.times, tr.dTz_mean, t_tail);
    const double mean = tail_mean(tr.times, tr.T_mean, t_tail);
    const double dev = tail_max_deviation(tr.times, tr.T_mean, c.setpoint, t_tail);
    table.add(std::string(scenario_name(jobs[i].scenario)),
              {jobs[i].c_rate, mean, dev, dtr, dtz});
    summary["runs"][name] = {{"T_mean_tail_degC", mean},
                             {"max_tracking_error_K", dev},
                             {"dTr_mean_Kpm", dtr},
                             {"dTz_mean_Kpm", dtz}};
  }
  table.write(dir / "summary.csv");
  return summary;
}

ordered_json cmd_sweep_geometry(const RunConfig& cfg, const fs::path& dir, std::uint64_t seed,
                                std::ostream& log) {
  require_cylinder(cfg, "sweep-geometry");
  const std::vector<double> q = config_heat_series(cfg, seed);
  const double vol = cell_volume(cfg.cell);
  std::vector<double> market;
  for (const auto& m : kMarketCells) market.push_back(m.ratio);

  struct Sweep {
    std::vector<SweepPoint> points, markers;
    std::vector<double> skipped;
  };
  const auto sweeps = parallel_map(cfg.sweep.scenarios, [&](const Scenario& s) {
    Sweep w;
    w.points = geometry_sweep(cfg.cell, s, cfg.sweep.order, cfg.sweep.ratios, q, cfg.dt,
                              cfg.horizon, cfg.T_init, &w.skipped);
    std::vector<double> dropped;
    w.markers = geometry_sweep(cfg.cell, s, cfg.sweep.order, market, q, cfg.dt, cfg.horizon,
                               cfg.T_init, &dropped);
    return w;
  });

  ordered_json summary = provenance("sweep-geometry", cfg, seed);
  summary["order"] = cfg.sweep.order;
  summary["volume_m3"] = vol;
  CsvTable markers({"cell", "scenario", "L_over_Rout", "R_out_m", "L_m", "T_mean_degC",
                    "dTr_max_Kpm", "dTz_max_Kpm"});
  for (std::size_t i = 0; i < sweeps.size(); ++i) {
    const std::string name(scenario_name(cfg.sweep.scenarios[i]));
    for (double r : sweeps[i].skipped) {
      log << "warning: ratio " << r << " leaves no room above R_in; skipped\n";
    }
    CsvTable csv({"L_over_Rout", "R_out_m", "L_m", "volume_m3", "T_mean_degC", "dTr_max_Kpm",
                  "dTz_max_Kpm"});
    std::vector<double> tm, dz;
    double vol_err = 0.0;
    for (const SweepPoint& p : sweeps[i].points) {
      const double v = cell_volume(p.spec);
      vol_err = std::max(vol_err, std::abs(v - vol) / vol);
      csv.add({p.ratio, p.spec.R_out, p.spec.L, v, p.merits.T_mean, p.merits.dTr_max,
               p.merits.dTz_max});
      tm.push_back(p.merits.T_mean);
      dz.push_back(p.merits.dTz_max);
    }
    csv.write(dir / (name + ".csv"));
    auto non_decreasing = [](const std::vector<double>& v) {
      for (std::size_t k = 1; k < v.size(); ++k) {
        if (v[k] < v[k - 1]) return false;
      }
      return true;
    };
    summary["scenarios"][name] = {{"T_mean_non_decreasing", non_decreasing(tm)},
                                  {"dTz_max_non_decreasing", non_decreasing(dz)},
                                  {"max_volume_rel_error", vol_err}};
    for (std::size_t k = 0; k < sweeps[i].markers.size(); ++k) {
      const SweepPoint& p = sweeps[i].markers[k];
      markers.add({kMarketCells[k].name, name},
                  {p.ratio, p.spec.R_out, p.spec.L, p.merits.T_mean, p.merits.dTr_max,
                   p.merits.dTz_max});
    }
  }
  markers.write(dir / "markers.csv");
  return summary;
}

ordered_json cmd_simulate(const RunConfig& cfg, const fs::path& dir, std::uint64_t seed) {
  const std::vector<double> q = config_heat_series(cfg, seed);
  const Scenario scenario = cfg.scenarios.front();
  const CoolingConfig cooling = cfg.cooling_for(scenario);
  const auto results = parallel_map(cfg.orders, [&](const int& order) {
    return run_cooled(assemble_order(cfg.cell, cooling, order), q, cfg.dt, cfg.horizon,
                      cfg.T_init);
  });
  std::vector<std::string> header{"t_s"};
  for (Side s : kAllSides) header.push_back("T_" + std::string(side_name(s, cfg.cell.shape)) + "_degC");
  for (const char* h : {"T_mean_degC", "T_max_degC", "T_min_degC", "dTr_max_Kpm", "dTz_max_Kpm",
                        "dTr_mean_Kpm", "dTz_mean_Kpm"}) {
    header.push_back(h);
  }
  ordered_json summary = provenance("simulate", cfg, seed);
  summary["scenario"] = cooling.scenario_name;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const SimResult& r = results[i];
    CsvTable csv(header);
    for (std::size_t k = 0; k < r.times.size(); ++k) {
      const ThermalMetrics& m = r.metrics[k];
      csv.add({r.times[k], r.outputs[k](0), r.outputs[k](1), r.outputs[k](2), r.outputs[k](3),
               m.T_mean, m.T_max, m.T_min, m.dTr_max, m.dTz_max, m.dTr_mean, m.dTz_mean});
    }
    csv.write(dir / (order_label(cfg.orders[i]) + ".csv"));
    const Merits p = peak_merits(r.metrics);
    const ThermalMetrics& last = r.metrics.back();
    summary["orders"][order_label(cfg.orders[i])] = {
        {"final_T_mean_degC", last.T_mean}, {"final_T_max_degC", last.T_max},
        {"peak_T_mean_degC", p.T_mean},     {"peak_T_max_degC", p.T_max},
        {"peak_dTr_max_Kpm", p.dTr_max},    {"peak_dTz_max_Kpm", p.dTz_max}};
  }
  return summary;
}

int run_command(const std::string& command, const RunConfig& cfg, const fs::path& out_root,
                std::uint64_t seed, std::ostream& log, std::ostream& err) {
  const fs::path dir = out_root / command;
  try {
    ordered_json summary;
    if (command == "validate") {
      summary = cmd_validate(cfg, dir, seed);
    } else if (command == "compare-tec") {
      summary = cmd_compare_tec(cfg, dir, seed);
    } else if (command == "scenarios") {
      summary = cmd_scenarios(cfg, dir, seed);
    } else if (command == "control") {
      summary = cmd_control(cfg, dir, seed);
    } else if (command == "sweep-geometry") {
      summary = cmd_sweep_geometry(cfg, dir, seed, log);
    } else if (command == "simulate") {
      summary = cmd_simulate(cfg, dir, seed);
    } else {
      err << "error: unknown command '" << command << "'\n";
      return kExitConfig;
    }
    write_json(dir / "summary.json", summary);
    log << "wrote " << dir.string() << "\n";
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const UnsupportedShapeError& e) {
    err << "unsupported: " << e.what() << "\n";
    return kExitUnsupported;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
}

}  // namespace spectherm::app
