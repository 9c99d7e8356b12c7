#include "spectherm/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/tools/roots.hpp>

#include "spectherm/errors.hpp"
#include "spectherm/heat_profile.hpp"
#include "spectherm/scenario.hpp"

namespace spectherm {

int order_side(int order) {
  if (order < 1) throw std::invalid_argument("model order must be positive");
  const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(order))));
  if (side * side != order) {
    throw std::invalid_argument("model order " + std::to_string(order) +
                                " is not a perfect square");
  }
  return side;
}

ReducedModel assemble_order(const CellSpec& spec, const CoolingConfig& cooling, int order) {
  const int side = order_side(order);
  return assemble(spec, cooling, side, side);
}

std::vector<double> refine_series(const std::vector<double>& q, long substeps) {
  if (substeps < 1) throw std::invalid_argument("refine_series: substeps must be >= 1");
  if (q.size() <= 1) return q;
  std::vector<double> out;
  out.reserve((q.size() - 1) * static_cast<std::size_t>(substeps) + 1);
  for (std::size_t k = 0; k + 1 < q.size(); ++k) {
    out.insert(out.end(), static_cast<std::size_t>(substeps), q[k]);
  }
  out.push_back(q.back());
  return out;
}

SimResult run_cooled(const ReducedModel& model, const std::vector<double>& q, double dt,
                     double horizon, double T_init, const RunOptions& options) {
  const Eigen::VectorXd u = model_input(model, model.cooling);
  InputSeries in;
  in.U = u;
  in.w = q;
  return run(model, project_initial_state(model, T_init, u), in, dt, horizon, options);
}

FdResult run_oracle(const CellSpec& spec, const CoolingConfig& cooling,
                    const std::vector<double>& q, double dt, double horizon, FdConfig cfg,
                    double T_init, bool with_metrics) {
  const long sub = std::lround(dt / cfg.dt);
  if (sub < 1 || std::abs(static_cast<double>(sub) * cfg.dt - dt) > 1e-9 * dt) {
    throw std::invalid_argument("oracle step must divide the model step");
  }
  cfg.record_stride = static_cast<int>(sub);
  cfg.metrics_stride = with_metrics ? static_cast<int>(sub) : 0;
  InputSeries in;
  in.U = to_input_vector(BoundaryInput::from_cooling(cooling), input_sides(spec.shape));
  in.w = refine_series(q, sub);
  return fd_solve(spec, cooling, in, horizon, cfg, T_init);
}

std::vector<ConvergenceRow> convergence_study(const CellSpec& spec, const CoolingConfig& cooling,
                                              const std::vector<double>& q, double dt,
                                              double horizon, const std::vector<int>& orders,
                                              const FdConfig& fd, double T_init) {
  const FdResult ref = run_oracle(spec, cooling, q, dt, horizon, fd, T_init, false);
  std::vector<ConvergenceRow> rows;
  RunOptions ro;
  ro.metrics_stride = 0;
  ro.record_states = false;
  for (int order : orders) {
    const ReducedModel m = assemble_order(spec, cooling, order);
    const SimResult r = run_cooled(m, q, dt, horizon, T_init, ro);
    if (r.outputs.size() != ref.outputs.size()) {
      throw std::logic_error("convergence_study: sample count mismatch");
    }
    ConvergenceRow row;
    row.order = order;
    for (std::size_t k = 0; k < r.outputs.size(); ++k) {
      for (int i = 0; i < 4; ++i) {
        const double e = std::abs(r.outputs[k](i) - ref.outputs[k](i));
        row.per_output[static_cast<std::size_t>(i)] =
            std::max(row.per_output[static_cast<std::size_t>(i)], e);
        if (e > row.max_error) {
          row.max_error = e;
          row.t_at_max = r.times[k];
        }
      }
    }
    rows.push_back(row);
  }
  return rows;
}

IndicatorTrace tec_indicators(const TecModel& tec, const CellSpec& spec,
                              const std::vector<double>& q, double dt, double horizon,
                              double T_init) {
  const double vol = cell_volume(spec);
  std::vector<double> watts(q.size());
  std::transform(q.begin(), q.end(), watts.begin(), [vol](double v) { return v * vol; });
  const TecRun r = tec_run(tec, TecState{T_init, T_init}, watts, dt, horizon);
  IndicatorTrace out;
  out.name = "TEC";
  out.times = r.times;
  for (const TecState& s : r.states) {
    const TecMetrics m = tec_metrics(s.T_c, s.T_s, spec);
    out.T_mean.push_back(m.T_mean);
    out.T_max.push_back(std::max(s.T_c, s.T_s));
    out.dTr_max.push_back(std::abs(m.dTr));
  }
  return out;
}

IndicatorTrace model_indicators(const std::string& name, const SimResult& r) {
  IndicatorTrace out;
  out.name = name;
  out.times = r.metric_times;
  for (const ThermalMetrics& m : r.metrics) {
    out.T_mean.push_back(m.T_mean);
    out.T_max.push_back(m.T_max);
    out.dTr_max.push_back(m.dTr_max);
  }
  return out;
}

IndicatorTrace oracle_indicators(const FdResult& r) {
  IndicatorTrace out;
  out.name = "FD";
  out.times = r.metric_times;
  for (const ThermalMetrics& m : r.metrics) {
    out.T_mean.push_back(m.T_mean);
    out.T_max.push_back(m.T_max);
    out.dTr_max.push_back(m.dTr_max);
  }
  return out;
}

IndicatorErrors indicator_errors(const IndicatorTrace& trace, const IndicatorTrace& reference) {
  if (trace.times.size() != reference.times.size()) {
    throw std::invalid_argument("indicator_errors: traces sampled differently");
  }
  IndicatorErrors e;
  e.name = trace.name;
  for (std::size_t k = 0; k < trace.times.size(); ++k) {
    e.T_mean = std::max(e.T_mean, std::abs(trace.T_mean[k] - reference.T_mean[k]));
    e.T_max = std::max(e.T_max, std::abs(trace.T_max[k] - reference.T_max[k]));
    e.dTr_max = std::max(e.dTr_max, std::abs(trace.dTr_max[k] - reference.dTr_max[k]));
  }
  return e;
}

Merits peak_merits(const std::vector<ThermalMetrics>& metrics) {
  if (metrics.empty()) throw std::invalid_argument("peak_merits: no samples");
  Merits p{metrics.front().T_mean, metrics.front().T_max, metrics.front().dTr_max,
           metrics.front().dTz_max, metrics.front().dT};
  for (const ThermalMetrics& m : metrics) {
    p.T_mean = std::max(p.T_mean, m.T_mean);
    p.T_max = std::max(p.T_max, m.T_max);
    p.dTr_max = std::max(p.dTr_max, m.dTr_max);
    p.dTz_max = std::max(p.dTz_max, m.dTz_max);
    p.dT = std::max(p.dT, m.dT);
  }
  return p;
}

Merits scenario_merits(const CellSpec& spec, Scenario scenario, int order,
                       const std::vector<double>& q, double dt, double horizon, double T_init,
                       int metrics_stride) {
  const ReducedModel m = assemble_order(spec, make_cooling(scenario, spec.shape, T_init), order);
  RunOptions ro;
  ro.metrics_stride = metrics_stride;
  ro.record_states = false;
  return peak_merits(run_cooled(m, q, dt, horizon, T_init, ro).metrics);
}

std::optional<CellSpec> constant_volume_cell(const CellSpec& base, double ratio) {
  if (base.shape != Shape::Cylindrical) {
    throw UnsupportedShapeError("geometry sweep requires a cylindrical cell");
  }
  if (!(ratio > 0.0)) throw std::invalid_argument("aspect ratio must be positive");
  const double vol = cell_volume(base);
  const double ri = base.R_in;
  auto excess = [&](double r) { return std::numbers::pi * (r * r - ri * ri) * ratio * r - vol; };
  // The volume grows monotonically in R_out; it vanishes at R_in.
  double hi = std::max(2.0 * ri, base.R_out);
  while (excess(hi) < 0.0) hi *= 2.0;
  std::uintmax_t iters = 200;
  const auto [a, b] = boost::math::tools::toms748_solve(
      excess, ri, hi, -vol, excess(hi), boost::math::tools::eps_tolerance<double>(52), iters);
  const double r_out = 0.5 * (a + b);
  if (!(r_out > ri * (1.0 + 1e-9))) return std::nullopt;
  CellSpec s = base;
  s.R_out = r_out;
  s.L = ratio * r_out;
  return s;
}

std::vector<SweepPoint> geometry_sweep(const CellSpec& base, Scenario scenario, int order,
                                       const std::vector<double>& ratios,
                                       const std::vector<double>& q, double dt, double horizon,
                                       double T_init, std::vector<double>* skipped) {
  std::vector<SweepPoint> pts;
  for (double ratio : ratios) {
    const auto s = constant_volume_cell(base, ratio);
    if (!s) {
      if (skipped) skipped->push_back(ratio);
      continue;
    }
    pts.push_back({ratio, *s, scenario_merits(*s, scenario, order, q, dt, horizon, T_init)});
  }
  return pts;
}

ControlTrace reduced_closed_loop(const CellSpec& spec, Scenario scenario, int plant_order,
                                 int estimator_order, const std::vector<double>& q, double dt,
                                 double horizon, const ControlOptions& options) {
  const CoolingConfig cooling = make_cooling(scenario, spec.shape, options.baseline_T_inf);
  ReducedPlant plant(assemble_order(spec, cooling, plant_order), dt);
  const ReducedModel est = assemble_order(spec, cooling, estimator_order);
  return closed_loop_run(plant, est, scenario, q, dt, horizon, options);
}

double tail_mean(const std::vector<double>& t, const std::vector<double>& v, double t0) {
  double sum = 0.0;
  long n = 0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (t[k] >= t0) {
      sum += v[k];
      ++n;
    }
  }
  if (n == 0) throw std::invalid_argument("tail_mean: empty window");
  return sum / static_cast<double>(n);
}

double tail_max_deviation(const std::vector<double>& t, const std::vector<double>& v,
                          double target, double t0) {
  double dev = 0.0;
  bool any = false;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (t[k] >= t0) {
      dev = std::max(dev, std::abs(v[k] - target));
      any = true;
    }
  }
  if (!any) throw std::invalid_argument("tail_max_deviation: empty window");
  return dev;
}

}  // namespace spectherm
