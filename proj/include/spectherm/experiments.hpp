#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "spectherm/control.hpp"
#include "spectherm/fd_oracle.hpp"
#include "spectherm/galerkin.hpp"
#include "spectherm/simulate.hpp"
#include "spectherm/tec.hpp"

namespace spectherm {

/// Square model order O = M * N with M = N. Throws std::invalid_argument
/// when O is not a positive perfect square.
int order_side(int order);
ReducedModel assemble_order(const CellSpec& spec, const CoolingConfig& cooling, int order);

/// Heat series sampled on a coarse grid, repeated onto a grid `substeps`
/// times finer (zero-order hold).
std::vector<double> refine_series(const std::vector<double>& q, long substeps);

/// Reduced-model run from a uniform initial temperature with the cooling's
/// own boundary inputs held constant.
SimResult run_cooled(const ReducedModel& model, const std::vector<double>& q, double dt,
                     double horizon, double T_init, const RunOptions& options = {});

/// FD oracle run recorded every `dt` (a whole multiple of cfg.dt).
FdResult run_oracle(const CellSpec& spec, const CoolingConfig& cooling,
                    const std::vector<double>& q, double dt, double horizon, FdConfig cfg,
                    double T_init, bool with_metrics);

struct ConvergenceRow {
  int order = 0;
  double max_error = 0.0;              ///< max over time and outputs [K]
  std::array<double, 4> per_output{};  ///< surface, core, top, bottom
  double t_at_max = 0.0;
};

/// Max-over-time output error of each order against one oracle run, compared
/// at every coarse step.
std::vector<ConvergenceRow> convergence_study(const CellSpec& spec, const CoolingConfig& cooling,
                                              const std::vector<double>& q, double dt,
                                              double horizon, const std::vector<int>& orders,
                                              const FdConfig& fd, double T_init);

/// Indicator traces used for the lumped-model comparison.
struct IndicatorTrace {
  std::string name;
  std::vector<double> times;
  std::vector<double> T_mean;
  std::vector<double> T_max;
  std::vector<double> dTr_max;
};

struct IndicatorErrors {
  std::string name;
  double T_mean = 0.0;
  double T_max = 0.0;
  double dTr_max = 0.0;
};

/// Lumped model traces: mean (T_s + T_c) / 2, maximum max(T_s, T_c) and
/// gradient (T_c - T_s) / (R_out - R_in). q in W/m^3.
IndicatorTrace tec_indicators(const TecModel& tec, const CellSpec& spec,
                              const std::vector<double>& q, double dt, double horizon,
                              double T_init);
IndicatorTrace model_indicators(const std::string& name, const SimResult& r);
IndicatorTrace oracle_indicators(const FdResult& r);

/// Max-over-time absolute difference to the reference trace.
IndicatorErrors indicator_errors(const IndicatorTrace& trace, const IndicatorTrace& reference);

/// Peak-over-time thermal merits of one run.
struct Merits {
  double T_mean = 0.0;
  double T_max = 0.0;
  double dTr_max = 0.0;
  double dTz_max = 0.0;
  double dT = 0.0;
};

Merits peak_merits(const std::vector<ThermalMetrics>& metrics);

Merits scenario_merits(const CellSpec& spec, Scenario scenario, int order,
                       const std::vector<double>& q, double dt, double horizon, double T_init,
                       int metrics_stride = 1);

/// Outer radius and height giving the baseline volume at L / R_out = ratio
/// with R_in fixed; nullopt when the ratio admits no R_out > R_in.
std::optional<CellSpec> constant_volume_cell(const CellSpec& base, double ratio);

struct SweepPoint {
  double ratio = 0.0;
  CellSpec spec;
  Merits merits;
};

/// Infeasible ratios are skipped and reported through `skipped`.
std::vector<SweepPoint> geometry_sweep(const CellSpec& base, Scenario scenario, int order,
                                       const std::vector<double>& ratios,
                                       const std::vector<double>& q, double dt, double horizon,
                                       double T_init, std::vector<double>* skipped = nullptr);

/// Closed loop on a reduced plant with an estimator of the same order.
ControlTrace reduced_closed_loop(const CellSpec& spec, Scenario scenario, int plant_order,
                                 int estimator_order, const std::vector<double>& q, double dt,
                                 double horizon, const ControlOptions& options = {});

/// Mean of `v` over the samples with t >= t0.
double tail_mean(const std::vector<double>& t, const std::vector<double>& v, double t0);
/// Max |v - target| over the samples with t >= t0.
double tail_max_deviation(const std::vector<double>& t, const std::vector<double>& v,
                          double target, double t0);

}  // namespace spectherm
