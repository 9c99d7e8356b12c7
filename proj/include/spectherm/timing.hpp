#pragma once

#include <functional>
#include <string>
#include <vector>

#include "spectherm/galerkin.hpp"
#include "spectherm/tec.hpp"

namespace spectherm {

/// A named workload; the callable simulates the whole profile once.
struct TimedModel {
  std::string name;
  std::function<void(const std::vector<double>& q)> simulate;
};

struct TimingRow {
  std::string name;
  double mean_ms = 0.0;
  double min_ms = 0.0;
  int repetitions = 0;
};

/// Wall-clock mean per model over `repetitions` runs of the same profile.
/// Requires repetitions >= 3. Reported only; timings are hardware-dependent.
std::vector<TimingRow> timing_harness(const std::vector<TimedModel>& models,
                                      const std::vector<double>& q_profile, int repetitions);

/// Reduced model stepped with precomputed ZOH matrices; q in W/m^3.
TimedModel timed_reduced_model(const std::string& name, const ReducedModel& model, double dt,
                               const Eigen::VectorXd& u, double T_init);

/// Lumped benchmark; q in W/m^3 converted to W with the cell volume.
TimedModel timed_tec(const std::string& name, const TecModel& tec, double dt,
                     double cell_volume);

}  // namespace spectherm
