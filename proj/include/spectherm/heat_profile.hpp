#pragma once

#include <vector>

namespace spectherm {

/// Volumetric heat from current and overpotential, q = I (V - V_ocv) / V_b
/// [W/m^3]. Negative values (endothermic) are passed through.
double bernardi_q(double current, double voltage, double v_ocv, double cell_volume);

/// Piecewise-constant heat input sampled at strictly increasing times
/// starting at t = 0. Either volumetric heat directly or the electrical
/// triple (I, V, V_ocv) from which it is derived.
class HeatProfile {
 public:
  enum class Kind { VolumetricQ, ElectricalIVO };

  struct ElectricalSample {
    double current;  ///< [A]
    double voltage;  ///< [V]
    double v_ocv;    ///< [V]
  };

  static HeatProfile volumetric(std::vector<double> times, std::vector<double> q);
  static HeatProfile electrical(std::vector<double> times, std::vector<ElectricalSample> samples);
  static HeatProfile constant(double q);

  Kind kind() const noexcept { return kind_; }
  const std::vector<double>& times() const noexcept { return times_; }
  /// Volumetric samples; empty for electrical profiles.
  const std::vector<double>& q() const noexcept { return q_; }
  const std::vector<ElectricalSample>& electrical_samples() const noexcept { return iv_; }
  std::size_t size() const noexcept { return times_.size(); }

  /// Converts electrical samples through bernardi_q; volumetric profiles are
  /// returned unchanged.
  HeatProfile to_volumetric(double cell_volume) const;

  /// Multiplies the volumetric samples by `factor`.
  HeatProfile scaled(double factor) const;

 private:
  HeatProfile() = default;
  static void check_times(const std::vector<double>& times);

  Kind kind_ = Kind::VolumetricQ;
  std::vector<double> times_;
  std::vector<double> q_;
  std::vector<ElectricalSample> iv_;
};

/// Zero-order-hold resampling of a volumetric profile onto t_k = k dt,
/// k = 0 .. floor(horizon / dt). Values beyond the last sample hold it.
std::vector<double> resample_profile(const HeatProfile& profile, double dt, double horizon);

/// Number of steps of length dt that fit into horizon (tolerant to rounding).
long step_count(double dt, double horizon);

}  // namespace spectherm
