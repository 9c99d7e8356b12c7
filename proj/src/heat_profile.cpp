#include "spectherm/heat_profile.hpp"

#include <cmath>
#include <stdexcept>

namespace spectherm {

double bernardi_q(double current, double voltage, double v_ocv, double cell_volume) {
  if (!(cell_volume > 0.0)) {
    throw std::invalid_argument("bernardi_q: cell volume must be positive");
  }
  return current * (voltage - v_ocv) / cell_volume;
}

void HeatProfile::check_times(const std::vector<double>& times) {
  if (times.empty()) throw std::invalid_argument("HeatProfile: no samples");
  if (times.front() != 0.0) throw std::invalid_argument("HeatProfile: first sample must be at t = 0");
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) {
      throw std::invalid_argument("HeatProfile: sample times must be strictly increasing");
    }
  }
}

HeatProfile HeatProfile::volumetric(std::vector<double> times, std::vector<double> q) {
  check_times(times);
  if (q.size() != times.size()) throw std::invalid_argument("HeatProfile: size mismatch");
  HeatProfile p;
  p.kind_ = Kind::VolumetricQ;
  p.times_ = std::move(times);
  p.q_ = std::move(q);
  return p;
}

HeatProfile HeatProfile::electrical(std::vector<double> times,
                                    std::vector<ElectricalSample> samples) {
  check_times(times);
  if (samples.size() != times.size()) throw std::invalid_argument("HeatProfile: size mismatch");
  HeatProfile p;
  p.kind_ = Kind::ElectricalIVO;
  p.times_ = std::move(times);
  p.iv_ = std::move(samples);
  return p;
}

HeatProfile HeatProfile::constant(double q) { return volumetric({0.0}, {q}); }

HeatProfile HeatProfile::to_volumetric(double cell_volume) const {
  if (kind_ == Kind::VolumetricQ) return *this;
  std::vector<double> q;
  q.reserve(iv_.size());
  for (const auto& s : iv_) q.push_back(bernardi_q(s.current, s.voltage, s.v_ocv, cell_volume));
  return volumetric(times_, std::move(q));
}

HeatProfile HeatProfile::scaled(double factor) const {
  if (kind_ != Kind::VolumetricQ) {
    throw std::invalid_argument("HeatProfile::scaled: convert to volumetric first");
  }
  auto q = q_;
  for (auto& v : q) v *= factor;
  return volumetric(times_, std::move(q));
}

long step_count(double dt, double horizon) {
  if (!(dt > 0.0)) throw std::invalid_argument("step_count: dt must be positive");
  if (!(horizon >= 0.0)) throw std::invalid_argument("step_count: horizon must be non-negative");
  return static_cast<long>(std::floor(horizon / dt + 1e-9));
}

std::vector<double> resample_profile(const HeatProfile& profile, double dt, double horizon) {
  if (profile.size() == 0) throw std::invalid_argument("resample_profile: empty profile");
  if (profile.kind() != HeatProfile::Kind::VolumetricQ) {
    throw std::invalid_argument("resample_profile: convert electrical profile to volumetric first");
  }
  const long n = step_count(dt, horizon);
  const auto& t = profile.times();
  const auto& q = profile.q();
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n + 1));
  std::size_t j = 0;
  for (long k = 0; k <= n; ++k) {
    const double tk = static_cast<double>(k) * dt;
    const double tol = 1e-9 * dt;
    while (j + 1 < t.size() && t[j + 1] <= tk + tol) ++j;
    out.push_back(q[j]);
  }
  return out;
}

}  // namespace spectherm
