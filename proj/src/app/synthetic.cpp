#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "spectherm/app/profiles.hpp"
#include "spectherm/errors.hpp"

namespace spectherm::app {

HeatProfile synthetic_profile(const SyntheticProfile& p, double dt, double horizon,
                              std::uint64_t seed, double cell_volume) {
  if (!(dt > 0.0)) throw std::invalid_argument("synthetic_profile: dt must be positive");
  const long n = step_count(dt, horizon);
  std::vector<double> times(static_cast<std::size_t>(n) + 1), q(times.size());
  for (long k = 0; k <= n; ++k) times[static_cast<std::size_t>(k)] = static_cast<double>(k) * dt;

  switch (p.kind) {
    case ProfileKind::ConstantQ:
      std::fill(q.begin(), q.end(), p.amplitude);
      break;
    case ProfileKind::PulseTrain:
      for (std::size_t k = 0; k < q.size(); ++k) {
        const double phase = std::fmod(times[k], p.period);
        q[k] = phase < p.duty * p.period - 1e-9 * dt ? p.amplitude : p.base;
      }
      break;
    case ProfileKind::ScaledRandomDrive: {
      if (!(cell_volume > 0.0)) throw std::invalid_argument("synthetic_profile: volume must be positive");
      std::mt19937_64 rng(seed);
      std::normal_distribution<double> draw(0.0, p.current_rms);
      const double decay = std::exp(-dt / p.tau);
      double target = draw(rng), current = 0.0, next_draw = p.segment;
      for (std::size_t k = 0; k < q.size(); ++k) {
        if (times[k] >= next_draw - 1e-9 * dt) {
          target = draw(rng);
          next_draw += p.segment;
        }
        const double overpotential = current * p.resistance;
        q[k] = p.scale * bernardi_q(current, overpotential, 0.0, cell_volume);
        current = target + (current - target) * decay;
      }
      break;
    }
    case ProfileKind::File:
      throw std::invalid_argument("synthetic_profile: file profiles are ingested, not generated");
  }
  return HeatProfile::volumetric(std::move(times), std::move(q));
}

std::vector<double> config_heat_series(const RunConfig& cfg, std::uint64_t seed) {
  const double vol = cell_volume(cfg.cell);
  const HeatProfile p = cfg.profile.kind == ProfileKind::File
                            ? ingest_drive_cycle(cfg.profile.path, vol)
                            : synthetic_profile(cfg.profile, cfg.dt, cfg.horizon, seed, vol);
  return resample_profile(p, cfg.dt, cfg.horizon);
}

}  // namespace spectherm::app
