#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "spectherm/app/config.hpp"
#include "spectherm/heat_profile.hpp"

namespace spectherm::app {

/// Parses a drive-cycle CSV. Accepted headers, exactly:
///   t_s,q_Wm3
///   t_s,I_A,V_V,Vocv_V
/// Blank lines are skipped. Errors carry the 1-based line number.
HeatProfile parse_drive_cycle(std::istream& in);

/// Reads a drive cycle and converts electrical columns to W/m^3 with the
/// cell volume.
HeatProfile ingest_drive_cycle(const std::string& path, double cell_volume);

/// Writes the profile in its own column format with round-trip precision.
void write_drive_cycle(std::ostream& out, const HeatProfile& profile);

/// Synthetic heat input sampled on t_k = k dt over the horizon.
/// PulseTrain: amplitude for the first duty * period of every period, base
/// otherwise. ScaledRandomDrive: current drawn from N(0, current_rms) every
/// `segment` seconds, low-passed with time constant `tau`, turned into heat
/// I^2 R / V_b and multiplied by `scale`.
HeatProfile synthetic_profile(const SyntheticProfile& p, double dt, double horizon,
                              std::uint64_t seed, double cell_volume);

/// Profile selected by the configuration, resampled on the model grid.
std::vector<double> config_heat_series(const RunConfig& cfg, std::uint64_t seed);

}  // namespace spectherm::app
