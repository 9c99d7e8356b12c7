#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "spectherm/cell.hpp"
#include "spectherm/control.hpp"
#include "spectherm/fd_oracle.hpp"
#include "spectherm/scenario.hpp"
#include "spectherm/tec.hpp"

namespace spectherm::app {

inline constexpr int kSchemaVersion = 1;

enum class ProfileKind { ConstantQ, PulseTrain, ScaledRandomDrive, File };

/// Heat input descriptor. Amplitudes are W/m^3; `path` is used by File only.
struct SyntheticProfile {
  ProfileKind kind = ProfileKind::ConstantQ;
  double amplitude = 1e5;
  double period = 900.0;      ///< PulseTrain [s]
  double duty = 2.0 / 3.0;    ///< PulseTrain on-fraction of each period
  double base = 0.0;          ///< PulseTrain off-level [W/m^3]
  double current_rms = 45.0;  ///< ScaledRandomDrive [A]
  double resistance = 2e-3;   ///< ScaledRandomDrive overpotential per ampere [Ohm]
  double segment = 10.0;      ///< ScaledRandomDrive hold time of each draw [s]
  double tau = 30.0;          ///< ScaledRandomDrive low-pass time constant [s]
  double scale = 2.0;         ///< ScaledRandomDrive heat scaling
  std::string path;
};

struct ControlSection {
  double setpoint = 20.0;
  double kp = 2.0;
  double ki = 0.05;
  double lo = -20.0;
  double hi = 40.0;
  std::vector<double> c_rates{1.0, 2.0, 3.0, 4.0};
  /// 0 selects the FD oracle as plant.
  int plant_order = 9;
  int estimator_order = 9;
  std::vector<Scenario> scenarios{kAllScenarios.begin(), kAllScenarios.end()};
};

struct SweepSection {
  std::vector<double> ratios{2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0};
  int order = 9;
  std::vector<Scenario> scenarios{kAllScenarios.begin(), kAllScenarios.end()};
};

struct RunConfig {
  CellSpec cell = lfp_cylinder();
  std::vector<Scenario> scenarios{Scenario::SC};
  std::optional<CoolingConfig> cooling;  ///< explicit override of the first scenario
  std::vector<int> orders{1, 4, 9, 16, 25};
  double dt = 1.0;
  double horizon = 600.0;
  double T_init = kAmbientC;
  SyntheticProfile profile;
  std::string output_dir = "out";
  std::uint64_t seed = 0;
  FdConfig fd;
  TecModel tec;
  ControlSection control;
  SweepSection sweep;
  int timing_repetitions = 5;

  /// Canonical JSON (all fields, fixed key order) used for hashing.
  nlohmann::ordered_json to_json() const;
  /// Cooling of a scenario for this cell, honouring an explicit override.
  CoolingConfig cooling_for(Scenario s) const;
};

/// Parses and validates a configuration document. Missing keys keep their
/// defaults; unknown keys, wrong types and invalid values raise ConfigError
/// carrying the 1-based line of the offending key.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// 64-bit FNV-1a over the bytes.
std::uint64_t fnv1a64(const std::string& bytes);
std::string config_hash(const RunConfig& cfg);

std::string_view profile_kind_name(ProfileKind k);

}  // namespace spectherm::app
