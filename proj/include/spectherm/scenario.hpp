#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <vector>

#include "spectherm/cell.hpp"

namespace spectherm {

/// Cooling presets: surface (SC), bottom tab (bTC), bottom tab + surface
/// (bTSC), both tabs (btTC), all tabs + surface (aTSC).
enum class Scenario { SC, bTC, bTSC, btTC, aTSC };

inline constexpr std::array<Scenario, 5> kAllScenarios{Scenario::SC, Scenario::bTC,
                                                       Scenario::bTSC, Scenario::btTC,
                                                       Scenario::aTSC};

inline constexpr double kActiveH = 400.0;   ///< forced liquid cooling [W/(m^2 K)]
inline constexpr double kPassiveH = 30.0;   ///< mild air convection [W/(m^2 K)]
inline constexpr double kAmbientC = 15.0;   ///< default coolant / initial temperature [degC]

std::string_view scenario_name(Scenario s);
std::optional<Scenario> parse_scenario(std::string_view name);

/// Sides whose cooling is actively driven under the scenario. For pouch cells
/// "surface" covers both the front and the back face.
std::vector<Side> active_sides(Scenario s, Shape shape);

/// Preset cooling configuration: h = 400 on active sides, h = 30 elsewhere,
/// h = 0 on the cylinder core, all free-stream temperatures at `T_inf`.
CoolingConfig make_cooling(Scenario s, Shape shape, double T_inf = kAmbientC);

}  // namespace spectherm
