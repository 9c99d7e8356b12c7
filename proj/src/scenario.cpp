#include "spectherm/scenario.hpp"

#include <algorithm>

namespace spectherm {

std::string_view scenario_name(Scenario s) {
  switch (s) {
    case Scenario::SC:
      return "SC";
    case Scenario::bTC:
      return "bTC";
    case Scenario::bTSC:
      return "bTSC";
    case Scenario::btTC:
      return "btTC";
    case Scenario::aTSC:
      return "aTSC";
  }
  return "?";
}

std::optional<Scenario> parse_scenario(std::string_view name) {
  for (Scenario s : kAllScenarios) {
    if (scenario_name(s) == name) return s;
  }
  return std::nullopt;
}

std::vector<Side> active_sides(Scenario s, Shape shape) {
  std::vector<Side> surface{Side::Surface};
  if (shape == Shape::Pouch) surface.push_back(Side::Core);

  std::vector<Side> out;
  switch (s) {
    case Scenario::SC:
      out = surface;
      break;
    case Scenario::bTC:
      out = {Side::Bottom};
      break;
    case Scenario::bTSC:
      out = surface;
      out.push_back(Side::Bottom);
      break;
    case Scenario::btTC:
      out = {Side::Top, Side::Bottom};
      break;
    case Scenario::aTSC:
      out = surface;
      out.push_back(Side::Top);
      out.push_back(Side::Bottom);
      break;
  }
  return out;
}

CoolingConfig make_cooling(Scenario s, Shape shape, double T_inf) {
  CoolingConfig c;
  c.scenario_name = std::string(scenario_name(s));
  const auto active = active_sides(s, shape);
  for (Side side : kAllSides) {
    const bool on = std::find(active.begin(), active.end(), side) != active.end();
    c[side] = SideCooling{on ? kActiveH : kPassiveH, T_inf};
  }
  if (shape == Shape::Cylindrical) c[Side::Core].h = 0.0;
  return c;
}

}  // namespace spectherm
