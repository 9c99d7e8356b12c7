#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "spectherm/app/config.hpp"

namespace spectherm::app {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitNumerical = 3,
  kExitUnsupported = 4,
};

const std::vector<std::string>& command_names();

/// Runs one command, writing `<out>/<command>/...`. Library errors are
/// mapped to exit codes and reported on `err`.
int run_command(const std::string& command, const RunConfig& cfg,
                const std::filesystem::path& out_root, std::uint64_t seed, std::ostream& log,
                std::ostream& err);

/// Individual commands; they throw on failure and return the summary.
nlohmann::ordered_json cmd_validate(const RunConfig& cfg, const std::filesystem::path& dir,
                                    std::uint64_t seed);
nlohmann::ordered_json cmd_compare_tec(const RunConfig& cfg, const std::filesystem::path& dir,
                                       std::uint64_t seed);
nlohmann::ordered_json cmd_scenarios(const RunConfig& cfg, const std::filesystem::path& dir,
                                     std::uint64_t seed);
nlohmann::ordered_json cmd_control(const RunConfig& cfg, const std::filesystem::path& dir,
                                   std::uint64_t seed);
nlohmann::ordered_json cmd_sweep_geometry(const RunConfig& cfg, const std::filesystem::path& dir,
                                          std::uint64_t seed, std::ostream& log);
nlohmann::ordered_json cmd_simulate(const RunConfig& cfg, const std::filesystem::path& dir,
                                    std::uint64_t seed);

}  // namespace spectherm::app
