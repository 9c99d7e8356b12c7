#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "spectherm/app/commands.hpp"
#include "spectherm/app/config.hpp"
#include "spectherm/errors.hpp"

namespace {

std::vector<int> parse_orders(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      throw spectherm::ConfigError("--orders: '" + item + "' is not an integer");
    }
    if (used != item.size()) throw spectherm::ConfigError("--orders: '" + item + "' is not an integer");
    const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(v))));
    if (v < 1 || side * side != v) {
      throw spectherm::ConfigError("--orders: " + item + " is not a positive perfect square");
    }
    out.push_back(v);
  }
  if (out.empty()) throw spectherm::ConfigError("--orders: empty list");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace spectherm::app;
  CLI::App app{"Spectral-Galerkin thermal model of battery cells"};
  app.require_subcommand(1);

  std::string config_path, out_dir, orders;
  std::optional<std::uint64_t> seed;
  for (const std::string& name : command_names()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON run configuration");
    sub->add_option("--out", out_dir, "output directory (default: config output_dir)");
    sub->add_option("--seed", seed, "seed for synthetic profiles");
    sub->add_option("--orders", orders, "comma-separated model orders, e.g. 1,4,9");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = load_config(config_path);
    if (!orders.empty()) cfg.orders = parse_orders(orders);
  } catch (const spectherm::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  if (seed) cfg.seed = *seed;
  const std::string out = out_dir.empty() ? cfg.output_dir : out_dir;
  return run_command(command, cfg, out, cfg.seed, std::cout, std::cerr);
}
