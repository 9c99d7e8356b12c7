#include "spectherm/app/config.hpp"

#include <cstdio>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include "spectherm/errors.hpp"

namespace spectherm::app {

namespace {

using nlohmann::json;

/// Locates keys in the raw document so diagnostics can name a line.
class LineIndex {
 public:
  explicit LineIndex(const std::string& text) : text_(text) {}

  int line_of_offset(std::size_t pos) const {
    pos = std::min(pos, text_.size());
    return 1 + static_cast<int>(std::count(text_.begin(), text_.begin() + static_cast<long>(pos), '\n'));
  }

  /// Line of the first `"key":` at or after the line of the parent key.
  int line_of_key(const std::string& key, int from_line = 1) const {
    const std::regex re("\"" + escape(key) + "\"\\s*:");
    auto begin = text_.cbegin();
    for (int l = 1; l < from_line && begin != text_.cend(); ++begin) {
      if (*begin == '\n') ++l;
    }
    std::smatch m;
    if (std::regex_search(begin, text_.cend(), m, re)) {
      return line_of_offset(static_cast<std::size_t>(m.position(0) + (begin - text_.cbegin())));
    }
    return from_line;
  }

 private:
  static std::string escape(const std::string& s) {
    static const std::regex special(R"([.^$|()\[\]{}*+?\\])");
    return std::regex_replace(s, special, R"(\$&)");
  }
  const std::string& text_;
};

/// One JSON object being read; every consumed key is ticked off so the
/// remainder can be rejected.
class Section {
 public:
  Section(const json& j, std::string path, int line, const LineIndex& idx)
      : j_(j), path_(std::move(path)), line_(line), idx_(idx) {
    if (!j_.is_object()) fail(path_ + " must be an object", line_);
  }

  [[noreturn]] void fail(const std::string& msg, int line) const { throw ConfigError(msg, line); }

  int key_line(const std::string& key) const { return idx_.line_of_key(key, line_); }
  std::string name(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  bool has(const std::string& key) const { return j_.contains(key); }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }

  void number(const std::string& key, double& out, bool positive = false) {
    if (!has(key)) return;
    const json& v = raw(key);
    if (!v.is_number()) fail(name(key) + " must be a number", key_line(key));
    out = v.get<double>();
    if (!std::isfinite(out)) fail(name(key) + " must be finite", key_line(key));
    if (positive && !(out > 0.0)) fail(name(key) + " must be positive", key_line(key));
  }

  void integer(const std::string& key, int& out, int min_value) {
    if (!has(key)) return;
    const json& v = raw(key);
    if (!v.is_number_integer()) fail(name(key) + " must be an integer", key_line(key));
    const auto x = v.get<long long>();
    if (x < min_value || x > 1000000) fail(name(key) + " is out of range", key_line(key));
    out = static_cast<int>(x);
  }

  void text(const std::string& key, std::string& out) {
    if (!has(key)) return;
    const json& v = raw(key);
    if (!v.is_string()) fail(name(key) + " must be a string", key_line(key));
    out = v.get<std::string>();
  }

  void numbers(const std::string& key, std::vector<double>& out, bool positive) {
    if (!has(key)) return;
    const json& v = raw(key);
    if (!v.is_array() || v.empty()) fail(name(key) + " must be a non-empty array", key_line(key));
    out.clear();
    for (const json& x : v) {
      if (!x.is_number()) fail(name(key) + " must hold numbers", key_line(key));
      const double d = x.get<double>();
      if (!std::isfinite(d) || (positive && !(d > 0.0))) {
        fail(name(key) + " holds an invalid value", key_line(key));
      }
      out.push_back(d);
    }
  }

  Section child(const std::string& key) { return Section(raw(key), name(key), key_line(key), idx_); }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) fail("unknown key " + name(it.key()), key_line(it.key()));
    }
  }

  int line() const { return line_; }

 private:
  const json& j_;
  std::string path_;
  int line_;
  const LineIndex& idx_;
  std::set<std::string> seen_;
};

Scenario scenario_from(Section& s, const std::string& key, const json& v) {
  if (!v.is_string()) s.fail(s.name(key) + " must hold scenario names", s.key_line(key));
  const auto sc = parse_scenario(v.get<std::string>());
  if (!sc) s.fail("unknown scenario '" + v.get<std::string>() + "'", s.key_line(key));
  return *sc;
}

void scenario_list(Section& s, const std::string& key, std::vector<Scenario>& out) {
  if (!s.has(key)) return;
  const json& v = s.raw(key);
  if (!v.is_array() || v.empty()) s.fail(s.name(key) + " must be a non-empty array", s.key_line(key));
  out.clear();
  for (const json& x : v) out.push_back(scenario_from(s, key, x));
}

void read_cell(Section s, CellSpec& cell) {
  std::string preset, shape;
  s.text("preset", preset);
  if (!preset.empty()) {
    if (preset != "lfp_cylinder") s.fail("unknown cell preset '" + preset + "'", s.key_line("preset"));
    cell = lfp_cylinder();
  }
  s.text("shape", shape);
  if (shape == "cylindrical") {
    cell.shape = Shape::Cylindrical;
  } else if (shape == "pouch") {
    cell.shape = Shape::Pouch;
  } else if (!shape.empty()) {
    s.fail("cell.shape must be 'cylindrical' or 'pouch'", s.key_line("shape"));
  }
  s.number("L", cell.L);
  s.number("R_out", cell.R_out);
  s.number("R_in", cell.R_in);
  s.number("D", cell.D);
  s.number("rho", cell.rho);
  s.number("cp", cell.cp);
  s.number("k_r", cell.k_r);
  s.number("k_z", cell.k_z);
  s.finish();
  if (cell.shape == Shape::Pouch) {
    cell.R_out = 0.0;
    cell.R_in = 0.0;
  }
  try {
    cell.validate();
  } catch (const std::invalid_argument& e) {
    s.fail(e.what(), s.line());
  }
}

void read_cooling(Section s, Shape shape, CoolingConfig& cooling) {
  cooling = CoolingConfig{};
  cooling.scenario_name = "custom";
  s.text("name", cooling.scenario_name);
  for (Side side : kAllSides) {
    const std::string key(side_name(side, shape));
    if (!s.has(key)) continue;
    Section c = s.child(key);
    c.number("h", cooling[side].h);
    c.number("T_inf", cooling[side].T_inf);
    c.finish();
  }
  s.finish();
  try {
    cooling.validate(shape);
  } catch (const std::invalid_argument& e) {
    s.fail(e.what(), s.line());
  }
}

void read_profile(Section s, SyntheticProfile& p) {
  std::string kind;
  s.text("kind", kind);
  if (kind == "ConstantQ") {
    p.kind = ProfileKind::ConstantQ;
  } else if (kind == "PulseTrain") {
    p.kind = ProfileKind::PulseTrain;
  } else if (kind == "ScaledRandomDrive") {
    p.kind = ProfileKind::ScaledRandomDrive;
  } else if (kind == "File") {
    p.kind = ProfileKind::File;
  } else if (!kind.empty()) {
    s.fail("unknown profile kind '" + kind + "'", s.key_line("kind"));
  }
  s.number("amplitude", p.amplitude);
  s.number("period", p.period, true);
  s.number("duty", p.duty);
  s.number("base", p.base);
  s.number("current_rms", p.current_rms);
  s.number("resistance", p.resistance);
  s.number("segment", p.segment, true);
  s.number("tau", p.tau, true);
  s.number("scale", p.scale);
  s.text("path", p.path);
  s.finish();
  if (p.duty < 0.0 || p.duty > 1.0) s.fail("profile.duty must lie in [0, 1]", s.key_line("duty"));
  if (p.kind == ProfileKind::File && p.path.empty()) {
    s.fail("profile.path is required for kind File", s.line());
  }
}

void read_fd(Section s, FdConfig& fd) {
  s.integer("n_r", fd.n_r, 3);
  s.integer("n_z", fd.n_z, 3);
  s.number("dt", fd.dt, true);
  std::string scheme;
  s.text("scheme", scheme);
  if (scheme == "CN") {
    fd.scheme = FdScheme::CrankNicolson;
  } else if (scheme == "BE") {
    fd.scheme = FdScheme::BackwardEuler;
  } else if (!scheme.empty()) {
    s.fail("fd.scheme must be 'CN' or 'BE'", s.key_line("scheme"));
  }
  s.finish();
}

void read_tec(Section s, TecModel& tec) {
  s.number("C_c", tec.C_c, true);
  s.number("C_s", tec.C_s, true);
  s.number("R_c", tec.R_c, true);
  s.number("R_u", tec.R_u, true);
  s.number("T_inf", tec.T_inf);
  s.finish();
}

void read_control(Section s, ControlSection& c) {
  s.number("setpoint", c.setpoint);
  s.number("kp", c.kp);
  s.number("ki", c.ki);
  s.number("lo", c.lo);
  s.number("hi", c.hi);
  s.numbers("c_rates", c.c_rates, true);
  s.integer("plant_order", c.plant_order, 0);
  s.integer("estimator_order", c.estimator_order, 1);
  scenario_list(s, "scenarios", c.scenarios);
  s.finish();
  if (!(c.lo <= c.hi)) s.fail("control.lo must not exceed control.hi", s.line());
}

void read_sweep(Section s, SweepSection& w) {
  s.numbers("ratios", w.ratios, true);
  s.integer("order", w.order, 1);
  scenario_list(s, "scenarios", w.scenarios);
  s.finish();
}

void check_order(Section& s, const std::string& key, int order) {
  const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(order))));
  if (order < 1 || side * side != order) {
    s.fail("model order " + std::to_string(order) + " is not a positive perfect square",
           s.key_line(key));
  }
}

std::string scheme_name(FdScheme s) { return s == FdScheme::CrankNicolson ? "CN" : "BE"; }

}  // namespace

std::string_view profile_kind_name(ProfileKind k) {
  switch (k) {
    case ProfileKind::ConstantQ:
      return "ConstantQ";
    case ProfileKind::PulseTrain:
      return "PulseTrain";
    case ProfileKind::ScaledRandomDrive:
      return "ScaledRandomDrive";
    case ProfileKind::File:
      return "File";
  }
  return "?";
}

RunConfig parse_config(const std::string& text) {
  const LineIndex idx(text);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what(),
                      idx.line_of_offset(e.byte > 0 ? e.byte - 1 : 0));
  }
  Section root(doc, "", 1, idx);
  RunConfig cfg;

  if (!root.has("schema_version")) root.fail("schema_version is required", 1);
  int version = 0;
  root.integer("schema_version", version, 0);
  if (version != kSchemaVersion) {
    root.fail("unsupported schema_version " + std::to_string(version),
              root.key_line("schema_version"));
  }
  if (root.has("cell")) read_cell(root.child("cell"), cfg.cell);
  if (root.has("scenario") && root.has("scenarios")) {
    root.fail("give either scenario or scenarios", root.key_line("scenarios"));
  }
  if (root.has("scenario")) {
    cfg.scenarios = {scenario_from(root, "scenario", root.raw("scenario"))};
  }
  scenario_list(root, "scenarios", cfg.scenarios);
  if (root.has("cooling")) {
    CoolingConfig c;
    read_cooling(root.child("cooling"), cfg.cell.shape, c);
    cfg.cooling = c;
  }
  if (root.has("orders")) {
    const json& v = root.raw("orders");
    if (!v.is_array() || v.empty()) root.fail("orders must be a non-empty array", root.key_line("orders"));
    cfg.orders.clear();
    for (const json& x : v) {
      if (!x.is_number_integer()) root.fail("orders must hold integers", root.key_line("orders"));
      const auto o = x.get<long long>();
      if (o < 1 || o > 10000) root.fail("model order out of range", root.key_line("orders"));
      cfg.orders.push_back(static_cast<int>(o));
      check_order(root, "orders", cfg.orders.back());
    }
  }
  root.number("dt", cfg.dt, true);
  root.number("horizon", cfg.horizon);
  if (cfg.horizon < 0.0) root.fail("horizon must be non-negative", root.key_line("horizon"));
  root.number("T_init", cfg.T_init);
  if (root.has("profile")) read_profile(root.child("profile"), cfg.profile);
  root.text("output_dir", cfg.output_dir);
  if (root.has("seed")) {
    const json& v = root.raw("seed");
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
      root.fail("seed must be a non-negative integer", root.key_line("seed"));
    }
    cfg.seed = v.get<std::uint64_t>();
  }
  if (root.has("fd")) read_fd(root.child("fd"), cfg.fd);
  if (root.has("tec")) read_tec(root.child("tec"), cfg.tec);
  if (root.has("control")) read_control(root.child("control"), cfg.control);
  if (root.has("sweep")) read_sweep(root.child("sweep"), cfg.sweep);
  if (root.has("timing")) {
    Section t = root.child("timing");
    t.integer("repetitions", cfg.timing_repetitions, 3);
    t.finish();
  }
  root.finish();

  if (cfg.control.plant_order != 0) check_order(root, "plant_order", cfg.control.plant_order);
  check_order(root, "estimator_order", cfg.control.estimator_order);
  check_order(root, "order", cfg.sweep.order);
  try {
    cfg.fd.validate();
  } catch (const std::invalid_argument& e) {
    root.fail(e.what(), root.key_line("fd"));
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

nlohmann::ordered_json RunConfig::to_json() const {
  nlohmann::ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["cell"] = {{"shape", cell.shape == Shape::Cylindrical ? "cylindrical" : "pouch"},
               {"L", cell.L},     {"R_out", cell.R_out}, {"R_in", cell.R_in},
               {"D", cell.D},     {"rho", cell.rho},     {"cp", cell.cp},
               {"k_r", cell.k_r}, {"k_z", cell.k_z}};
  auto& sc = j["scenarios"] = nlohmann::ordered_json::array();
  for (Scenario s : scenarios) sc.push_back(std::string(scenario_name(s)));
  if (cooling) {
    auto& c = j["cooling"];
    c["name"] = cooling->scenario_name;
    for (Side side : kAllSides) {
      c[std::string(side_name(side, cell.shape))] = {{"h", (*cooling)[side].h},
                                                     {"T_inf", (*cooling)[side].T_inf}};
    }
  }
  j["orders"] = orders;
  j["dt"] = dt;
  j["horizon"] = horizon;
  j["T_init"] = T_init;
  j["profile"] = {{"kind", std::string(profile_kind_name(profile.kind))},
                  {"amplitude", profile.amplitude},
                  {"period", profile.period},
                  {"duty", profile.duty},
                  {"base", profile.base},
                  {"current_rms", profile.current_rms},
                  {"resistance", profile.resistance},
                  {"segment", profile.segment},
                  {"tau", profile.tau},
                  {"scale", profile.scale},
                  {"path", profile.path}};
  j["seed"] = seed;
  j["fd"] = {{"n_r", fd.n_r}, {"n_z", fd.n_z}, {"dt", fd.dt}, {"scheme", scheme_name(fd.scheme)}};
  j["tec"] = {{"C_c", tec.C_c}, {"C_s", tec.C_s}, {"R_c", tec.R_c}, {"R_u", tec.R_u},
              {"T_inf", tec.T_inf}};
  j["control"] = {{"setpoint", control.setpoint},       {"kp", control.kp},
                  {"ki", control.ki},                   {"lo", control.lo},
                  {"hi", control.hi},                   {"c_rates", control.c_rates},
                  {"plant_order", control.plant_order}, {"estimator_order", control.estimator_order}};
  j["sweep"] = {{"ratios", sweep.ratios}, {"order", sweep.order}};
  auto names = [](const std::vector<Scenario>& v) {
    auto a = nlohmann::ordered_json::array();
    for (Scenario s : v) a.push_back(std::string(scenario_name(s)));
    return a;
  };
  j["control"]["scenarios"] = names(control.scenarios);
  j["sweep"]["scenarios"] = names(sweep.scenarios);
  j["timing"] = {{"repetitions", timing_repetitions}};
  return j;
}

CoolingConfig RunConfig::cooling_for(Scenario s) const {
  if (cooling && !scenarios.empty() && s == scenarios.front()) return *cooling;
  return make_cooling(s, cell.shape, T_init);
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string config_hash(const RunConfig& cfg) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(cfg.to_json().dump())));
  return buf;
}

}  // namespace spectherm::app
