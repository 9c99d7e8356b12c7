#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "spectherm/app/profiles.hpp"
#include "spectherm/errors.hpp"

namespace spectherm::app {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<double> parse_row(const std::string& line, std::size_t columns, int line_no) {
  std::vector<double> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    const std::string t = trim(cell);
    if (t.empty()) throw ConfigError("empty field", line_no);
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size() || errno == ERANGE || !std::isfinite(v)) {
      throw ConfigError("malformed number '" + t + "'", line_no);
    }
    out.push_back(v);
  }
  if (!line.empty() && line.back() == ',') throw ConfigError("trailing comma", line_no);
  if (out.size() != columns) {
    throw ConfigError("expected " + std::to_string(columns) + " fields, found " +
                          std::to_string(out.size()),
                      line_no);
  }
  return out;
}

void put(std::ostream& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out << buf;
}

}  // namespace

HeatProfile parse_drive_cycle(std::istream& in) {
  std::string line;
  int line_no = 0;
  std::string header;
  while (std::getline(in, line)) {
    ++line_no;
    header = trim(line);
    if (!header.empty()) break;
  }
  if (header.empty()) throw ConfigError("drive cycle is empty");
  const int header_line = line_no;
  bool electrical = false;
  if (header == "t_s,I_A,V_V,Vocv_V") {
    electrical = true;
  } else if (header != "t_s,q_Wm3") {
    throw ConfigError("unrecognised drive-cycle header '" + header + "'", header_line);
  }
  const std::size_t columns = electrical ? 4 : 2;

  std::vector<double> times, q;
  std::vector<HeatProfile::ElectricalSample> iv;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto row = parse_row(t, columns, line_no);
    if (times.empty() && row[0] != 0.0) throw ConfigError("first sample must be at t = 0", line_no);
    if (!times.empty() && !(row[0] > times.back())) {
      throw ConfigError("time column is not strictly increasing", line_no);
    }
    times.push_back(row[0]);
    if (electrical) {
      iv.push_back({row[1], row[2], row[3]});
    } else {
      q.push_back(row[1]);
    }
  }
  if (times.empty()) throw ConfigError("drive cycle has no samples", header_line);
  return electrical ? HeatProfile::electrical(std::move(times), std::move(iv))
                    : HeatProfile::volumetric(std::move(times), std::move(q));
}

HeatProfile ingest_drive_cycle(const std::string& path, double cell_volume) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open drive cycle '" + path + "'");
  return parse_drive_cycle(in).to_volumetric(cell_volume);
}

void write_drive_cycle(std::ostream& out, const HeatProfile& profile) {
  const bool electrical = profile.kind() == HeatProfile::Kind::ElectricalIVO;
  out << (electrical ? "t_s,I_A,V_V,Vocv_V\n" : "t_s,q_Wm3\n");
  for (std::size_t k = 0; k < profile.size(); ++k) {
    put(out, profile.times()[k]);
    if (electrical) {
      const auto& s = profile.electrical_samples()[k];
      for (double v : {s.current, s.voltage, s.v_ocv}) {
        out << ',';
        put(out, v);
      }
    } else {
      out << ',';
      put(out, profile.q()[k]);
    }
    out << '\n';
  }
}

}  // namespace spectherm::app
