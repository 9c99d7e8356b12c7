#include "spectherm/app/output.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace spectherm::app {

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {
  if (header_.empty()) throw std::invalid_argument("CsvTable: empty header");
}

void CsvTable::add(const std::vector<double>& row) {
  if (row.size() != header_.size()) throw std::invalid_argument("CsvTable: row width mismatch");
  std::string line;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) line += ',';
    line += format_number(row[i]);
  }
  rows_.push_back(std::move(line));
}

void CsvTable::add(const std::string& label, const std::vector<double>& row) {
  add(std::vector<std::string>{label}, row);
}

void CsvTable::add(const std::vector<std::string>& labels, const std::vector<double>& row) {
  if (labels.empty() || row.size() + labels.size() != header_.size()) {
    throw std::invalid_argument("CsvTable: row width mismatch");
  }
  std::string line = labels.front();
  for (std::size_t i = 1; i < labels.size(); ++i) {
    line += ',';
    line += labels[i];
  }
  for (double v : row) {
    line += ',';
    line += format_number(v);
  }
  rows_.push_back(std::move(line));
}

std::string CsvTable::str() const {
  std::string out;
  for (std::size_t i = 0; i < header_.size(); ++i) {
    if (i) out += ',';
    out += header_[i];
  }
  out += '\n';
  for (const auto& r : rows_) {
    out += r;
    out += '\n';
  }
  return out;
}

void CsvTable::write(const std::filesystem::path& path) const { write_text(path, str()); }

void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& j) {
  write_text(path, j.dump(2) + "\n");
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

}  // namespace spectherm::app
