#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace spectherm::app {

inline constexpr const char* kVersion = "1.0.0";

/// Column-oriented CSV table; numbers are written with round-trip precision.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  /// Appends a row of numbers; the width must match the header.
  void add(const std::vector<double>& row);
  /// Appends a row with a leading text column followed by numbers.
  void add(const std::string& label, const std::vector<double>& row);
  /// Appends a row with leading text columns followed by numbers.
  void add(const std::vector<std::string>& labels, const std::vector<double>& row);

  std::size_t rows() const { return rows_.size(); }
  std::string str() const;
  void write(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::string> rows_;
};

std::string format_number(double v);

/// Writes JSON with two-space indentation and a trailing newline.
void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& j);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace spectherm::app
