#pragma once

// Row-oriented result tables and their CSV / JSON forms.

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace dualgeo {

inline constexpr const char* kToolkitVersion = "1.0.0";

struct ScanTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  /// Provenance: operation, parameters, grid, tolerances, version.
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();

  ScanTable() = default;
  ScanTable(std::string operation, std::vector<std::string> columns);

  void add_row(std::vector<double> row);
  /// Index of a column; throws ValidationError when absent.
  std::size_t column(std::string_view name) const;
};

/// Rectangular, unique column names, no NaN.
void validate_table(const ScanTable& table);

/// Header plus one line per row, 17 significant digits, LF endings.
std::string to_csv(const ScanTable& table);
/// {"meta":{...},"columns":[...],"rows":[[...]]}; infinities as "inf"/"-inf".
std::string to_json(const ScanTable& table);

ScanTable parse_csv(std::string_view text);
ScanTable parse_json(std::string_view text);

/// 17-significant-digit rendering used by both formats' text paths.
std::string format_number(double value);

}  // namespace dualgeo
