#include "dualgeo/scan_io.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <set>

#include "dualgeo/error.hpp"

namespace dualgeo {

using json = nlohmann::ordered_json;

namespace {

double parse_number(std::string_view token) {
  if (token == "inf") return std::numeric_limits<double>::infinity();
  if (token == "-inf") return -std::numeric_limits<double>::infinity();
  double value = 0.0;
  const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || end != token.data() + token.size()) {
    throw ValidationError("table", "unparseable number '" + std::string(token) + "'");
  }
  return value;
}

std::vector<std::string_view> split_line(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    cells.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

bool needs_quotes(std::string_view s) {
  return s.find_first_of(",\"\n\r") != std::string_view::npos;
}

std::string quote(std::string_view s) {
  if (!needs_quotes(s)) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

ScanTable::ScanTable(std::string operation, std::vector<std::string> cols)
    : columns(std::move(cols)) {
  meta["operation"] = std::move(operation);
  meta["version"] = kToolkitVersion;
}

void ScanTable::add_row(std::vector<double> row) {
  require(row.size() == columns.size(), "table", "row width differs from column count");
  rows.push_back(std::move(row));
}

std::size_t ScanTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return i;
  throw ValidationError("table", "no column named '" + std::string(name) + "'");
}

void validate_table(const ScanTable& table) {
  std::set<std::string> seen;
  for (const std::string& c : table.columns)
    require(seen.insert(c).second, "table", "column names must be unique");
  for (const auto& row : table.rows) {
    require(row.size() == table.columns.size(), "table", "table is not rectangular");
    for (double v : row) require(!std::isnan(v), "table", "NaN value");
  }
}

std::string format_number(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[64];
  const auto [end, ec] =
      std::to_chars(buffer, buffer + sizeof buffer, value, std::chars_format::general, 17);
  (void)ec;
  return std::string(buffer, end);
}

std::string to_csv(const ScanTable& table) {
  validate_table(table);
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out += ',';
    out += quote(table.columns[i]);
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_number(row[i]);
    }
    out += '\n';
  }
  return out;
}

std::string to_json(const ScanTable& table) {
  validate_table(table);
  json doc;
  doc["meta"] = table.meta;
  doc["columns"] = table.columns;
  json rows = json::array();
  for (const auto& row : table.rows) {
    json r = json::array();
    for (double v : row) {
      if (std::isinf(v))
        r.push_back(v > 0 ? "inf" : "-inf");
      else
        r.push_back(v);
    }
    rows.push_back(std::move(r));
  }
  doc["rows"] = std::move(rows);
  return doc.dump(2) + "\n";
}

ScanTable parse_csv(std::string_view text) {
  ScanTable table;
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    const std::size_t nl = text.find('\n', start);
    lines.push_back(text.substr(start, nl - start));
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  require(!lines.empty(), "table", "missing header line");
  // Header cells may be quoted; values never are.
  std::string_view header = lines.front();
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < header.size(); ++i) {
    const char c = header[i];
    if (quoted) {
      if (c == '"' && i + 1 < header.size() && header[i + 1] == '"') {
        cell += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cell += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      table.columns.push_back(std::move(cell));
      cell.clear();
    } else {
      cell += c;
    }
  }
  if (!header.empty()) table.columns.push_back(std::move(cell));
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::vector<double> row;
    for (std::string_view token : split_line(lines[i])) row.push_back(parse_number(token));
    require(row.size() == table.columns.size(), "table", "table is not rectangular");
    table.rows.push_back(std::move(row));
  }
  validate_table(table);
  return table;
}

ScanTable parse_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError("table", std::string("malformed JSON: ") + e.what());
  }
  require(doc.is_object() && doc.contains("columns") && doc.contains("rows"), "table",
          "expected an object with columns and rows");
  ScanTable table;
  if (doc.contains("meta")) table.meta = doc["meta"];
  for (const auto& c : doc["columns"]) table.columns.push_back(c.get<std::string>());
  for (const auto& r : doc["rows"]) {
    std::vector<double> row;
    for (const auto& v : r) {
      if (v.is_string())
        row.push_back(parse_number(v.get<std::string>()));
      else
        row.push_back(v.get<double>());
    }
    table.rows.push_back(std::move(row));
  }
  validate_table(table);
  return table;
}

}  // namespace dualgeo
