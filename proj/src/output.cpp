#include "gupchain/output.hpp"

#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace gupchain {

namespace {

std::string quote(const std::string& s) { return nlohmann::json(s).dump(); }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string render(const Cell& cell, OutputFormat format) {
  return std::visit(
      [&](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return format == OutputFormat::csv ? "" : "null";
        } else if constexpr (std::is_same_v<T, double>) {
          if (!std::isfinite(v)) return format == OutputFormat::csv ? "nan" : "null";
          return format_double(v);
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(v);
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else {
          return format == OutputFormat::csv ? csv_field(v) : quote(v);
        }
      },
      cell);
}

}  // namespace

void Table::add(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw std::logic_error("row width does not match table " + name);
  rows.push_back(std::move(row));
}

void write_results(std::ostream& out, OutputFormat format, const Metadata& metadata,
                   const std::vector<Table>& tables) {
  if (format == OutputFormat::csv) {
    for (const auto& [key, value] : metadata) out << "# " << key << " = " << value << '\n';
    for (std::size_t t = 0; t < tables.size(); ++t) {
      const auto& table = tables[t];
      if (t > 0) out << "# table = " << table.name << '\n';
      for (std::size_t c = 0; c < table.columns.size(); ++c) out << (c ? "," : "") << table.columns[c];
      out << '\n';
      for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << render(row[c], format);
        out << '\n';
      }
    }
    return;
  }

  out << "{\"metadata\":{";
  for (std::size_t k = 0; k < metadata.size(); ++k) {
    out << (k ? "," : "") << quote(metadata[k].first) << ':' << quote(metadata[k].second);
  }
  out << "}}\n";
  for (std::size_t t = 0; t < tables.size(); ++t) {
    const auto& table = tables[t];
    for (const auto& row : table.rows) {
      out << '{';
      if (t > 0) out << "\"table\":" << quote(table.name) << ',';
      for (std::size_t c = 0; c < row.size(); ++c) {
        out << (c ? "," : "") << quote(table.columns[c]) << ':' << render(row[c], format);
      }
      out << "}\n";
    }
  }
}

}  // namespace gupchain
