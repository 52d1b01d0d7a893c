#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "gupchain/config.hpp"

namespace gupchain {

/// Empty cells are written as an empty CSV field or JSON null.
using Cell = std::variant<std::monostate, double, std::int64_t, std::string, bool>;

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row);
};

using Metadata = std::vector<std::pair<std::string, std::string>>;

/// CSV: `# key = value` metadata lines, then a header and rows per table;
/// later tables are introduced by a `# table = <name>` line.
/// JSON-lines: a {"metadata": {...}} object, then one object per row keyed by
/// the column names; rows of later tables carry a "table" key.
void write_results(std::ostream& out, OutputFormat format, const Metadata& metadata,
                   const std::vector<Table>& tables);

}  // namespace gupchain
