#pragma once

#include <string>
#include <variant>
#include <vector>

#include "markoff/arith.hpp"

// Tabular output shared by the CLI commands.  CSV is the primary format;
// JSON mirrors the same rows as an array of objects.  Floats are rendered
// with 12 significant digits so identical configurations produce
// byte-identical files.

namespace markoff {

/// 12-significant-digit rendering used for every floating-point cell.
std::string format_double(double v);

using Cell = std::variant<u64, i64, double, std::string>;

class OutputTable {
 public:
  explicit OutputTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  void add_row(std::vector<Cell> row);
  const std::vector<std::vector<Cell>>& rows() const { return rows_; }
  const std::vector<std::string>& columns() const { return columns_; }

  std::string to_csv() const;
  std::string to_json() const;

  /// to_csv or to_json depending on format ("csv" | "json").
  std::string render(const std::string& format) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

/// "4 6 16" style rendering of a size multiset.
std::string join_sizes(const std::vector<u64>& sizes);

}  // namespace markoff
