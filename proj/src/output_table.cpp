#include "markoff/output_table.hpp"

#include <cstdio>
#include <stdexcept>

#include <json.hpp>

namespace markoff {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void OutputTable::add_row(std::vector<Cell> row) {
  if (row.size() != columns_.size()) {
    throw std::invalid_argument("OutputTable::add_row: wrong number of cells");
  }
  rows_.push_back(std::move(row));
}

namespace {

std::string cell_to_string(const Cell& c) {
  if (const auto* u = std::get_if<u64>(&c)) return std::to_string(*u);
  if (const auto* i = std::get_if<i64>(&c)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
  return std::get<std::string>(c);
}

nlohmann::json cell_to_json(const Cell& c) {
  if (const auto* u = std::get_if<u64>(&c)) return *u;
  if (const auto* i = std::get_if<i64>(&c)) return *i;
  if (const auto* d = std::get_if<double>(&c)) {
    // Round-trip through the fixed CSV rendering so both formats agree.
    return std::strtod(format_double(*d).c_str(), nullptr);
  }
  return std::get<std::string>(c);
}

}  // namespace

std::string OutputTable::to_csv() const {
  std::string out;
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (i) out += ',';
    out += columns_[i];
  }
  out += '\n';
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += cell_to_string(row[i]);
    }
    out += '\n';
  }
  return out;
}

std::string OutputTable::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& row : rows_) {
    nlohmann::json obj;
    for (std::size_t i = 0; i < row.size(); ++i) obj[columns_[i]] = cell_to_json(row[i]);
    arr.push_back(std::move(obj));
  }
  return arr.dump(2) + "\n";
}

std::string OutputTable::render(const std::string& format) const {
  if (format == "csv") return to_csv();
  if (format == "json") return to_json();
  throw std::invalid_argument("unknown output format '" + format + "'");
}

std::string join_sizes(const std::vector<u64>& sizes) {
  std::string out;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(sizes[i]);
  }
  return out;
}

}  // namespace markoff
