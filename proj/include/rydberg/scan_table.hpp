#pragma once

// Rectangular table of doubles with named columns and an ordered key/value
// metadata block.  Produced by every sweep; written and read by harness/csv.

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "rydberg/errors.hpp"

namespace rydberg {

class ScanTable {
 public:
  using Row = std::vector<double>;
  using Metadata = std::vector<std::pair<std::string, std::string>>;

  ScanTable() = default;
  explicit ScanTable(std::vector<std::string> columns) : columns_(std::move(columns)) {
    if (columns_.empty()) throw InvalidInput("a table needs at least one column");
  }

  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<Row>& rows() const { return rows_; }
  const Metadata& metadata() const { return metadata_; }
  std::size_t size() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }

  void add_row(Row row) {
    if (row.size() != columns_.size())
      throw InvalidInput("row has " + std::to_string(row.size()) + " values, table has " +
                         std::to_string(columns_.size()) + " columns");
    rows_.push_back(std::move(row));
  }

  /// Sets or replaces a metadata entry, keeping first-insertion order.
  void set_meta(const std::string& key, std::string value) {
    for (auto& [k, v] : metadata_)
      if (k == key) {
        v = std::move(value);
        return;
      }
    metadata_.emplace_back(key, std::move(value));
  }

  const std::string* meta(const std::string& key) const {
    for (const auto& [k, v] : metadata_)
      if (k == key) return &v;
    return nullptr;
  }

  std::size_t column_index(const std::string& name) const {
    const auto it = std::find(columns_.begin(), columns_.end(), name);
    if (it == columns_.end()) throw InvalidInput("no column named '" + name + "'");
    return static_cast<std::size_t>(it - columns_.begin());
  }

  std::vector<double> column(const std::string& name) const {
    const std::size_t c = column_index(name);
    std::vector<double> out;
    out.reserve(rows_.size());
    for (const Row& r : rows_) out.push_back(r[c]);
    return out;
  }

  double at(std::size_t row, const std::string& name) const { return rows_.at(row)[column_index(name)]; }

  friend bool operator==(const ScanTable&, const ScanTable&) = default;

 private:
  std::vector<std::string> columns_;
  std::vector<Row> rows_;
  Metadata metadata_;
};

}  // namespace rydberg
