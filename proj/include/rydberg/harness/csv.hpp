#pragma once

// CSV tables with a `# key = value` metadata preamble.  Numbers are written
// in shortest round-trip form, so read(write(t)) == t bit for bit.

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "rydberg/errors.hpp"
#include "rydberg/scan_table.hpp"

namespace rydberg::harness {

/// Shortest decimal string that parses back to exactly `x`.
inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x < 0.0 ? "-inf" : "inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

/// Parses a whole field as a double; nullopt-like failure reported by bool.
inline bool parse_double(std::string_view s, double& out) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (s.empty()) return false;
  if (s == "inf" || s == "+inf") {
    out = std::numeric_limits<double>::infinity();
    return true;
  }
  if (s == "-inf") {
    out = -std::numeric_limits<double>::infinity();
    return true;
  }
  if (s == "nan") {
    out = std::numeric_limits<double>::quiet_NaN();
    return true;
  }
  if (s.front() == '+') s.remove_prefix(1);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

namespace detail {

inline std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '\\') out += "\\\\";
    else if (c == '\n') out += "\\n";
    else if (c == '\r') out += "\\r";
    else out += c;
  }
  return out;
}

inline std::string unescape(std::string_view s, std::size_t line) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '\\') {
      out += s[i];
      continue;
    }
    if (++i == s.size()) throw ParseError(line, "dangling escape in metadata");
    switch (s[i]) {
      case '\\': out += '\\'; break;
      case 'n': out += '\n'; break;
      case 'r': out += '\r'; break;
      default: throw ParseError(line, "unknown escape in metadata");
    }
  }
  return out;
}

inline std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace detail

inline void write_table(const ScanTable& table, std::ostream& out) {
  for (const auto& [k, v] : table.metadata()) {
    if (k.find('=') != std::string::npos || k.find('\n') != std::string::npos || detail::trim(k) != k ||
        k.empty())
      throw InvalidInput("metadata key '" + k + "' cannot be written");
    out << "# " << k << " = " << detail::escape(v) << '\n';
  }
  const auto& cols = table.columns();
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (cols[c].find(',') != std::string::npos || cols[c].empty() || cols[c].front() == '#')
      throw InvalidInput("column name '" + cols[c] + "' cannot be written");
    out << (c ? "," : "") << cols[c];
  }
  out << '\n';
  for (const auto& row : table.rows()) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_double(row[c]);
    out << '\n';
  }
}

inline std::string to_csv(const ScanTable& table) {
  std::ostringstream s;
  write_table(table, s);
  return s.str();
}

inline void write_table(const ScanTable& table, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidInput("cannot open '" + path + "' for writing");
  write_table(table, f);
  if (!f) throw InvalidInput("failed writing '" + path + "'");
}

inline ScanTable read_table(std::istream& in) {
  std::string line;
  std::size_t n = 0;
  ScanTable::Metadata meta;
  std::vector<std::string> columns;
  while (std::getline(in, line)) {
    ++n;
    std::string_view v = line;
    if (!v.empty() && v.back() == '\r') v.remove_suffix(1);
    if (!v.empty() && v.front() == '#') {
      v.remove_prefix(1);
      const std::size_t eq = v.find(" = ");
      if (eq == std::string_view::npos) {
        // Free-form comment line.
        continue;
      }
      meta.emplace_back(std::string(detail::trim(v.substr(0, eq))), detail::unescape(v.substr(eq + 3), n));
      continue;
    }
    if (detail::trim(v).empty()) continue;
    // First non-comment line is the header; a numeric first field means it
    // is missing.
    double probe = 0.0;
    const auto fields = detail::split(v, ',');
    if (parse_double(fields.front(), probe)) throw ParseError(n, "missing header row");
    for (auto f : fields) {
      const auto name = detail::trim(f);
      if (name.empty()) throw ParseError(n, "empty column name");
      columns.emplace_back(name);
    }
    break;
  }
  if (columns.empty()) throw ParseError(n == 0 ? 1 : n, "missing header row");

  ScanTable table(columns);
  for (const auto& [k, val] : meta) table.set_meta(k, val);
  while (std::getline(in, line)) {
    ++n;
    std::string_view v = line;
    if (!v.empty() && v.back() == '\r') v.remove_suffix(1);
    if (detail::trim(v).empty() || v.front() == '#') continue;
    const auto fields = detail::split(v, ',');
    if (fields.size() != columns.size())
      throw ParseError(n, "expected " + std::to_string(columns.size()) + " fields, found " +
                              std::to_string(fields.size()));
    ScanTable::Row row(fields.size());
    for (std::size_t c = 0; c < fields.size(); ++c)
      if (!parse_double(fields[c], row[c]))
        throw ParseError(n, "field " + std::to_string(c + 1) + " is not a number: '" + std::string(fields[c]) +
                                "'");
    table.add_row(std::move(row));
  }
  return table;
}

inline ScanTable read_table(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InvalidInput("cannot open '" + path + "'");
  return read_table(f);
}

inline ScanTable from_csv(const std::string& text) {
  std::istringstream s(text);
  return read_table(s);
}

}  // namespace rydberg::harness
