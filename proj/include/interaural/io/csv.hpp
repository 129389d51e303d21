#pragma once

// CSV export: "# key=value" metadata lines, one header line, then
// comma-separated rows. Floats use 17 significant digits so that a written
// table reads back bit-for-bit.

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "interaural/grid.hpp"
#include "interaural/waveform.hpp"

namespace interaural::io {

/// Ordered metadata; written in insertion order.
using Metadata = std::vector<std::pair<std::string, std::string>>;

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct CsvTable {
  Metadata meta;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::string meta_value(const std::string& key) const {
    for (const auto& [k, v] : meta) {
      if (k == key) return v;
    }
    return {};
  }
};

inline void write_metadata(std::ostream& os, const Metadata& meta) {
  for (const auto& [k, v] : meta) os << "# " << k << '=' << v << '\n';
}

inline void write_table(std::ostream& os, const CsvTable& t) {
  write_metadata(os, t.meta);
  for (std::size_t i = 0; i < t.header.size(); ++i) os << (i ? "," : "") << t.header[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_double(row[i]);
    os << '\n';
  }
}

namespace detail {

// strtod rather than stod: subnormal densities must read back, not throw.
inline double parse_cell(const std::string& c) {
  char* end = nullptr;
  const double v = std::strtod(c.c_str(), &end);
  if (c.empty() || end != c.c_str() + c.size()) throw std::runtime_error("bad CSV number: '" + c + "'");
  return v;
}

}  // namespace detail

inline CsvTable read_table(std::istream& is) {
  CsvTable t;
  std::string line;
  bool have_header = false;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.rfind("# ", 0) == 0) {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      t.meta.emplace_back(line.substr(2, eq - 2), line.substr(eq + 1));
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!have_header) {
      t.header = std::move(cells);
      have_header = true;
      continue;
    }
    if (cells.size() != t.header.size()) throw std::runtime_error("CSV row width mismatch");
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) row.push_back(detail::parse_cell(c));
    t.rows.push_back(std::move(row));
  }
  if (!have_header) throw std::runtime_error("CSV has no header line");
  return t;
}

/// Long format: one row per grid node (axis1, axis2, density), axis2 fastest.
inline CsvTable grid_table(const PdfGrid& g, Metadata meta) {
  CsvTable t;
  t.meta = std::move(meta);
  t.meta.emplace_back("undefined_density", format_double(kUndefinedDensity));
  t.meta.emplace_back("rows", std::to_string(g.axis1.size()));
  t.meta.emplace_back("cols", std::to_string(g.axis2.size()));
  t.header = {g.axis1_name, g.axis2_name, "density"};
  t.rows.reserve(g.values.size());
  for (std::size_t i = 0; i < g.axis1.size(); ++i) {
    for (std::size_t j = 0; j < g.axis2.size(); ++j) t.rows.push_back({g.axis1[i], g.axis2[j], g.at(i, j)});
  }
  return t;
}

inline void write_grid_csv(std::ostream& os, const PdfGrid& g, const Metadata& meta = {}) {
  write_table(os, grid_table(g, meta));
}

inline PdfGrid read_grid_csv(std::istream& is, Metadata* meta_out = nullptr) {
  CsvTable t = read_table(is);
  if (t.header.size() != 3) throw std::runtime_error("grid CSV needs three columns");
  const std::size_t n1 = std::stoul(t.meta_value("rows"));
  const std::size_t n2 = std::stoul(t.meta_value("cols"));
  if (t.rows.size() != n1 * n2) throw std::runtime_error("grid CSV row count mismatch");
  PdfGrid g;
  g.axis1_name = t.header[0];
  g.axis2_name = t.header[1];
  for (std::size_t i = 0; i < n1; ++i) g.axis1.push_back(t.rows[i * n2][0]);
  for (std::size_t j = 0; j < n2; ++j) g.axis2.push_back(t.rows[j][1]);
  g.values.reserve(t.rows.size());
  for (const auto& r : t.rows) g.values.push_back(r[2]);
  if (meta_out) *meta_out = std::move(t.meta);
  return g;
}

/// Curves sharing one axis, one column per curve.
inline void write_curves_csv(std::ostream& os, const std::string& axis_name,
                             const std::vector<double>& axis, const std::vector<std::string>& names,
                             const std::vector<std::vector<double>>& columns, const Metadata& meta = {}) {
  if (names.size() != columns.size()) throw std::invalid_argument("one name per column");
  CsvTable t;
  t.meta = meta;
  t.header.push_back(axis_name);
  t.header.insert(t.header.end(), names.begin(), names.end());
  for (std::size_t i = 0; i < axis.size(); ++i) {
    std::vector<double> row{axis[i]};
    for (const auto& c : columns) {
      if (c.size() != axis.size()) throw std::invalid_argument("column length differs from axis");
      row.push_back(c[i]);
    }
    t.rows.push_back(std::move(row));
  }
  write_table(os, t);
}

inline void write_cue_trace_csv(std::ostream& os, const CueTrace& tr, const Metadata& meta = {}) {
  CsvTable t;
  t.meta = meta;
  t.header = {"time_s", "ipd_rad", "ild_db", "power_p"};
  t.rows.reserve(tr.size());
  for (std::size_t i = 0; i < tr.size(); ++i) {
    t.rows.push_back({tr.time_s[i], tr.ipd_rad[i], tr.ild_db[i], tr.power_p[i]});
  }
  write_table(os, t);
}

}  // namespace interaural::io
