#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "rotalign/errors.hpp"

namespace rotalign {

/// Column-oriented numeric table with '#'-prefixed metadata for CSV output.
struct Table {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> data; // one vector per column

  void meta(std::string key, std::string value) { metadata.emplace_back(std::move(key), std::move(value)); }

  void add_column(std::string name, std::vector<double> values) {
    if (!data.empty() && values.size() != data.front().size())
      throw validation_error("Table: column '" + name + "' has the wrong length");
    columns.push_back(std::move(name));
    data.push_back(std::move(values));
  }

  std::size_t rows() const { return data.empty() ? 0 : data.front().size(); }

  /// NaN or Inf anywhere is a hard failure.
  void require_finite() const {
    for (std::size_t c = 0; c < data.size(); ++c)
      for (double v : data[c])
        if (!std::isfinite(v))
          throw convergence_error("output column '" + columns[c] + "' contains a non-finite value");
  }
};

inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline void write_csv(std::ostream &out, const Table &t) {
  t.require_finite();
  for (const auto &[k, v] : t.metadata)
    out << "# " << k << " = " << v << '\n';
  for (std::size_t c = 0; c < t.columns.size(); ++c)
    out << (c ? "," : "") << t.columns[c];
  out << '\n';
  for (std::size_t r = 0; r < t.rows(); ++r) {
    for (std::size_t c = 0; c < t.columns.size(); ++c)
      out << (c ? "," : "") << format_number(t.data[c][r]);
    out << '\n';
  }
}

inline void write_json(std::ostream &out, const Table &t) {
  t.require_finite();
  nlohmann::ordered_json j;
  j["metadata"] = nlohmann::ordered_json::object();
  for (const auto &[k, v] : t.metadata)
    j["metadata"][k] = v;
  j["columns"] = t.columns;
  j["data"] = nlohmann::ordered_json::object();
  for (std::size_t c = 0; c < t.columns.size(); ++c)
    j["data"][t.columns[c]] = t.data[c];
  out << j.dump(2) << '\n';
}

} // namespace rotalign
