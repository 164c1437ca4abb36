#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "sslab/field.hpp"

namespace sslab {

inline constexpr const char* kVersion = "0.3.0";

/// Rectangular table of text cells plus "# key: value" metadata.
/// Numbers are written with 12 significant digits; empty cells are allowed.
struct Table {
  std::vector<std::pair<std::string, std::string>> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void set(const std::string& key, const std::string& value);
  const std::string* get(const std::string& key) const;
  void add_row(std::vector<std::string> row);
  std::size_t column(const std::string& name) const;  // throws if absent
  double number(std::size_t row, const std::string& name) const;
};

std::string format_number(double v);
std::string format_number(long v);
std::string format_number(std::size_t v);
double parse_number(const std::string& s);

/// CSV layout:
///   # sslab <version>
///   # <key>: <value>        (one line per parameter)
///   col1,col2,...
///   v11,v12,...
void write_csv(std::ostream& os, const Table& t);
Table read_csv(std::istream& is);

/// JSON object {"version", "meta": {...}, "columns": [...], "rows": [[...]]};
/// numeric cells become numbers, empty cells null.
std::string to_json(const Table& t);
Table table_from_json(const std::string& text);

/// Binary grid:
///   8 bytes   magic "SSLGRID1"
///   uint64    nx, ny
///   float64   x_min, x_max, y_min, y_max
///   float64   values[ny][nx], x fastest
/// All integers and floats little-endian.
void write_grid(std::ostream& os, const Field2D& f);
Field2D read_grid(std::istream& is);

/// "start:end:step" (end inclusive), "start:end" (step 1) or a single value.
std::vector<double> parse_grid(const std::string& spec);

/// $SSLAB_OUTPUT_DIR if set, otherwise the current directory.
std::filesystem::path output_dir();

}  // namespace sslab
