#include "sslab/io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <istream>
#include <json.hpp>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "sslab/errors.hpp"

namespace sslab {

void Table::set(const std::string& key, const std::string& value) {
  for (auto& kv : meta)
    if (kv.first == key) {
      kv.second = value;
      return;
    }
  meta.emplace_back(key, value);
}

const std::string* Table::get(const std::string& key) const {
  for (const auto& kv : meta)
    if (kv.first == key) return &kv.second;
  return nullptr;
}

void Table::add_row(std::vector<std::string> row) {
  if (row.size() != columns.size())
    throw DomainError("table row has " + std::to_string(row.size()) + " cells, expected " +
                      std::to_string(columns.size()));
  rows.push_back(std::move(row));
}

std::size_t Table::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return i;
  throw DomainError("no column '" + name + "'");
}

double Table::number(std::size_t row, const std::string& name) const {
  return parse_number(rows.at(row).at(column(name)));
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";  // no "-0"
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string format_number(long v) { return std::to_string(v); }
std::string format_number(std::size_t v) { return std::to_string(v); }

double parse_number(const std::string& s) {
  if (s == "nan") return std::nan("");
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) throw DomainError("not a number: '" + s + "'");
  return v;
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

void write_csv(std::ostream& os, const Table& t) {
  os << "# sslab " << kVersion << '\n';
  for (const auto& [k, v] : t.meta) os << "# " << k << ": " << v << '\n';
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << '\n';
  }
}

Table read_csv(std::istream& is) {
  Table t;
  std::string line;
  if (!std::getline(is, line) || line.rfind("# sslab ", 0) != 0) throw DomainError("missing '# sslab' header line");
  bool have_columns = false;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!have_columns && line.rfind("# ", 0) == 0) {
      const auto colon = line.find(": ", 2);
      if (colon == std::string::npos) throw DomainError("malformed metadata line: " + line);
      t.meta.emplace_back(line.substr(2, colon - 2), line.substr(colon + 2));
      continue;
    }
    if (!have_columns) {
      t.columns = split(line, ',');
      have_columns = true;
      continue;
    }
    if (line.empty()) continue;
    t.add_row(split(line, ','));
  }
  if (!have_columns) throw DomainError("missing column line");
  return t;
}

std::string to_json(const Table& t) {
  nlohmann::ordered_json j;
  j["version"] = kVersion;
  j["meta"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : t.meta) j["meta"][k] = v;
  j["columns"] = t.columns;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    auto r = nlohmann::ordered_json::array();
    for (const auto& cell : row) {
      if (cell.empty()) {
        r.push_back(nullptr);
        continue;
      }
      try {
        const double v = parse_number(cell);
        if (cell.find_first_not_of("-0123456789") == std::string::npos && std::abs(v) < 9e15)
          r.push_back(static_cast<long long>(v));
        else if (std::isfinite(v))
          r.push_back(v);
        else
          r.push_back(cell);
      } catch (const DomainError&) {
        r.push_back(cell);
      }
    }
    j["rows"].push_back(std::move(r));
  }
  return j.dump(2) + "\n";
}

Table table_from_json(const std::string& text) {
  const auto j = nlohmann::ordered_json::parse(text);
  Table t;
  for (const auto& [k, v] : j.at("meta").items()) t.meta.emplace_back(k, v.get<std::string>());
  t.columns = j.at("columns").get<std::vector<std::string>>();
  for (const auto& r : j.at("rows")) {
    std::vector<std::string> row;
    for (const auto& cell : r) {
      if (cell.is_null())
        row.emplace_back();
      else if (cell.is_number())
        row.push_back(format_number(cell.get<double>()));
      else
        row.push_back(cell.get<std::string>());
    }
    t.add_row(std::move(row));
  }
  return t;
}

namespace {

constexpr char kGridMagic[8] = {'S', 'S', 'L', 'G', 'R', 'I', 'D', '1'};

template <class T>
void put_le(std::ostream& os, T v) {
  unsigned char b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big)
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
  os.write(reinterpret_cast<const char*>(b), sizeof(T));
}

template <class T>
T get_le(std::istream& is) {
  unsigned char b[sizeof(T)];
  if (!is.read(reinterpret_cast<char*>(b), sizeof(T))) throw DomainError("truncated grid file");
  if constexpr (std::endian::native == std::endian::big)
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
  T v;
  std::memcpy(&v, b, sizeof(T));
  return v;
}

}  // namespace

void write_grid(std::ostream& os, const Field2D& f) {
  os.write(kGridMagic, sizeof kGridMagic);
  put_le<std::uint64_t>(os, f.nx);
  put_le<std::uint64_t>(os, f.ny);
  for (double v : {f.x_min, f.x_max, f.y_min, f.y_max}) put_le<double>(os, v);
  for (double v : f.values) put_le<double>(os, v);
}

Field2D read_grid(std::istream& is) {
  char magic[8];
  if (!is.read(magic, 8) || std::memcmp(magic, kGridMagic, 8) != 0) throw DomainError("not an SSLGRID1 file");
  Field2D f;
  f.nx = get_le<std::uint64_t>(is);
  f.ny = get_le<std::uint64_t>(is);
  if (f.nx == 0 || f.ny == 0 || f.nx > (1u << 20) || f.ny > (1u << 20)) throw DomainError("implausible grid size");
  f.x_min = get_le<double>(is);
  f.x_max = get_le<double>(is);
  f.y_min = get_le<double>(is);
  f.y_max = get_le<double>(is);
  f.values.resize(f.nx * f.ny);
  for (double& v : f.values) v = get_le<double>(is);
  return f;
}

std::vector<double> parse_grid(const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts.empty() || parts.size() > 3) throw DomainError("grid must be start:end[:step], got '" + spec + "'");
  std::vector<double> v;
  for (const auto& s : parts) v.push_back(parse_number(s));
  for (double x : v)
    if (!std::isfinite(x)) throw DomainError("grid values must be finite: '" + spec + "'");
  if (v.size() == 1) return v;
  const double start = v[0], end = v[1], step = v.size() == 3 ? v[2] : 1.0;
  if (!(step > 0.0) || end < start) throw DomainError("grid needs step > 0 and end >= start: '" + spec + "'");
  const double span = (end - start) / step;
  if (span > 1e7) throw DomainError("grid too large: '" + spec + "'");
  const auto n = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
  std::vector<double> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(start + step * static_cast<double>(i));
  return out;
}

std::filesystem::path output_dir() {
  if (const char* d = std::getenv("SSLAB_OUTPUT_DIR"); d && *d) return d;
  return ".";
}

}  // namespace sslab
