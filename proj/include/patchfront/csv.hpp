#pragma once

/// CSV emission and trajectory persistence.  All numbers are printed with
/// 17 significant digits so that a written file re-parses to bit-identical
/// doubles, which keeps every run reproducible byte for byte.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cauchy.hpp"
#include "numerics.hpp"

namespace patchfront {

inline std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cell);
      cell.clear();
    } else if (c != '\r') {
      cell.push_back(c);
    }
  }
  out.push_back(cell);
  return out;
}

inline double parse_double(const std::string& s, const std::string& where) {
  // strtod instead of stod: stod throws out_of_range on subnormal input,
  // but decaying tails legitimately underflow below DBL_MIN on disk.
  const char* begin = s.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || end != begin + s.size())
    throw config_error("cannot parse number '" + s + "' in " + where);
  if (!std::isfinite(v))
    throw config_error("number out of range '" + s + "' in " + where);
  return v;
}

}  // namespace detail

inline void write_csv(const std::string& path,
                      const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream out;
  for (std::size_t j = 0; j < header.size(); ++j)
    out << (j ? "," : "") << header[j];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t j = 0; j < row.size(); ++j)
      out << (j ? "," : "") << row[j];
    out << '\n';
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw config_error("cannot open '" + path + "' for writing");
  file << out.str();
}

inline CsvTable read_csv(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw config_error("cannot open '" + path + "'");
  CsvTable table;
  std::string line;
  if (!std::getline(file, line))
    throw config_error("'" + path + "' is empty");
  table.header = detail::split_csv_line(line);
  while (std::getline(file, line)) {
    if (line.empty() || line == "\r") continue;
    auto row = detail::split_csv_line(line);
    if (row.size() != table.header.size())
      throw config_error("ragged row in '" + path + "'");
    table.rows.push_back(std::move(row));
  }
  return table;
}

// ---------------------------------------------------------------------------
// Trajectory persistence: one (x,u) file per snapshot plus a meta index.
// ---------------------------------------------------------------------------

inline std::string snapshot_filename(std::size_t k) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "u_%04zu.csv", k);
  return buf;
}

inline void write_field_csv(const std::string& path, const Field& f) {
  std::vector<std::vector<std::string>> rows;
  rows.reserve(static_cast<std::size_t>(f.grid.size()));
  for (long i = 0; i < f.grid.size(); ++i)
    rows.push_back({format_g17(f.grid.x(i)), format_g17(f.values[i])});
  write_csv(path, {"x", "u"}, rows);
}

inline void write_trajectory(const std::string& dir, const Trajectory& traj) {
  std::filesystem::create_directories(dir);
  std::vector<std::vector<std::string>> meta;
  for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
    const Field& f = traj.snapshots[k];
    const std::string name = snapshot_filename(k);
    write_field_csv(dir + "/" + name, f);
    meta.push_back({format_g17(f.t), name, format_g17(f.grid.left_edge()),
                    format_g17(f.grid.right_edge())});
  }
  write_csv(dir + "/meta.csv",
            {"t", "filename", "domain_left", "domain_right"}, meta);
}

/// Rebuild a field from an (x,u) file.  The node at x = 0 splits the grid;
/// the node immediately to its right carries the exact step width, so the
/// reconstructed grid reproduces the written abscissae bit for bit.
inline Field read_field_csv(const std::string& path, double t) {
  const CsvTable table = read_csv(path);
  if (table.header != std::vector<std::string>{"x", "u"})
    throw config_error("'" + path + "' is not a snapshot file");
  std::vector<double> xs, us;
  xs.reserve(table.rows.size());
  us.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    xs.push_back(detail::parse_double(row[0], path));
    us.push_back(detail::parse_double(row[1], path));
  }
  long i0 = -1;
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (xs[i] == 0.0) {
      i0 = static_cast<long>(i);
      break;
    }
  if (i0 < 0 || i0 + 1 >= static_cast<long>(xs.size()))
    throw config_error("'" + path + "' has no interface node");
  Field f;
  f.grid.h = xs[static_cast<std::size_t>(i0) + 1];
  f.grid.n_left = i0;
  f.grid.n_right = static_cast<long>(xs.size()) - 1 - i0;
  f.t = t;
  f.values = std::move(us);
  validate_field(f);
  return f;
}

inline Trajectory load_trajectory(const std::string& dir,
                                  const PatchModel& m) {
  const CsvTable meta = read_csv(dir + "/meta.csv");
  if (meta.header !=
      std::vector<std::string>{"t", "filename", "domain_left", "domain_right"})
    throw config_error("'" + dir + "/meta.csv' has an unexpected header");
  Trajectory traj;
  traj.model = m;
  for (const auto& row : meta.rows) {
    const double t = detail::parse_double(row[0], dir + "/meta.csv");
    traj.snapshots.push_back(read_field_csv(dir + "/" + row[1], t));
  }
  return traj;
}

}  // namespace patchfront
