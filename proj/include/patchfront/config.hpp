#pragma once

/// Scenario configuration: a flat `key = value` file covering the model,
/// the grid and stepping, the initial datum, the classifier thresholds, and
/// optional parameter-sweep axes.  `parse_config(emit_config(c))` restores
/// every field exactly (doubles are printed with 17 significant digits).

#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "analysis.hpp"
#include "cauchy.hpp"
#include "csv.hpp"
#include "reaction.hpp"
#include "stationary.hpp"

namespace patchfront {

struct ScenarioConfig {
  PatchModel model;
  double alpha = 0.5;  ///< interface preference, used by `scale`

  double h = 0.05;
  double x_left = 10.0;   ///< initial domain is [-x_left, x_right]
  double x_right = 10.0;
  double T = 10.0;
  bool expand = true;
  int interface_order = 1;
  std::optional<double> amplitude_bound;
  std::vector<double> output_times;  ///< empty: just {T}

  std::string datum = "indicator";  ///< indicator | bump | plateau | halfbump
  std::vector<double> datum_params{-1.0, 1.0, 1.0};

  double ext_tol = 1e-4;
  double lambda_block = 1e-3;
  double speed_floor = 0.05;
  std::optional<double> burn_in, level_right, level_left;
  std::optional<std::pair<double, double>> speed_window;
  std::pair<double, double> v_window{-10.0, 10.0};

  std::string sweep_key, sweep_key2;  ///< parameter axes for `sweep`
  std::vector<double> sweep_values, sweep_values2;
};

namespace detail {

inline std::string trim_ws(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  const auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

inline double config_double(const std::string& val, const std::string& key) {
  return parse_double(val, "key '" + key + "'");
}

inline long config_long(const std::string& val, const std::string& key) {
  const double v = config_double(val, key);
  const long n = static_cast<long>(v);
  if (static_cast<double>(n) != v)
    throw config_error("key '" + key + "' must be an integer");
  return n;
}

inline bool config_bool(const std::string& val, const std::string& key) {
  if (val == "true") return true;
  if (val == "false") return false;
  throw config_error("key '" + key + "' must be true or false");
}

inline std::vector<double> config_doubles(const std::string& val,
                                          const std::string& key) {
  std::vector<double> out;
  std::istringstream in(val);
  std::string item;
  while (in >> item) out.push_back(config_double(item, key));
  return out;
}

inline std::pair<double, double> config_pair(const std::string& val,
                                             const std::string& key) {
  const auto v = config_doubles(val, key);
  if (v.size() != 2)
    throw config_error("key '" + key + "' needs exactly two numbers");
  return {v[0], v[1]};
}

inline std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += format_g17(v[i]);
  }
  return out;
}

}  // namespace detail

inline ScenarioConfig parse_config(const std::string& text) {
  ScenarioConfig c;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim_ws(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error("line " + std::to_string(lineno) +
                         ": expected 'key = value'");
    const std::string key = detail::trim_ws(line.substr(0, eq));
    const std::string val = detail::trim_ws(line.substr(eq + 1));
    if (key.empty() || val.empty())
      throw config_error("line " + std::to_string(lineno) +
                         ": empty key or value");

    if (key == "d1")
      c.model.d1 = detail::config_double(val, key);
    else if (key == "d2")
      c.model.d2 = detail::config_double(val, key);
    else if (key == "sigma")
      c.model.sigma = detail::config_double(val, key);
    else if (key == "f1")
      c.model.f1 = parse_reaction(val);
    else if (key == "f2")
      c.model.f2 = parse_reaction(val);
    else if (key == "alpha")
      c.alpha = detail::config_double(val, key);
    else if (key == "h")
      c.h = detail::config_double(val, key);
    else if (key == "x_left")
      c.x_left = detail::config_double(val, key);
    else if (key == "x_right")
      c.x_right = detail::config_double(val, key);
    else if (key == "T")
      c.T = detail::config_double(val, key);
    else if (key == "expand")
      c.expand = detail::config_bool(val, key);
    else if (key == "interface_order")
      c.interface_order = static_cast<int>(detail::config_long(val, key));
    else if (key == "amplitude_bound")
      c.amplitude_bound = detail::config_double(val, key);
    else if (key == "output_times")
      c.output_times = detail::config_doubles(val, key);
    else if (key == "datum")
      c.datum = val;
    else if (key == "datum_params")
      c.datum_params = detail::config_doubles(val, key);
    else if (key == "ext_tol")
      c.ext_tol = detail::config_double(val, key);
    else if (key == "lambda_block")
      c.lambda_block = detail::config_double(val, key);
    else if (key == "speed_floor")
      c.speed_floor = detail::config_double(val, key);
    else if (key == "burn_in")
      c.burn_in = detail::config_double(val, key);
    else if (key == "level_right")
      c.level_right = detail::config_double(val, key);
    else if (key == "level_left")
      c.level_left = detail::config_double(val, key);
    else if (key == "speed_window")
      c.speed_window = detail::config_pair(val, key);
    else if (key == "v_window")
      c.v_window = detail::config_pair(val, key);
    else if (key == "sweep_key")
      c.sweep_key = val;
    else if (key == "sweep_values")
      c.sweep_values = detail::config_doubles(val, key);
    else if (key == "sweep_key2")
      c.sweep_key2 = val;
    else if (key == "sweep_values2")
      c.sweep_values2 = detail::config_doubles(val, key);
    else
      throw config_error("line " + std::to_string(lineno) +
                         ": unknown key '" + key + "'");
  }

  if (!(c.h > 0.0)) throw config_error("h must be positive");
  if (!(c.T > 0.0)) throw config_error("T must be positive");
  if (!(c.x_left > 0.0) || !(c.x_right > 0.0))
    throw config_error("x_left and x_right must be positive");
  if (c.interface_order != 1 && c.interface_order != 2)
    throw config_error("interface_order must be 1 or 2");
  if (!(c.model.d1 > 0.0) || !(c.model.d2 > 0.0) || !(c.model.sigma > 0.0))
    throw config_error("d1, d2, sigma must be positive");
  if (c.datum != "indicator" && c.datum != "bump" && c.datum != "plateau" &&
      c.datum != "halfbump")
    throw config_error("datum must be indicator, bump, plateau or halfbump");
  return c;
}

inline ScenarioConfig parse_config_file(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw config_error("cannot open config '" + path + "'");
  std::ostringstream buf;
  buf << file.rdbuf();
  return parse_config(buf.str());
}

inline std::string emit_config(const ScenarioConfig& c) {
  std::ostringstream out;
  out << "# model\n";
  out << "d1 = " << format_g17(c.model.d1) << '\n';
  out << "d2 = " << format_g17(c.model.d2) << '\n';
  out << "sigma = " << format_g17(c.model.sigma) << '\n';
  out << "f1 = " << format_reaction(c.model.f1) << '\n';
  out << "f2 = " << format_reaction(c.model.f2) << '\n';
  out << "alpha = " << format_g17(c.alpha) << '\n';
  out << "\n# grid and stepping\n";
  out << "h = " << format_g17(c.h) << '\n';
  out << "x_left = " << format_g17(c.x_left) << '\n';
  out << "x_right = " << format_g17(c.x_right) << '\n';
  out << "T = " << format_g17(c.T) << '\n';
  out << "expand = " << (c.expand ? "true" : "false") << '\n';
  out << "interface_order = " << c.interface_order << '\n';
  if (c.amplitude_bound)
    out << "amplitude_bound = " << format_g17(*c.amplitude_bound) << '\n';
  if (!c.output_times.empty())
    out << "output_times = " << detail::join(c.output_times) << '\n';
  out << "\n# initial datum\n";
  out << "datum = " << c.datum << '\n';
  out << "datum_params = " << detail::join(c.datum_params) << '\n';
  out << "\n# classification\n";
  out << "ext_tol = " << format_g17(c.ext_tol) << '\n';
  out << "lambda_block = " << format_g17(c.lambda_block) << '\n';
  out << "speed_floor = " << format_g17(c.speed_floor) << '\n';
  if (c.burn_in) out << "burn_in = " << format_g17(*c.burn_in) << '\n';
  if (c.level_right)
    out << "level_right = " << format_g17(*c.level_right) << '\n';
  if (c.level_left)
    out << "level_left = " << format_g17(*c.level_left) << '\n';
  if (c.speed_window)
    out << "speed_window = " << format_g17(c.speed_window->first) << ' '
        << format_g17(c.speed_window->second) << '\n';
  out << "v_window = " << format_g17(c.v_window.first) << ' '
      << format_g17(c.v_window.second) << '\n';
  if (!c.sweep_key.empty()) {
    out << "\n# sweep\n";
    out << "sweep_key = " << c.sweep_key << '\n';
    out << "sweep_values = " << detail::join(c.sweep_values) << '\n';
    if (!c.sweep_key2.empty()) {
      out << "sweep_key2 = " << c.sweep_key2 << '\n';
      out << "sweep_values2 = " << detail::join(c.sweep_values2) << '\n';
    }
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Derived objects
// ---------------------------------------------------------------------------

inline Grid grid_from_config(const ScenarioConfig& c) {
  Grid g;
  g.h = c.h;
  g.n_left = std::lround(c.x_left / c.h);
  g.n_right = std::lround(c.x_right / c.h);
  validate_grid(g);
  return g;
}

inline Field datum_from_config(const ScenarioConfig& c, const Grid& g) {
  if (c.datum == "halfbump") {
    if (c.datum_params.size() != 2)
      throw config_error("halfbump datum needs params: psi0 x0");
    const StationaryProfile psi = construct_half_bump(
        c.model.f2, c.model.d2, c.datum_params[0], default_step(c.model));
    return initial_datum(psi, c.datum_params[1], g);
  }
  const DatumKind kind = c.datum == "bump"      ? DatumKind::Bump
                         : c.datum == "plateau" ? DatumKind::Plateau
                                                : DatumKind::Indicator;
  return initial_datum(kind, c.datum_params, g);
}

inline SolveOptions solve_options_from_config(const ScenarioConfig& c) {
  SolveOptions opts;
  opts.output_times = c.output_times;
  opts.expand = c.expand;
  opts.interface_order = c.interface_order;
  opts.amplitude_bound = c.amplitude_bound;
  return opts;
}

inline ClassifyOptions classify_options_from_config(const ScenarioConfig& c) {
  ClassifyOptions opts;
  opts.ext_tol = c.ext_tol;
  opts.lambda_block = c.lambda_block;
  opts.speed_floor = c.speed_floor;
  opts.burn_in = c.burn_in;
  opts.level_right = c.level_right;
  opts.level_left = c.level_left;
  opts.speed_window = c.speed_window;
  opts.v_window = c.v_window;
  return opts;
}

}  // namespace patchfront
