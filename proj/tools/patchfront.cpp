// Command-line driver: scenario runner over the header library.
//
//   patchfront <subcommand> --config scenario.cfg [--out DIR]
//
// Subcommands: simulate, stationary, wave, classify, sweep, scale.
// Exit codes: 0 success, 2 configuration error, 3 numerical failure,
// 4 a certified existence statement failed to hold numerically.

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "patchfront/analysis.hpp"
#include "patchfront/cauchy.hpp"
#include "patchfront/config.hpp"
#include "patchfront/csv.hpp"
#include "patchfront/numerics.hpp"
#include "patchfront/reaction.hpp"
#include "patchfront/stationary.hpp"
#include "patchfront/waves.hpp"

using namespace patchfront;
using nlohmann::json;

namespace {

std::string format_f6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string opt_cell(const std::optional<double>& v) {
  return v ? format_g17(*v) : std::string();
}

json opt_json(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

const char* rule_name(ExistenceRule rule) {
  switch (rule) {
    case ExistenceRule::NegativeRightMass: return "NegativeRightMass";
    case ExistenceRule::BalancedRightMassOrderedCaps:
      return "BalancedRightMassOrderedCaps";
    case ExistenceRule::PositiveRightMassCapBelowBalance:
      return "PositiveRightMassCapBelowBalance";
    case ExistenceRule::RootOutsideGuarantee: return "RootOutsideGuarantee";
    default: return "NoRoot";
  }
}

// A generic viewer for the files a run leaves behind; emitted next to the
// data so a scenario directory is self-contained.
constexpr const char* kPlotScript = R"(#!/usr/bin/env python3
"""Plot every snapshot listed in meta.csv (and any profile CSVs) found in
the directory this script sits in.  Usage: python3 plot.py [outfile.png]"""
import csv
import os
import sys

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    sys.exit("matplotlib is required to render the plot")

here = os.path.dirname(os.path.abspath(__file__))

def read_xy(path):
    with open(path, newline="") as f:
        rows = list(csv.reader(f))
    xs = [float(r[0]) for r in rows[1:]]
    ys = [float(r[1]) for r in rows[1:]]
    return xs, ys

fig, ax = plt.subplots(figsize=(9, 5))
meta = os.path.join(here, "meta.csv")
if os.path.exists(meta):
    with open(meta, newline="") as f:
        entries = list(csv.DictReader(f))
    for row in entries:
        xs, us = read_xy(os.path.join(here, row["filename"]))
        ax.plot(xs, us, lw=1.2, label=f"t={float(row['t']):g}")
for name in sorted(os.listdir(here)):
    if name.startswith("stationary_") or name == "front.csv":
        xs, ys = read_xy(os.path.join(here, name))
        ax.plot(xs, ys, "--", lw=1.5, label=name.removesuffix(".csv"))
ax.axvline(0.0, color="k", lw=0.6, alpha=0.5)
ax.set_xlabel("x")
ax.set_ylabel("u")
ax.legend(fontsize=8, ncols=2)
out = sys.argv[1] if len(sys.argv) > 1 else os.path.join(here, "plot.png")
fig.tight_layout()
fig.savefig(out, dpi=150)
print(out)
)";

void write_text(const std::string& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw config_error("cannot open '" + path + "' for writing");
  file << text;
}

void write_profile_csv(const std::string& path, const StationaryProfile& p) {
  std::vector<std::vector<std::string>> rows;
  rows.reserve(p.x.size());
  for (std::size_t i = 0; i < p.x.size(); ++i)
    rows.push_back({format_g17(p.x[i]), format_g17(p.u[i])});
  write_csv(path, {"x", "u"}, rows);
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

int cmd_simulate(const ScenarioConfig& cfg, const std::string& out_dir) {
  const Grid g = grid_from_config(cfg);
  const Field u0 = datum_from_config(cfg, g);
  const Trajectory traj =
      solve(cfg.model, u0, cfg.T, solve_options_from_config(cfg));
  std::filesystem::create_directories(out_dir);
  write_trajectory(out_dir, traj);
  write_text(out_dir + "/plot.py", kPlotScript);
  const Field& last = traj.snapshots.back();
  double sup = 0.0;
  for (double v : last.values) sup = std::max(sup, v);
  std::cout << "snapshots=" << traj.snapshots.size() << " t_end="
            << format_f6(last.t) << " final_supnorm=" << format_f6(sup)
            << " domain=[" << format_f6(last.grid.left_edge()) << ","
            << format_f6(last.grid.right_edge())
            << "] negative_clips=" << last.negative_clips << '\n';
  return 0;
}

int cmd_stationary(const ScenarioConfig& cfg, const std::string& out_dir,
                   const std::string& kind, std::optional<double> psi0,
                   std::size_t root_index) {
  std::filesystem::create_directories(out_dir);
  const double L = default_tail_length(cfg.model);
  const double h = default_step(cfg.model);
  if (kind == "V") {
    const auto roots = solve_interface_value_V(cfg.model);
    if (root_index >= roots.size())
      throw config_error("stationary: root index out of range");
    const double xi = roots[root_index];
    write_profile_csv(out_dir + "/stationary_V.csv",
                      construct_V(cfg.model, xi, L, h));
    std::cout << "xi=" << format_f6(xi) << " roots=" << roots.size()
              << " xi_full=" << format_g17(xi) << '\n';
  } else if (kind == "U") {
    const auto res = solve_interface_value_U(cfg.model);
    if (!res.exists) {
      std::cout << "exists=false rule=" << rule_name(res.rule) << '\n';
      return 0;
    }
    if (root_index >= res.roots.size())
      throw config_error("stationary: root index out of range");
    const double xi = res.roots[root_index];
    write_profile_csv(out_dir + "/stationary_U.csv",
                      construct_U(cfg.model, xi, L, h));
    std::cout << "exists=true rule=" << rule_name(res.rule)
              << " roots=" << res.roots.size() << " xi=" << format_f6(xi)
              << " xi_full=" << format_g17(xi) << '\n';
  } else if (kind == "halfbump") {
    double p0;
    if (psi0)
      p0 = *psi0;
    else if (cfg.datum == "halfbump" && !cfg.datum_params.empty())
      p0 = cfg.datum_params[0];
    else
      throw config_error("stationary: halfbump needs --psi0");
    const StationaryProfile psi =
        construct_half_bump(cfg.model.f2, cfg.model.d2, p0, h);
    write_profile_csv(out_dir + "/stationary_halfbump.csv", psi);
    std::cout << "psi0=" << format_f6(p0) << " R=" << format_f6(psi.x.back())
              << '\n';
  } else {
    throw config_error("stationary: --kind must be U, V or halfbump");
  }
  return 0;
}

int cmd_wave(const ScenarioConfig& cfg, const std::string& out_dir) {
  const Reaction& f = cfg.model.f2;
  const double d = cfg.model.d2;
  const auto cls = classify(f);
  if (cls.verdict == ReactionVerdict::Bistable) {
    const FrontProfile front = bistable_front(f, d);
    std::filesystem::create_directories(out_dir);
    std::vector<std::vector<std::string>> rows;
    rows.reserve(front.s.size());
    for (std::size_t i = 0; i < front.s.size(); ++i)
      rows.push_back({format_g17(front.s[i]), format_g17(front.phi[i])});
    write_csv(out_dir + "/front.csv", {"s", "phi"}, rows);
    std::cout << "c=" << format_f6(front.c) << " kind=bistable c_full="
              << format_g17(front.c) << '\n';
  } else if (cls.verdict == ReactionVerdict::KPP) {
    const KppFrontData kd = kpp_speed(f, d);
    std::cout << "c=" << format_f6(kd.c_star) << " kind=kpp c_full="
              << format_g17(kd.c_star) << '\n';
  } else {
    throw config_error("wave: the right reaction is neither KPP nor bistable");
  }
  return 0;
}

json evidence_json(const RegimeReport& rep) {
  const RegimeEvidence& ev = rep.evidence;
  json j;
  j["verdict"] = regime_name(rep.verdict);
  j["t_end"] = ev.t_end;
  j["burn_in"] = ev.burn_in;
  j["final_supnorm"] = ev.final_supnorm;
  j["ext_tol"] = ev.ext_tol;
  j["lambda_block"] = ev.lambda_block;
  j["speed_floor"] = ev.speed_floor;
  j["x_block"] = ev.x_block;
  j["block_certifiable"] = ev.block_certifiable;
  j["blocked_sup"] = ev.blocked_sup;
  j["speed_right"] = opt_json(ev.speed_right);
  j["speed_right_rms"] = opt_json(ev.speed_right_rms);
  j["displacement_right"] = opt_json(ev.displacement_right);
  j["speed_left"] = opt_json(ev.speed_left);
  j["speed_left_rms"] = opt_json(ev.speed_left_rms);
  j["level_increasing"] = ev.level_increasing;
  j["v_dist_first"] = opt_json(ev.v_dist_first);
  j["v_dist_last"] = opt_json(ev.v_dist_last);
  j["shift_xi"] = opt_json(rep.shift_xi);
  return j;
}

int cmd_classify(const ScenarioConfig& cfg, const std::string& out_dir,
                 const std::string& traj_dir) {
  Trajectory traj;
  if (!traj_dir.empty()) {
    traj = load_trajectory(traj_dir, cfg.model);
  } else {
    const Grid g = grid_from_config(cfg);
    traj = solve(cfg.model, datum_from_config(cfg, g), cfg.T,
                 solve_options_from_config(cfg));
  }
  const RegimeReport rep =
      classify_regime(traj, cfg.model, classify_options_from_config(cfg));

  std::filesystem::create_directories(out_dir);
  const std::string ev_path = out_dir + "/evidence.json";
  write_text(ev_path, evidence_json(rep).dump(2) + "\n");
  write_csv(out_dir + "/report.csv",
            {"verdict", "speed_left", "speed_right", "xi", "final_supnorm",
             "evidence_json_path"},
            {{regime_name(rep.verdict), opt_cell(rep.speed_left),
              opt_cell(rep.speed_right), opt_cell(rep.shift_xi),
              format_g17(rep.evidence.final_supnorm), ev_path}});

  std::cout << "verdict=" << regime_name(rep.verdict);
  if (rep.speed_left) std::cout << " speed_left=" << format_f6(*rep.speed_left);
  if (rep.speed_right)
    std::cout << " speed_right=" << format_f6(*rep.speed_right);
  if (rep.shift_xi) std::cout << " xi=" << format_f6(*rep.shift_xi);
  std::cout << " final_supnorm=" << format_f6(rep.evidence.final_supnorm)
            << '\n';
  return 0;
}

ScenarioConfig apply_sweep_value(ScenarioConfig cfg, const std::string& key,
                                 double v) {
  auto set_reaction = [&](Reaction& f, bool is_K) {
    if (f.kind == ReactionKind::LogisticKPP) {
      if (!is_K)
        throw config_error("sweep: logistic reactions have no theta");
      f = logistic(v);
    } else if (f.kind == ReactionKind::CubicBistable) {
      f = is_K ? cubic(v, *f.theta) : cubic(f.K, v);
    } else {
      throw config_error("sweep: cannot sweep a custom reaction");
    }
  };
  if (key == "d1")
    cfg.model.d1 = v;
  else if (key == "d2")
    cfg.model.d2 = v;
  else if (key == "sigma")
    cfg.model.sigma = v;
  else if (key == "h")
    cfg.h = v;
  else if (key == "T")
    cfg.T = v;
  else if (key == "f1_K")
    set_reaction(cfg.model.f1, true);
  else if (key == "f1_theta")
    set_reaction(cfg.model.f1, false);
  else if (key == "f2_K")
    set_reaction(cfg.model.f2, true);
  else if (key == "f2_theta")
    set_reaction(cfg.model.f2, false);
  else
    throw config_error("sweep: unknown sweep key '" + key + "'");
  return cfg;
}

int cmd_sweep(const ScenarioConfig& cfg, const std::string& out_dir,
              unsigned threads) {
  if (cfg.sweep_key.empty() || cfg.sweep_values.empty())
    throw config_error("sweep: config must set sweep_key and sweep_values");
  const bool two_axes = !cfg.sweep_key2.empty();
  if (two_axes && cfg.sweep_values2.empty())
    throw config_error("sweep: sweep_key2 set but sweep_values2 empty");

  struct Point {
    double v1 = 0.0, v2 = 0.0;
  };
  std::vector<Point> points;
  for (double v1 : cfg.sweep_values) {
    if (two_axes)
      for (double v2 : cfg.sweep_values2) points.push_back({v1, v2});
    else
      points.push_back({v1, 0.0});
  }

  struct Row {
    std::string verdict;
    std::optional<double> speed_left, speed_right;
    double final_supnorm = 0.0;
  };
  std::vector<Row> rows(points.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= points.size()) return;
      Row& row = rows[i];
      try {
        ScenarioConfig point =
            apply_sweep_value(cfg, cfg.sweep_key, points[i].v1);
        if (two_axes)
          point = apply_sweep_value(point, cfg.sweep_key2, points[i].v2);
        const Grid g = grid_from_config(point);
        const Trajectory traj =
            solve(point.model, datum_from_config(point, g), point.T,
                  solve_options_from_config(point));
        const RegimeReport rep = classify_regime(
            traj, point.model, classify_options_from_config(point));
        row.verdict = regime_name(rep.verdict);
        row.speed_left = rep.speed_left;
        row.speed_right = rep.speed_right;
        row.final_supnorm = rep.evidence.final_supnorm;
      } catch (const std::exception&) {
        row.verdict = "Error";
      }
    }
  };
  const unsigned n_workers = std::max(
      1u, std::min<unsigned>(threads, static_cast<unsigned>(points.size())));
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  std::vector<std::string> header{"index", cfg.sweep_key};
  if (two_axes) header.push_back(cfg.sweep_key2);
  header.insert(header.end(),
                {"verdict", "speed_left", "speed_right", "final_supnorm"});
  std::vector<std::vector<std::string>> out_rows;
  for (std::size_t i = 0; i < points.size(); ++i) {
    std::vector<std::string> r{std::to_string(i), format_g17(points[i].v1)};
    if (two_axes) r.push_back(format_g17(points[i].v2));
    r.insert(r.end(), {rows[i].verdict, opt_cell(rows[i].speed_left),
                       opt_cell(rows[i].speed_right),
                       format_g17(rows[i].final_supnorm)});
    out_rows.push_back(std::move(r));
  }
  std::filesystem::create_directories(out_dir);
  write_csv(out_dir + "/atlas.csv", header, out_rows);
  std::cout << "points=" << points.size() << " threads=" << n_workers
            << " atlas=" << out_dir + "/atlas.csv" << '\n';
  return 0;
}

int cmd_scale(const ScenarioConfig& cfg, const std::string& out_dir) {
  const ScaledModel s =
      scaling_map(cfg.alpha, cfg.model.d1, cfg.model.d2, cfg.model.f2);
  ScenarioConfig scaled = cfg;
  scaled.model.sigma = s.sigma;
  scaled.model.f2 = s.f2;
  scaled.alpha = 0.5;  // the preference now lives in sigma and f2
  std::filesystem::create_directories(out_dir);
  write_text(out_dir + "/scaled.cfg", emit_config(scaled));
  std::cout << "sigma=" << format_f6(s.sigma) << " k=" << format_f6(s.k)
            << " f2=" << format_reaction(s.f2) << " sigma_full="
            << format_g17(s.sigma) << " k_full=" << format_g17(s.k) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-patch reaction-diffusion laboratory"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  unsigned long seed = 0;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  app.add_option("--config", config_path, "scenario config file")
      ->required();
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--seed", seed, "seed for randomized suites");
  app.add_option("--threads", threads, "worker threads for sweep");

  CLI::App* sub_simulate = app.add_subcommand("simulate", "run the solver");
  CLI::App* sub_stationary =
      app.add_subcommand("stationary", "stationary profiles");
  std::string kind = "V";
  std::optional<double> psi0;
  std::size_t root_index = 0;
  sub_stationary->add_option("--kind", kind, "U, V or halfbump");
  sub_stationary->add_option("--psi0", psi0, "half-bump apex value");
  sub_stationary->add_option("--root-index", root_index,
                             "which admissible root to sample");
  CLI::App* sub_wave = app.add_subcommand("wave", "traveling front of f2");
  CLI::App* sub_classify =
      app.add_subcommand("classify", "large-time regime of a run");
  std::string traj_dir;
  sub_classify->add_option("--traj", traj_dir,
                           "trajectory directory (default: solve first)");
  CLI::App* sub_sweep = app.add_subcommand("sweep", "parameter atlas");
  CLI::App* sub_scale =
      app.add_subcommand("scale", "preference-to-sigma scaling");
  for (CLI::App* sub : {sub_simulate, sub_stationary, sub_wave, sub_classify,
                        sub_sweep, sub_scale})
    sub->fallthrough();  // let global flags appear after the subcommand

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  (void)seed;  // reserved for randomized sweeps
  try {
    const ScenarioConfig cfg = parse_config_file(config_path);
    if (*sub_simulate) return cmd_simulate(cfg, out_dir);
    if (*sub_stationary)
      return cmd_stationary(cfg, out_dir, kind, psi0, root_index);
    if (*sub_wave) return cmd_wave(cfg, out_dir);
    if (*sub_classify) return cmd_classify(cfg, out_dir, traj_dir);
    if (*sub_sweep) return cmd_sweep(cfg, out_dir, threads);
    if (*sub_scale) return cmd_scale(cfg, out_dir);
    std::cerr << "error: no subcommand\n";
    return 2;
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const numeric_error& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  } catch (const theorem_violation& e) {
    std::cerr << "certified-existence failure: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
