// End-to-end acceptance runs for the two-patch laboratory.  Each numbered
// check either replays one of the recorded scenario configs (passed as the
// scenarios directory in argv[1]) through the full pipeline or runs an
// oracle/property suite, then prints one [PASS]/[FAIL] line with the
// measured numbers and the pinned tolerance.  The exit code is the number
// of failed checks, so the binary doubles as a ctest entry.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "patchfront/analysis.hpp"
#include "patchfront/config.hpp"

using namespace patchfront;

namespace {

struct Outcome {
  bool ok = false;
  std::string detail;
};

int g_failures = 0;

void report(const std::string& id, const std::string& name, const Outcome& o) {
  std::printf("[%s] %s %-28s %s\n", o.ok ? "PASS" : "FAIL", id.c_str(),
              name.c_str(), o.detail.c_str());
  std::fflush(stdout);
  if (!o.ok) ++g_failures;
}

std::string num(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

ScenarioConfig load_scenario(const std::string& dir, const std::string& name) {
  return parse_config_file(dir + "/" + name + ".cfg");
}

Trajectory run_scenario(const ScenarioConfig& cfg) {
  const Grid g = grid_from_config(cfg);
  return solve(cfg.model, datum_from_config(cfg, g), cfg.T,
               solve_options_from_config(cfg));
}

const Field& at_time(const Trajectory& traj, double t) {
  for (const Field& f : traj.snapshots)
    if (std::abs(f.t - t) < 1e-6) return f;
  throw std::invalid_argument("no snapshot at t = " + std::to_string(t));
}

/// Linear interpolation of a stored field, zero outside its grid.
double field_at(const Field& f, double x) {
  if (x <= f.grid.left_edge() || x >= f.grid.right_edge()) return 0.0;
  const double s = (x - f.grid.left_edge()) / f.grid.h;
  const long i = static_cast<long>(std::floor(s));
  const double w = s - static_cast<double>(i);
  return (1.0 - w) * f.values[i] + w * f.values[i + 1];
}

double sup_norm(const Field& f) {
  double s = 0.0;
  for (double v : f.values) s = std::max(s, v);
  return s;
}

// ---------------------------------------------------------------------------
// 01: two growth-type patches invade both ways at their own pulled speeds.
// ---------------------------------------------------------------------------

Outcome check_invasion_speeds(const ScenarioConfig& cfg, Trajectory& keep) {
  const auto t0 = std::chrono::steady_clock::now();
  keep = run_scenario(cfg);
  const double wall = seconds_since(t0);

  const SpeedFit left = estimate_speed(keep, 0.5, Side::Left, 40.0, 80.0);
  const SpeedFit right = estimate_speed(keep, 1.0, Side::Right, 40.0, 80.0);
  const double cl = 2.0, cr = 2.0 * std::sqrt(2.0);
  const bool ok = std::abs(left.speed - cl) <= 0.06 * cl &&
                  std::abs(right.speed - cr) <= 0.06 * cr && wall < 60.0;
  return {ok, "left=" + num(left.speed) + "/" + num(cl) + " right=" +
                  num(right.speed) + "/" + num(cr) + " (tol 6%) wall=" +
                  num(wall, 3) + "s/60s"};
}

// ---------------------------------------------------------------------------
// 02: interface value of the capacity-to-capacity connection, and the large-
// time solution locking onto that connection.
// ---------------------------------------------------------------------------

Outcome check_steady_interface(const ScenarioConfig& cfg) {
  const std::vector<double> roots = solve_interface_value_V(cfg.model);
  if (roots.size() != 1)
    return {false, "expected one admissible interface value, got " +
                       std::to_string(roots.size())};
  const double xi_err = std::abs(roots[0] - std::cbrt(3.0));
  const StationaryProfile v =
      construct_V(cfg.model, roots[0], 25.0, default_step(cfg.model));
  const Trajectory traj = run_scenario(cfg);
  const double dist =
      compare_to_stationary(at_time(traj, 100.0), v, -20.0, 20.0);
  const bool ok = xi_err < 1e-10 && dist < 1e-2;
  return {ok, "xi_err=" + num(xi_err, 2) + "/1e-10 sup|u-V|=" +
                  num(dist, 3) + "/1e-2 on [-20,20]"};
}

// ---------------------------------------------------------------------------
// 03: shooting front speed against the closed-form cubic value, and the
// speed sign against the reaction mass sign.
// ---------------------------------------------------------------------------

Outcome check_front_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(911u);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const double K = 0.5 + 4.5 * unit(rng);
    const double theta = K * (0.05 + 0.9 * unit(rng));
    const double d = 0.25 + 3.75 * unit(rng);
    const double exact = std::sqrt(d / 2.0) * (K - 2.0 * theta);
    const FrontProfile p = bistable_front(cubic(K, theta), d);
    worst = std::max(worst, std::abs(p.c - exact));
  }

  int sign_mismatches = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const double K = 0.5 + 4.5 * unit(rng);
    double ratio = 0.05 + 0.9 * unit(rng);
    // keep a hair away from the balanced line, where the sign is undefined
    while (std::abs(ratio - 0.5) < 5e-4) ratio = 0.05 + 0.9 * unit(rng);
    const double d = 0.25 + 3.75 * unit(rng);
    const FrontProfile p = bistable_front(cubic(K, K * ratio), d);
    const bool mass_positive = ratio < 0.5;  // mass sign = sign(K - 2 theta)
    if ((p.c > 0.0) != mass_positive) ++sign_mismatches;
  }

  const double wall = seconds_since(t0);
  const bool ok = worst <= 1e-6 && sign_mismatches == 0 && wall < 10.0;
  return {ok, "worst|c-exact|=" + num(worst, 2) + "/1e-6 over 50, sign flips " +
                  std::to_string(sign_mismatches) + "/200, wall=" +
                  num(wall, 3) + "s/10s"};
}

// ---------------------------------------------------------------------------
// 04: a strongly hostile right patch blocks the invasion for good.
// ---------------------------------------------------------------------------

Outcome check_blocking(const ScenarioConfig& cfg) {
  const Trajectory traj = run_scenario(cfg);
  const RegimeReport rep =
      classify_regime(traj, cfg.model, classify_options_from_config(cfg));

  double tail_sup = 0.0;  // right of x = 10, every snapshot from t = 25 on
  for (const Field& f : traj.snapshots) {
    if (f.t < 25.0 - 1e-9) continue;
    for (long i = f.grid.size() - 1; i >= 0 && f.grid.x(i) >= 10.0; --i)
      tail_sup = std::max(tail_sup, f.values[i]);
  }
  const bool ok = rep.verdict == Regime::Blocked && tail_sup < 1e-3;
  return {ok, "verdict=" + std::string(regime_name(rep.verdict)) +
                  " sup_{x>=10,t>=25}=" + num(tail_sup, 3) + "/1e-3"};
}

// ---------------------------------------------------------------------------
// 05: blocking by smallness, in amplitude and in integral.
// ---------------------------------------------------------------------------

Outcome check_blocking_smallness(const ScenarioConfig& low,
                                 const ScenarioConfig& thin) {
  // (a) left capacity under the ignition threshold, datum under it too
  const Trajectory ta = run_scenario(low);
  const RegimeReport ra =
      classify_regime(ta, low.model, classify_options_from_config(low));
  double running_max = 0.0;
  for (const Field& f : ta.snapshots)
    running_max = std::max(running_max, sup_norm(f));
  const double theta = *low.model.f2.theta;
  const bool ok_a = ra.verdict == Regime::Blocked && running_max < theta;

  // (b) negative right mass guarantees a declining barrier profile; the
  // datum's integral is cut to 1e-2 of the reference height-one indicator
  const ExistenceVerdict uv = solve_interface_value_U(thin.model);
  bool barrier_built = false;
  if (uv.exists) {
    const StationaryProfile u = construct_U(thin.model, uv.roots.front(), 20.0,
                                            default_step(thin.model));
    barrier_built = u.u.back() < 1e-6;
  }
  const Trajectory tb = run_scenario(thin);
  const RegimeReport rb =
      classify_regime(tb, thin.model, classify_options_from_config(thin));
  const bool ok_b = barrier_built && rb.verdict == Regime::Blocked;

  return {ok_a && ok_b,
          "amplitude: verdict=" + std::string(regime_name(ra.verdict)) +
              " max=" + num(running_max) + "/theta=" + num(theta) +
              "; integral(1e-2): barrier=" +
              (barrier_built ? "built" : "missing") + " verdict=" +
              std::string(regime_name(rb.verdict))};
}

// ---------------------------------------------------------------------------
// 06: with no blocking barrier the bistable side is invaded at the exact
// front speed, and the profile attaches to the traveling front.
// ---------------------------------------------------------------------------

Outcome check_invasion_bistable(const ScenarioConfig& cfg) {
  const Trajectory traj = run_scenario(cfg);
  const RegimeReport rep =
      classify_regime(traj, cfg.model, classify_options_from_config(cfg));
  const bool no_barrier = !solve_interface_value_U(cfg.model).exists;

  const double c_exact = std::sqrt(2.0);
  const double speed = rep.speed_right.value_or(0.0);
  const bool speed_ok = std::abs(speed - c_exact) <= 0.02 * c_exact;

  const FrontProfile front = bistable_front(cfg.model.f2, cfg.model.d2);
  double sup_err = 0.0, xi_lo = 0.0, xi_hi = 0.0;
  bool first = true;
  for (double t : {60.0, 70.0, 80.0}) {
    const Field& f = at_time(traj, t);
    const double pos =
        level_position(f, cfg.model.f2.K / 2.0, Side::Right).value();
    const FrontFit fit =
        fit_front_shift(f, front, pos - 8.0, pos + 8.0, c_exact, t);
    if (t == 80.0) sup_err = fit.sup_err;
    xi_lo = first ? fit.xi : std::min(xi_lo, fit.xi);
    xi_hi = first ? fit.xi : std::max(xi_hi, fit.xi);
    first = false;
  }
  const double xi_spread = xi_hi - xi_lo;
  const bool ok = rep.verdict == Regime::Propagating && no_barrier &&
                  speed_ok && sup_err < 0.02 * cfg.model.f2.K &&
                  xi_spread <= 0.05;
  return {ok, "verdict=" + std::string(regime_name(rep.verdict)) +
                  " barrier=" + (no_barrier ? "none" : "present") +
                  " speed=" + num(speed) + "/" + num(c_exact) +
                  " (tol 2%) fit_err=" + num(sup_err, 3) + "/" +
                  num(0.02 * cfg.model.f2.K, 2) + " xi_spread=" +
                  num(xi_spread, 2) + "/0.05"};
}

// ---------------------------------------------------------------------------
// 07: balanced right mass: the level set creeps right forever but with
// vanishing speed, while the profile approaches the K1->K2 connection.
// ---------------------------------------------------------------------------

Outcome check_virtual_blocking(const ScenarioConfig& cfg) {
  const Trajectory traj = run_scenario(cfg);
  const RegimeReport rep =
      classify_regime(traj, cfg.model, classify_options_from_config(cfg));
  const bool no_barrier = !solve_interface_value_U(cfg.model).exists;

  // level position must never retreat (one grid cell of slack)
  const double level = cfg.model.f2.K / 2.0;
  bool increasing = true;
  double prev = -std::numeric_limits<double>::infinity();
  for (const Field& f : traj.snapshots) {
    const auto pos = level_position(f, level, Side::Right);
    if (!pos) continue;
    increasing = increasing && *pos >= prev - f.grid.h;
    prev = *pos;
  }

  // distance to the connection shrinks monotonically once the burn-in ends
  const std::vector<double> roots = solve_interface_value_V(cfg.model);
  const StationaryProfile v =
      construct_V(cfg.model, roots.front(), 15.0, default_step(cfg.model));
  bool shrinking = true;
  double first_dist = -1.0, last_dist = -1.0;
  for (const Field& f : traj.snapshots) {
    if (f.t < 50.0 - 1e-9) continue;
    const double dist = compare_to_stationary(f, v, -10.0, 10.0);
    if (first_dist < 0.0) first_dist = dist;
    if (last_dist >= 0.0) shrinking = shrinking && dist <= last_dist + 1e-6;
    last_dist = dist;
  }

  const double speed = rep.speed_right.value_or(1.0);
  const bool ok = rep.verdict == Regime::VirtualBlocking && no_barrier &&
                  increasing && speed < 0.05 && shrinking &&
                  last_dist < first_dist;
  return {ok, "verdict=" + std::string(regime_name(rep.verdict)) +
                  " barrier=" + (no_barrier ? "none" : "present") +
                  " level " + (increasing ? "advances" : "retreats") +
                  " speed[150,200]=" + num(speed, 3) +
                  "/0.05 |u-V| " + num(first_dist, 3) + "->" +
                  num(last_dist, 3)};
}

// ---------------------------------------------------------------------------
// 08: two hostile patches: the compact datum dies out in sup norm.
// ---------------------------------------------------------------------------

Outcome check_extinction(const ScenarioConfig& cfg) {
  const Trajectory traj = run_scenario(cfg);
  const RegimeReport rep =
      classify_regime(traj, cfg.model, classify_options_from_config(cfg));
  const double final_sup = sup_norm(traj.snapshots.back());
  const bool ok = rep.verdict == Regime::Extinction && final_sup < 1e-4;
  return {ok, "verdict=" + std::string(regime_name(rep.verdict)) +
                  " final sup=" + num(final_sup, 3) + "/1e-4 at T=" +
                  num(traj.snapshots.back().t, 3)};
}

// ---------------------------------------------------------------------------
// 09: ordered data stay ordered at every node of every snapshot when both
// runs share the stability window (same dt sequence).
// ---------------------------------------------------------------------------

Outcome check_comparison_principle() {
  std::mt19937_64 rng(4242u);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto random_reaction = [&](double K) {
    return unit(rng) < 0.5 ? logistic(K)
                           : cubic(K, K * (0.1 + 0.8 * unit(rng)));
  };

  int violations = 0;
  for (int trial = 0; trial < 100; ++trial) {
    PatchModel m;
    m.d1 = 0.3 + 2.7 * unit(rng);
    m.d2 = 0.3 + 2.7 * unit(rng);
    m.sigma = 0.3 + 2.7 * unit(rng);
    m.f1 = random_reaction(0.5 + 2.5 * unit(rng));
    m.f2 = random_reaction(0.5 + 2.5 * unit(rng));

    Grid g;
    g.h = 0.1;
    g.n_left = 50;
    g.n_right = 50;
    const double Kmax = std::max(m.f1.K, m.f2.K);
    const double a = -4.0 + 3.0 * unit(rng);
    const double b = a + 0.2 + 2.0 * unit(rng);
    const Field lo = initial_datum(DatumKind::Indicator,
                                   {a, b, Kmax * (0.1 + 0.8 * unit(rng))}, g);
    const Field extra = initial_datum(
        DatumKind::Bump,
        {-3.0 + 6.0 * unit(rng), 0.3 + 1.2 * unit(rng), Kmax * unit(rng)}, g);
    Field hi = lo;
    for (std::size_t i = 0; i < hi.values.size(); ++i)
      hi.values[i] += extra.values[i];

    SolveOptions opts;
    opts.expand = false;
    opts.interface_order = 1;
    opts.amplitude_bound = std::max(Kmax, sup_norm(hi)) + 1.0;
    opts.output_times = {0.1, 0.25, 0.5};
    const Trajectory tl = solve(m, lo, 0.5, opts);
    const Trajectory th = solve(m, hi, 0.5, opts);
    for (std::size_t k = 0; k < tl.snapshots.size(); ++k)
      for (std::size_t i = 0; i < tl.snapshots[k].values.size(); ++i)
        if (tl.snapshots[k].values[i] > th.snapshots[k].values[i])
          ++violations;
  }
  return {violations == 0,
          std::to_string(violations) + " node violations over 100 pairs"};
}

// ---------------------------------------------------------------------------
// 10: off-support heat-kernel envelope on the invading run.
// ---------------------------------------------------------------------------

Outcome check_tail_envelope(const Trajectory& invasion,
                            const ScenarioConfig& cfg) {
  Trajectory early;
  early.model = invasion.model;
  for (double t : {1.0, 5.0, 10.0})
    early.snapshots.push_back(at_time(invasion, t));
  const Grid g = grid_from_config(cfg);
  const double excess =
      gaussian_bound_excess(early, datum_from_config(cfg, g));
  return {excess <= 1.01,
          "worst ratio to envelope=" + num(excess, 6) + "/1.01 at t in {1,5,10}"};
}

// ---------------------------------------------------------------------------
// 11: with identical patches the interface is invisible: the two-patch run
// approaches a plain one-domain explicit run at least linearly in h.
// ---------------------------------------------------------------------------

Outcome check_homogeneous_equivalence() {
  PatchModel m;
  m.f1 = logistic(1.0);
  m.f2 = logistic(1.0);

  std::vector<double> errs;
  for (const double h : {0.1, 0.05, 0.025}) {
    Grid g;
    g.h = h;
    g.n_left = static_cast<long>(std::lround(8.0 / h));
    g.n_right = g.n_left;
    const Field u0 = initial_datum(DatumKind::Indicator, {-1.0, 1.0, 0.5}, g);

    const double dt_max = cfl(m, h, 1.0);
    const long steps = static_cast<long>(std::ceil(1.0 / dt_max));
    const double dt = 1.0 / static_cast<double>(steps);

    Field u = u0;
    std::vector<double> r = u0.values, rn = r;
    const double c = m.d1 * dt / (h * h);
    const long N = g.size();
    for (long s = 0; s < steps; ++s) {
      u = step(m, u, dt, 1);
      // plain one-domain update, reflecting ends, matching the patch scheme
      rn[0] = r[0] + 2.0 * c * (r[1] - r[0]) + dt * eval(m.f1, r[0]);
      for (long i = 1; i < N - 1; ++i)
        rn[i] = r[i] + c * (r[i - 1] - 2.0 * r[i] + r[i + 1]) +
                dt * eval(m.f1, r[i]);
      rn[N - 1] =
          r[N - 1] + 2.0 * c * (r[N - 2] - r[N - 1]) + dt * eval(m.f1, r[N - 1]);
      for (double& v : rn) v = std::max(v, 0.0);
      std::swap(r, rn);
    }

    double diff = 0.0;
    for (long i = 0; i < N; ++i)
      diff = std::max(diff, std::abs(u.values[i] - r[i]));
    errs.push_back(diff);
  }

  const bool ok = errs[1] <= 0.55 * errs[0] && errs[2] <= 0.55 * errs[1];
  return {ok, "sup diff at T=1: h=0.1: " + num(errs[0], 3) + ", h=0.05: " +
                  num(errs[1], 3) + ", h=0.025: " + num(errs[2], 3) +
                  " (each step must drop by >= 0.55)"};
}

// ---------------------------------------------------------------------------
// 12: the compact half-bump with apex above threshold solves the profile
// equation, touches zero at its feet, and ignites invasion as a datum.
// ---------------------------------------------------------------------------

Outcome check_half_bump(const ScenarioConfig& cfg) {
  const StationaryProfile p =
      construct_half_bump(cfg.model.f2, cfg.model.d2, 2.0, 2.5e-4);
  const double hp = p.x[1] - p.x[0];
  double residual = 0.0, peak = 0.0;
  for (std::size_t i = 1; i + 1 < p.u.size(); ++i) {
    const double lap = (p.u[i - 1] - 2.0 * p.u[i] + p.u[i + 1]) / (hp * hp);
    residual = std::max(residual,
                        std::abs(cfg.model.d2 * lap + eval(cfg.model.f2, p.u[i])));
  }
  for (double v : p.u) peak = std::max(peak, v);
  const double apex = p.u[p.u.size() / 2];
  const double feet = std::max(p.u.front(), p.u.back());

  const Trajectory traj = run_scenario(cfg);
  const RegimeReport rep =
      classify_regime(traj, cfg.model, classify_options_from_config(cfg));

  const bool ok = residual < 1e-6 && feet < 1e-8 && peak == apex &&
                  apex == 2.0 && apex > *cfg.model.f2.theta &&
                  rep.verdict == Regime::Propagating;
  return {ok, "residual=" + num(residual, 2) + "/1e-6 feet=" + num(feet, 2) +
                  "/1e-8 apex=" + num(apex) + " verdict=" +
                  std::string(regime_name(rep.verdict))};
}

// ---------------------------------------------------------------------------
// supplementary: convergence along rays inside and outside the two spreading
// cones, sampled on the final snapshot of the invading run.
// ---------------------------------------------------------------------------

Outcome check_ray_convergence(const Trajectory& invasion,
                              const PatchModel& m) {
  const Field& f = invasion.snapshots.back();
  const double T = f.t;
  const double cl = 2.0 * std::sqrt(m.d1 * deriv(m.f1, 0.0));
  const double cr = 2.0 * std::sqrt(m.d2 * deriv(m.f2, 0.0));
  const double xi = solve_interface_value_V(m).front();

  struct Ray {
    double x, target, tol;
  };
  const std::vector<Ray> rays = {
      {0.0, xi, 0.02},
      {-0.5 * cl * T, m.f1.K, 0.02 * m.f1.K},
      {0.5 * cr * T, m.f2.K, 0.02 * m.f2.K},
      {-0.9 * cl * T, m.f1.K, 0.10 * m.f1.K},
      {0.9 * cr * T, m.f2.K, 0.10 * m.f2.K},
  };
  bool ok = true;
  std::ostringstream os;
  for (const Ray& r : rays) {
    const double err = std::abs(field_at(f, r.x) - r.target);
    ok = ok && err <= r.tol;
    os << " x=" << num(r.x, 4) << ":" << num(err, 2) << "/" << num(r.tol, 2);
  }
  return {ok, "|u(T,ct)-limit| at T=" + num(T, 3) + ":" + os.str()};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string dir = argc > 1 ? argv[1] : "scenarios";

  auto guarded = [](const std::string& id, const std::string& name,
                    auto&& fn) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    report(id, name, o);
  };

  Trajectory invasion;  // check 01's run, reused by 10 and the rays
  ScenarioConfig invasion_cfg;

  guarded("01", "two_sided_invasion_speeds", [&] {
    invasion_cfg = load_scenario(dir, "invasion_kpp_pair");
    return check_invasion_speeds(invasion_cfg, invasion);
  });
  guarded("02", "interface_value_and_lock_on", [&] {
    return check_steady_interface(load_scenario(dir, "steady_kpp_pair"));
  });
  guarded("03", "front_speed_oracle", [] { return check_front_oracle(); });
  guarded("04", "blocking_strong_sink", [&] {
    return check_blocking(load_scenario(dir, "blocking_strong_sink"));
  });
  guarded("05", "blocking_by_smallness", [&] {
    return check_blocking_smallness(load_scenario(dir, "blocking_low_capacity"),
                                    load_scenario(dir, "blocking_small_mass"));
  });
  guarded("06", "invasion_at_front_speed", [&] {
    return check_invasion_bistable(load_scenario(dir, "invasion_bistable"));
  });
  guarded("07", "virtual_blocking", [&] {
    return check_virtual_blocking(load_scenario(dir, "virtual_blocking"));
  });
  guarded("08", "extinction", [&] {
    return check_extinction(load_scenario(dir, "extinction_pair"));
  });
  guarded("09", "comparison_principle",
          [] { return check_comparison_principle(); });
  guarded("10", "tail_envelope", [&] {
    if (invasion.snapshots.empty())
      return Outcome{false, "invading run unavailable (check 01 failed)"};
    return check_tail_envelope(invasion, invasion_cfg);
  });
  guarded("11", "homogeneous_equivalence",
          [] { return check_homogeneous_equivalence(); });
  guarded("12", "half_bump_trigger", [&] {
    return check_half_bump(load_scenario(dir, "halfbump_trigger"));
  });
  guarded("s1", "ray_convergence(extra)", [&] {
    if (invasion.snapshots.empty())
      return Outcome{false, "invading run unavailable (check 01 failed)"};
    return check_ray_convergence(invasion, invasion_cfg.model);
  });

  std::printf("acceptance: %d of 13 checks failed\n", g_failures);
  return g_failures;
}
