#pragma once

/// Observables extracted from trajectories: level-set positions, spreading
/// speeds, large-time regime classification, distance to stationary
/// profiles, front attachment, and the habitat-preference scaling map.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cauchy.hpp"
#include "numerics.hpp"
#include "reaction.hpp"
#include "stationary.hpp"
#include "waves.hpp"

namespace patchfront {

enum class Side { Left, Right };

/// Position of the outermost crossing of `level` on the given side, by
/// linear interpolation between the bracketing nodes; absent when the value
/// never comes down through the level on that side.
inline std::optional<double> level_position(const Field& f, double level,
                                            Side side) {
  const long N = f.grid.size();
  const auto& u = f.values;
  if (side == Side::Right) {
    for (long i = N - 2; i >= 0; --i)
      if (u[i] >= level && u[i + 1] < level)
        return f.grid.x(i) +
               f.grid.h * (u[i] - level) / (u[i] - u[i + 1]);
  } else {
    for (long i = 1; i < N; ++i)
      if (u[i] >= level && u[i - 1] < level)
        return f.grid.x(i) -
               f.grid.h * (u[i] - level) / (u[i] - u[i - 1]);
  }
  return std::nullopt;
}

/// Least-squares speed of a level set over a time window.
struct SpeedFit {
  double speed = 0.0;  ///< slope of position vs time (outward positive)
  double rms = 0.0;    ///< RMS deviation of positions from the fitted line
  long n_points = 0;
};

/// Fit position-versus-time of the level set over snapshots with
/// t in [t1, t2].  The reported speed is outward-positive on both sides
/// (a leftward-moving left front has positive speed).
inline SpeedFit estimate_speed(const Trajectory& traj, double level,
                               Side side, double t1, double t2) {
  if (!(t1 < t2))
    throw std::invalid_argument("estimate_speed: need t1 < t2");
  std::vector<double> ts, xs;
  for (const Field& f : traj.snapshots) {
    if (f.t < t1 - 1e-9 || f.t > t2 + 1e-9) continue;
    const auto pos = level_position(f, level, side);
    if (!pos)
      throw numeric_error(
          "estimate_speed: level position missing inside the window");
    ts.push_back(f.t);
    xs.push_back(side == Side::Right ? *pos : -*pos);
  }
  if (ts.size() < 2)
    throw std::invalid_argument(
        "estimate_speed: fewer than two snapshots in the window");
  const LineFit fit = fit_line(ts, xs);
  return {fit.slope, fit.rms, static_cast<long>(ts.size())};
}

/// Sup-distance between a field and a sampled stationary profile over
/// [a, b], with the profile linearly interpolated at the grid nodes.
inline double compare_to_stationary(const Field& f,
                                    const StationaryProfile& p, double a,
                                    double b) {
  validate_field(f);
  if (!(a < b) || a < f.grid.left_edge() - 1e-9 ||
      b > f.grid.right_edge() + 1e-9 || a < p.x.front() - 1e-9 ||
      b > p.x.back() + 1e-9)
    throw std::invalid_argument(
        "compare_to_stationary: interval must lie inside both supports");
  const double hp = p.x[1] - p.x[0];
  double worst = 0.0;
  for (long i = 0; i < f.grid.size(); ++i) {
    const double x = f.grid.x(i);
    if (x < a || x > b) continue;
    const double pos = (x - p.x.front()) / hp;
    const auto j = std::min<std::size_t>(static_cast<std::size_t>(pos),
                                         p.x.size() - 2);
    const double w = pos - static_cast<double>(j);
    const double pv = (1.0 - w) * p.u[j] + w * p.u[j + 1];
    worst = std::max(worst, std::abs(f.values[i] - pv));
  }
  return worst;
}

/// Best sup-norm attachment of a traveling front to a field over a region:
/// the shift xi minimizing sup |u(x) - phi(x - c t + xi)|.
struct FrontFit {
  double xi = 0.0;
  double sup_err = 0.0;
};

inline FrontFit fit_front_shift(const Field& f, const FrontProfile& front,
                                double xa, double xb, double c, double t) {
  validate_field(f);
  if (!(xa < xb))
    throw std::invalid_argument("fit_front_shift: need xa < xb");
  std::vector<long> idx;
  double umin = std::numeric_limits<double>::infinity(), umax = -umin;
  for (long i = 0; i < f.grid.size(); ++i) {
    const double x = f.grid.x(i);
    if (x < xa || x > xb) continue;
    idx.push_back(i);
    umin = std::min(umin, f.values[i]);
    umax = std::max(umax, f.values[i]);
  }
  if (idx.empty() || umin > 0.1 * front.K || umax < 0.9 * front.K)
    throw std::invalid_argument(
        "fit_front_shift: region does not bracket the front");

  // initial alignment: match the half-height crossings of field and front
  double x_half = xa;
  for (std::size_t k = idx.size() - 1; k > 0; --k) {
    const long i = idx[k - 1];
    if (f.values[i] >= 0.5 * front.K && f.values[idx[k]] < 0.5 * front.K) {
      x_half = f.grid.x(i) + f.grid.h * (f.values[i] - 0.5 * front.K) /
                                 (f.values[i] - f.values[idx[k]]);
      break;
    }
  }
  auto half_gap = [&](double s) {
    return front_eval(front, s) - 0.5 * front.K;
  };
  const double s_half =
      bisect(half_gap, front.s.front() - 40.0, front.s.back() + 40.0,
             half_gap(front.s.front() - 40.0), 1e-12);
  const double xi0 = s_half - (x_half - c * t);

  auto objective = [&](double xi) {
    double worst = 0.0;
    for (long i : idx)
      worst = std::max(worst, std::abs(f.values[i] -
                                       front_eval(front,
                                                  f.grid.x(i) - c * t + xi)));
    return worst;
  };
  const double xi = golden_min(objective, xi0 - 3.0, xi0 + 3.0, 1e-10);
  return {xi, objective(xi)};
}

// ---------------------------------------------------------------------------
// Regime classification
// ---------------------------------------------------------------------------

enum class Regime { Extinction, Blocked, VirtualBlocking, Propagating };

inline const char* regime_name(Regime r) {
  switch (r) {
    case Regime::Extinction: return "Extinction";
    case Regime::Blocked: return "Blocked";
    case Regime::VirtualBlocking: return "VirtualBlocking";
    default: return "Propagating";
  }
}

struct ClassifyOptions {
  double ext_tol = 1e-4;      ///< final sup-norm below this => Extinction
  double lambda_block = 1e-3; ///< tolerance for "never enters" the far patch
  double speed_floor = 0.05;  ///< fitted speed above this => Propagating
  double block_offset = 10.0; ///< blocking is judged this far past the datum
  std::optional<double> burn_in;       ///< default 0.25 * t_end
  std::optional<double> level_right;   ///< default K2 / 2
  std::optional<double> level_left;    ///< default K1 / 2
  std::optional<std::pair<double, double>> speed_window;  ///< default
                                       ///< [max(burn_in, t_end/2), t_end]
  std::pair<double, double> v_window{-10.0, 10.0};  ///< where u is compared
                                       ///< to the K1->K2 connection
};

/// Everything the decision tree measured, for reporting and audit.
struct RegimeEvidence {
  double t_end = 0.0;
  double burn_in = 0.0;
  double final_supnorm = 0.0;
  double ext_tol = 0.0, lambda_block = 0.0, speed_floor = 0.0;
  double x_block = 0.0;
  /// True when every post-burn-in grid reached x_block, so the far-field sup
  /// was measured directly rather than via the outermost stored band.
  bool block_certifiable = false;
  double blocked_sup = std::numeric_limits<double>::infinity();
  std::optional<double> speed_right, speed_right_rms, displacement_right;
  std::optional<double> speed_left, speed_left_rms;
  bool level_increasing = false;
  std::optional<double> v_dist_first, v_dist_last;
};

struct RegimeReport {
  Regime verdict = Regime::Extinction;
  std::optional<double> speed_right, speed_left, shift_xi;
  RegimeEvidence evidence;
};

/// Large-time regime of a trajectory, decided in the order
/// Extinction -> Blocked -> Propagating -> VirtualBlocking; anything that
/// matches none of the four is reported as an error carrying the evidence.
inline RegimeReport classify_regime(const Trajectory& traj,
                                    const PatchModel& m,
                                    const ClassifyOptions& opts = {}) {
  if (traj.snapshots.size() < 3)
    throw std::invalid_argument(
        "classify_regime: need at least three snapshots");
  const Field& first = traj.snapshots.front();
  const Field& last = traj.snapshots.back();
  RegimeReport rep;
  RegimeEvidence& ev = rep.evidence;
  ev.t_end = last.t;
  ev.burn_in = opts.burn_in.value_or(0.25 * last.t);
  ev.ext_tol = opts.ext_tol;
  ev.lambda_block = opts.lambda_block;
  ev.speed_floor = opts.speed_floor;

  for (double v : last.values)
    ev.final_supnorm = std::max(ev.final_supnorm, std::abs(v));
  if (ev.final_supnorm < opts.ext_tol) {
    rep.verdict = Regime::Extinction;
    return rep;
  }

  // --- blocking: the solution never reaches past the datum's right edge
  // (relative threshold: diffusion makes every node positive the moment the
  // first snapshot is past t = 0, which would push the edge to the boundary)
  double first_sup = 0.0;
  for (double v : first.values) first_sup = std::max(first_sup, v);
  double support_edge = first.grid.left_edge();
  for (long i = 0; i < first.grid.size(); ++i)
    if (first.values[i] > 1e-3 * first_sup)
      support_edge = std::max(support_edge, first.grid.x(i));
  ev.x_block = support_edge + opts.block_offset;
  ev.block_certifiable = true;
  ev.blocked_sup = 0.0;
  for (const Field& f : traj.snapshots) {
    if (f.t < ev.burn_in - 1e-9) continue;
    if (f.grid.right_edge() < ev.x_block) {
      // The stored grid ends before x_block.  The solution is zero beyond the
      // grid by construction, but fold in the outermost band so a run that
      // piled mass against a fixed boundary cannot pass as blocked.
      ev.block_certifiable = false;
      const long band = std::min<long>(10, f.grid.size());
      for (long i = f.grid.size() - band; i < f.grid.size(); ++i)
        ev.blocked_sup = std::max(ev.blocked_sup, f.values[i]);
      continue;
    }
    for (long i = f.grid.size() - 1; i >= 0 && f.grid.x(i) >= ev.x_block; --i)
      ev.blocked_sup = std::max(ev.blocked_sup, f.values[i]);
  }
  if (ev.blocked_sup < opts.lambda_block) {
    rep.verdict = Regime::Blocked;
    return rep;
  }

  // --- propagation: the right level set advances at a definite speed
  const double level_r = opts.level_right.value_or(m.f2.K / 2.0);
  const double level_l = opts.level_left.value_or(m.f1.K / 2.0);
  long in_window = 0;
  bool all_present = true;
  std::optional<double> pos_first, pos_last;
  auto gather = [&](std::pair<double, double> w) {
    in_window = 0;
    all_present = true;
    pos_first.reset();
    pos_last.reset();
    for (const Field& f : traj.snapshots) {
      if (f.t < w.first - 1e-9 || f.t > w.second + 1e-9) continue;
      ++in_window;
      const auto pos = level_position(f, level_r, Side::Right);
      if (!pos) {
        all_present = false;
        continue;
      }
      if (!pos_first) pos_first = *pos;
      pos_last = *pos;
    }
  };
  auto window = opts.speed_window.value_or(
      std::make_pair(std::max(ev.burn_in, 0.5 * last.t), last.t));
  gather(window);
  if (in_window < 3 && !opts.speed_window) {
    // sparse snapshot schedule: fall back to the whole post-burn-in tail so
    // a clearly moving front is not mistaken for virtual blocking
    window = {ev.burn_in, last.t};
    gather(window);
  }
  if (in_window >= 3 && all_present) {
    const SpeedFit fit =
        estimate_speed(traj, level_r, Side::Right, window.first,
                       window.second);
    ev.speed_right = fit.speed;
    ev.speed_right_rms = fit.rms;
    ev.displacement_right = std::abs(*pos_last - *pos_first);
    try {
      const SpeedFit lf = estimate_speed(traj, level_l, Side::Left,
                                         window.first, window.second);
      ev.speed_left = lf.speed;
      ev.speed_left_rms = lf.rms;
    } catch (const std::exception&) {
      // left front may sit outside the window; not needed for the verdict
    }
    if (fit.speed > opts.speed_floor &&
        fit.rms < 0.05 * std::max(*ev.displacement_right, 1e-9)) {
      rep.verdict = Regime::Propagating;
      rep.speed_right = ev.speed_right;
      rep.speed_left = ev.speed_left;
      if (classify(m.f2).verdict == ReactionVerdict::Bistable) {
        try {
          const FrontProfile front = bistable_front(m.f2, m.d2);
          const double pos = *pos_last;
          const FrontFit ft =
              fit_front_shift(last, front, pos - 15.0,
                              std::min(pos + 15.0, last.grid.right_edge()),
                              front.c, last.t);
          rep.shift_xi = ft.xi;
        } catch (const std::exception&) {
          // attachment is informative only; classification stands
        }
      }
      return rep;
    }
  }

  // --- virtual blocking: the level set still advances, but sublinearly,
  // and the solution locks onto the K1->K2 connection where it can be built
  std::vector<double> tail_t, tail_pos;
  for (const Field& f : traj.snapshots) {
    if (f.t < ev.burn_in - 1e-9) continue;
    const auto pos = level_position(f, level_r, Side::Right);
    if (!pos) {
      tail_pos.clear();
      break;
    }
    tail_t.push_back(f.t);
    tail_pos.push_back(*pos);
  }
  if (tail_pos.size() >= 3) {
    ev.level_increasing = tail_pos.back() > tail_pos.front() + 1e-9;
    for (std::size_t k = 1; k < tail_pos.size() && ev.level_increasing; ++k)
      if (tail_pos[k] < tail_pos[k - 1] - last.grid.h)
        ev.level_increasing = false;
    if (!ev.speed_right) {
      const LineFit tf = fit_line(tail_t, tail_pos);
      ev.speed_right = tf.slope;
      ev.speed_right_rms = tf.rms;
      ev.displacement_right = std::abs(tail_pos.back() - tail_pos.front());
    }
  }
  // a sublinear verdict is only honest when the measured speed really is
  // below the floor, not merely when the linear fit was poor
  if (ev.level_increasing && ev.speed_right &&
      *ev.speed_right < opts.speed_floor) {
    bool v_ok = true;
    try {
      const auto roots = solve_interface_value_V(m);
      const double L =
          std::max({std::abs(opts.v_window.first),
                    std::abs(opts.v_window.second), 10.0}) + 5.0;
      const StationaryProfile V =
          construct_V(m, roots.front(), L, default_step(m));
      std::optional<double> d_first, d_last;
      for (const Field& f : traj.snapshots) {
        if (f.t < ev.burn_in - 1e-9) continue;
        const double d = compare_to_stationary(f, V, opts.v_window.first,
                                               opts.v_window.second);
        if (!d_first) d_first = d;
        d_last = d;
      }
      ev.v_dist_first = d_first;
      ev.v_dist_last = d_last;
      v_ok = d_first && d_last && *d_last < *d_first;
    } catch (const std::exception&) {
      // no connection available: fall back to the level-set evidence alone
    }
    if (v_ok) {
      rep.verdict = Regime::VirtualBlocking;
      rep.speed_right = ev.speed_right;
      return rep;
    }
  }

  throw numeric_error(
      "classify_regime: indeterminate (final sup " +
      std::to_string(ev.final_supnorm) + ", blocked sup " +
      std::to_string(ev.blocked_sup) + ", fitted speed " +
      std::to_string(ev.speed_right.value_or(
          std::numeric_limits<double>::quiet_NaN())) +
      ")");
}

// ---------------------------------------------------------------------------
// Habitat-preference scaling
// ---------------------------------------------------------------------------

/// The change of variables absorbing an interface preference alpha into the
/// right-patch reaction: sigma = (1-alpha)/alpha, k = alpha/(1-alpha) *
/// d2/d1, f2(s) = k * f2_tilde(s/k); k * sigma = d2/d1 always.
struct ScaledModel {
  double pref_alpha = 0.5;
  double sigma = 1.0;
  double k = 1.0;
  Reaction f2 = logistic(1.0);
};

inline ScaledModel scaling_map(double pref_alpha, double d1, double d2,
                               const Reaction& f2_tilde) {
  if (!(pref_alpha > 0.0) || !(pref_alpha < 1.0))
    throw std::invalid_argument(
        "scaling_map: the preference must lie strictly inside (0,1)");
  if (!(d1 > 0.0) || !(d2 > 0.0))
    throw std::invalid_argument("scaling_map: diffusivities must be positive");
  ScaledModel s;
  s.pref_alpha = pref_alpha;
  s.sigma = (1.0 - pref_alpha) / pref_alpha;
  s.k = pref_alpha / (1.0 - pref_alpha) * d2 / d1;
  s.f2 = rescale(f2_tilde, s.k);
  return s;
}

/// Inverse of the preference -> slope-ratio map: alpha = 1/(1+sigma).
inline double preference_from_sigma(double sigma) {
  if (!(sigma > 0.0))
    throw std::invalid_argument("preference_from_sigma: sigma must be positive");
  return 1.0 / (1.0 + sigma);
}

}  // namespace patchfront
