#pragma once

/// Explicit finite-difference integrator for the two-patch problem on a
/// truncated line that can expand as the solution spreads.  The interface
/// node at x = 0 carries no time derivative: after every bulk update it is
/// reassigned algebraically from the flux-matching condition
/// u_x(0-) = sigma * u_x(0+).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include "numerics.hpp"
#include "reaction.hpp"
#include "stationary.hpp"

namespace patchfront {

/// Uniform grid with the same spacing on both sides and a node exactly at
/// x = 0.  Node i lives at x = (i - n_left) * h, i = 0 .. n_left + n_right.
struct Grid {
  double h = 0.05;
  long n_left = 200;   ///< nodes strictly left of the interface node
  long n_right = 200;  ///< nodes strictly right of the interface node

  long size() const { return n_left + n_right + 1; }
  double x(long i) const { return (i - n_left) * h; }
  double left_edge() const { return -static_cast<double>(n_left) * h; }
  double right_edge() const { return static_cast<double>(n_right) * h; }
};

inline void validate_grid(const Grid& g) {
  if (!(g.h > 0.0) || g.n_left < 2 || g.n_right < 2)
    throw std::invalid_argument(
        "grid: need h > 0 and at least two nodes on each side");
}

/// One time slice of the solution.  `negative_clips` counts nodes whose
/// update undershot zero by less than the clip tolerance and was pinned
/// back to zero (larger undershoots abort the run).
struct Field {
  Grid grid;
  double t = 0.0;
  std::vector<double> values;
  long negative_clips = 0;
};

/// Snapshots of one simulation at a declared output schedule.
struct Trajectory {
  std::vector<Field> snapshots;
  PatchModel model;
};

inline void validate_field(const Field& f) {
  validate_grid(f.grid);
  if (static_cast<long>(f.values.size()) != f.grid.size())
    throw std::invalid_argument("field: values do not match the grid");
}

// ---------------------------------------------------------------------------
// Initial data
// ---------------------------------------------------------------------------

enum class DatumKind { Bump, Plateau, Indicator, HalfBump };

namespace detail {

inline void require_support_inside(double lo, double hi, const Grid& g,
                                   const char* what) {
  if (lo < g.left_edge() - 1e-12 || hi > g.right_edge() + 1e-12)
    throw std::invalid_argument(std::string(what) +
                                ": support exceeds the grid");
}

}  // namespace detail

/// Sample a compactly supported datum on the grid.
///   Bump:      params {center, width, height}, cosine-squared profile;
///   Plateau:   params {a, L, height}, constant at `height` on
///              [a+1, a+L-1] with affine one-unit ramps down to 0 at a, a+L;
///   Indicator: params {a, b, height}, `height` on nodes in [a, b].
/// The half-bump datum takes a profile and is a separate overload.
inline Field initial_datum(DatumKind kind, const std::vector<double>& params,
                           const Grid& g) {
  validate_grid(g);
  Field f;
  f.grid = g;
  f.values.assign(g.size(), 0.0);
  if (kind == DatumKind::HalfBump)
    throw std::invalid_argument(
        "initial_datum: the half-bump overload takes a sampled profile");
  if (params.size() != 3)
    throw std::invalid_argument("initial_datum: expected three parameters");
  const double height = params[2];
  if (!(height >= 0.0))
    throw std::invalid_argument("initial_datum: height must be nonnegative");
  if (kind == DatumKind::Bump) {
    const double center = params[0], width = params[1];
    if (!(width > 0.0))
      throw std::invalid_argument("initial_datum: bump width must be positive");
    detail::require_support_inside(center - width / 2.0, center + width / 2.0,
                                   g, "bump");
    for (long i = 0; i < g.size(); ++i) {
      const double s = (g.x(i) - center) / width;
      if (std::abs(s) < 0.5) {
        const double c = std::cos(std::numbers::pi * s);
        f.values[i] = height * c * c;
      }
    }
  } else if (kind == DatumKind::Plateau) {
    const double a = params[0], L = params[1];
    if (!(L > 2.0))
      throw std::invalid_argument(
          "initial_datum: plateau length must exceed the two unit ramps");
    detail::require_support_inside(a, a + L, g, "plateau");
    for (long i = 0; i < g.size(); ++i) {
      const double s = g.x(i) - a;
      if (s <= 0.0 || s >= L) continue;
      f.values[i] = height * std::min({1.0, s, L - s});
    }
  } else {  // Indicator
    const double a = params[0], b = params[1];
    if (!(a < b))
      throw std::invalid_argument("initial_datum: indicator needs a < b");
    detail::require_support_inside(a, b, g, "indicator");
    for (long i = 0; i < g.size(); ++i)
      if (g.x(i) >= a && g.x(i) <= b) f.values[i] = height;
  }
  return f;
}

/// Sample a translated compactly supported profile (a half-bump from
/// construct_half_bump) as the datum: u0(x) = psi(x - x0).
inline Field initial_datum(const StationaryProfile& psi, double x0,
                           const Grid& g) {
  validate_grid(g);
  if (psi.x.size() < 2)
    throw std::invalid_argument("initial_datum: profile has no samples");
  const double R = psi.x.back();
  detail::require_support_inside(x0 - R, x0 + R, g, "half-bump datum");
  const double hp = psi.x[1] - psi.x[0];
  Field f;
  f.grid = g;
  f.t = 0.0;
  f.values.assign(g.size(), 0.0);
  for (long i = 0; i < g.size(); ++i) {
    const double s = g.x(i) - x0;
    if (std::abs(s) >= R) continue;
    const double pos = (s - psi.x.front()) / hp;
    const auto j = std::min<std::size_t>(static_cast<std::size_t>(pos),
                                         psi.x.size() - 2);
    const double w = pos - static_cast<double>(j);
    f.values[i] =
        std::max(0.0, (1.0 - w) * psi.u[j] + w * psi.u[j + 1]);
  }
  return f;
}

// ---------------------------------------------------------------------------
// Stepping
// ---------------------------------------------------------------------------

/// Interface value from the already-updated neighbors: the one-sided slope
/// matching (u_x(0-) = sigma u_x(0+)) discretized at first or second order
/// and solved for u(0).  Order 1 is a convex combination of u_{-1}, u_{+1},
/// which keeps the whole scheme monotone.
inline double interface_value(double uL2, double uL1, double uR1, double uR2,
                              const PatchModel& m, int order = 1,
                              double /*h*/ = 1.0) {
  if (order == 1) return (uL1 + m.sigma * uR1) / (1.0 + m.sigma);
  if (order == 2)
    return (4.0 * uL1 - uL2 + m.sigma * (4.0 * uR1 - uR2)) /
           (3.0 * (1.0 + m.sigma));
  throw std::invalid_argument("interface_value: order must be 1 or 2");
}

namespace detail {

/// Largest |f'| sampled over [0, bound].
inline double sampled_lipschitz(const Reaction& f, double bound) {
  const int n = 4096;
  double worst = 0.0;
  for (int i = 0; i <= n; ++i)
    worst = std::max(worst, std::abs(deriv(f, bound * i / n)));
  return worst;
}

}  // namespace detail

/// Largest stable time step: the explicit update at a node must be a
/// monotone function of the previous values, which requires
/// dt * (2 max(d)/h^2 + Lip) <= 1 with Lip the sampled reaction Lipschitz
/// constant over the solution's amplitude range [0, amplitude_bound].
inline double cfl(const PatchModel& m, double h, double amplitude_bound) {
  validate_model(m);
  if (!(h > 0.0) || !(amplitude_bound > 0.0))
    throw std::invalid_argument("cfl: h and amplitude bound must be positive");
  const double lip = std::max(detail::sampled_lipschitz(m.f1, amplitude_bound),
                              detail::sampled_lipschitz(m.f2, amplitude_bound));
  return 1.0 / (2.0 * std::max(m.d1, m.d2) / (h * h) + lip);
}

namespace detail {

/// Clip tolerance for negative undershoots; anything lower aborts.
constexpr double kNegativeClip = -1e-12;

inline long police_value(double& v) {
  if (v >= 0.0) return 0;
  if (!std::isfinite(v))
    throw numeric_error("time step produced a non-finite value");
  if (v < kNegativeClip)
    throw numeric_error("time step undershot zero beyond the clip tolerance");
  v = 0.0;
  return 1;
}

/// One explicit step: bulk update on each patch (homogeneous Neumann at the
/// truncation ends), then the algebraic interface reassignment.  Returns the
/// number of clipped nodes.
inline long step_inplace(const PatchModel& m, const std::vector<double>& cur,
                         std::vector<double>& next, long ni, double h,
                         double dt, int order) {
  const long N = static_cast<long>(cur.size());
  const double c1 = m.d1 * dt / (h * h), c2 = m.d2 * dt / (h * h);
  long clips = 0;
  next[0] = cur[0] + 2.0 * c1 * (cur[1] - cur[0]) + dt * eval(m.f1, cur[0]);
  clips += police_value(next[0]);
  for (long i = 1; i < ni; ++i) {
    next[i] = cur[i] + c1 * (cur[i - 1] - 2.0 * cur[i] + cur[i + 1]) +
              dt * eval(m.f1, cur[i]);
    clips += police_value(next[i]);
  }
  for (long i = ni + 1; i < N - 1; ++i) {
    next[i] = cur[i] + c2 * (cur[i - 1] - 2.0 * cur[i] + cur[i + 1]) +
              dt * eval(m.f2, cur[i]);
    clips += police_value(next[i]);
  }
  next[N - 1] = cur[N - 1] + 2.0 * c2 * (cur[N - 2] - cur[N - 1]) +
                dt * eval(m.f2, cur[N - 1]);
  clips += police_value(next[N - 1]);
  next[ni] = interface_value(next[ni - 2], next[ni - 1], next[ni + 1],
                             next[ni + 2], m, order, h);
  clips += police_value(next[ni]);
  return clips;
}

}  // namespace detail

/// One explicit step of size dt (which must respect the stability limit).
inline Field step(const PatchModel& m, const Field& f, double dt,
                  int order = 1) {
  validate_model(m);
  validate_field(f);
  double amp = std::max(m.f1.K, m.f2.K);
  for (double v : f.values) amp = std::max(amp, v);
  if (!(dt > 0.0) || dt > cfl(m, f.grid.h, amp) * (1.0 + 1e-9))
    throw numeric_error("step: dt exceeds the stability limit");
  Field out = f;
  out.t = f.t + dt;
  out.negative_clips += detail::step_inplace(m, f.values, out.values,
                                             f.grid.n_left, f.grid.h, dt,
                                             order);
  return out;
}

/// Options for solve().  `amplitude_bound`, when given, widens the range the
/// stability limit is computed over — passing the same value to two runs
/// makes them share an identical dt sequence, which ordered-pair comparisons
/// rely on.
struct SolveOptions {
  std::vector<double> output_times;  ///< strictly increasing, in [0, T]
  bool expand = true;
  int interface_order = 1;
  std::optional<double> amplitude_bound;
};

namespace detail {

/// True when any of the `margin` outermost values on the given side is
/// meaningfully nonzero.
inline bool edge_active(const std::vector<double>& v, bool left, long margin) {
  const long N = static_cast<long>(v.size());
  const long n = std::min(margin, N);
  double worst = 0.0;
  for (long k = 0; k < n; ++k)
    worst = std::max(worst, v[left ? k : N - 1 - k]);
  return worst > 1e-8;
}

}  // namespace detail

/// Integrate the two-patch problem from a nonnegative datum up to time T,
/// recording snapshots at the requested output times (default: only T).
/// With expand = true the domain grows by 25% on a side whenever the
/// solution reaches its 10 outermost nodes, so the truncation boundary
/// never influences the recorded solution.
inline Trajectory solve(const PatchModel& m, const Field& u0, double T,
                        const SolveOptions& opts = {}) {
  validate_model(m);
  validate_field(u0);
  if (!(T > 0.0)) throw std::invalid_argument("solve: T must be positive");
  for (double v : u0.values)
    if (!(v >= 0.0) || !std::isfinite(v))
      throw std::invalid_argument("solve: initial datum must be nonnegative");
  std::vector<double> times = opts.output_times;
  if (times.empty()) times = {T};
  for (std::size_t k = 0; k < times.size(); ++k)
    if (times[k] < 0.0 || times[k] > T * (1.0 + 1e-12) ||
        (k > 0 && times[k] <= times[k - 1]))
      throw std::invalid_argument(
          "solve: output times must be strictly increasing within [0, T]");
  if (opts.interface_order != 1 && opts.interface_order != 2)
    throw std::invalid_argument("solve: interface order must be 1 or 2");

  double amp = std::max(m.f1.K, m.f2.K);
  for (double v : u0.values) amp = std::max(amp, v);
  if (opts.amplitude_bound) amp = std::max(amp, *opts.amplitude_bound);
  const double dt0 = 0.9 * cfl(m, u0.grid.h, amp);
  const double h = u0.grid.h;

  Trajectory traj;
  traj.model = m;
  Grid grid = u0.grid;
  std::vector<double> cur = u0.values, next(cur.size());
  double t = 0.0;
  long clips = 0;

  for (double target : times) {
    while (t < target - 1e-12 * std::max(1.0, target)) {
      const double dt = std::min(dt0, target - t);
      clips += detail::step_inplace(m, cur, next, grid.n_left, h, dt,
                                    opts.interface_order);
      cur.swap(next);
      t += dt;
      if (opts.expand) {
        if (detail::edge_active(cur, true, 10)) {
          const long extra = std::max<long>(1, grid.n_left / 4);
          cur.insert(cur.begin(), extra, 0.0);
          next.assign(cur.size(), 0.0);
          grid.n_left += extra;
        }
        if (detail::edge_active(cur, false, 10)) {
          const long extra = std::max<long>(1, grid.n_right / 4);
          cur.insert(cur.end(), extra, 0.0);
          next.assign(cur.size(), 0.0);
          grid.n_right += extra;
        }
      }
    }
    t = target;
    Field snap;
    snap.grid = grid;
    snap.t = target;
    snap.values = cur;
    snap.negative_clips = clips;
    traj.snapshots.push_back(std::move(snap));
  }
  return traj;
}

// ---------------------------------------------------------------------------
// Off-support decay check
// ---------------------------------------------------------------------------

/// Worst ratio of the solution to the heat-kernel tail estimate
///   u(t,x) <= M e^{Gt} e^{-(x-L2)^2/(4 d2 t)}   for x >= L2 (mirrored on
/// the left with d1 and -L1), where [-L1, L2] hulls the support of u0,
/// M = max(K1, K2, max u0) and G bounds f_i(s)/s over the amplitude range.
/// A return value <= 1 + eps certifies the bound within factor 1 + eps.
inline double gaussian_bound_excess(const Trajectory& traj, const Field& u0) {
  validate_field(u0);
  const PatchModel& m = traj.model;
  double L1 = 0.0, L2 = 0.0, M = std::max(m.f1.K, m.f2.K);
  bool seen = false;
  for (long i = 0; i < u0.grid.size(); ++i) {
    if (u0.values[i] > 0.0) {
      const double x = u0.grid.x(i);
      if (!seen) L1 = -x, L2 = x, seen = true;
      L1 = std::max(L1, -x);
      L2 = std::max(L2, x);
    }
    M = std::max(M, u0.values[i]);
  }
  if (!seen) return 0.0;
  L1 = std::max(L1, 0.0);
  L2 = std::max(L2, 0.0);
  double growth = 0.0;  // largest f(s)/s over (0, M], either patch
  const int n = 4096;
  for (int i = 1; i <= n; ++i) {
    const double s = M * i / n;
    growth = std::max({growth, eval(m.f1, s) / s, eval(m.f2, s) / s});
  }
  double worst = 0.0;
  for (const Field& f : traj.snapshots) {
    if (!(f.t > 0.0)) continue;
    for (long i = 0; i < f.grid.size(); ++i) {
      const double v = f.values[i];
      if (v <= 0.0) continue;
      const double x = f.grid.x(i);
      double expo;
      if (x >= L2)
        expo = growth * f.t - (x - L2) * (x - L2) / (4.0 * m.d2 * f.t);
      else if (x <= -L1)
        expo = growth * f.t - (x + L1) * (x + L1) / (4.0 * m.d1 * f.t);
      else
        continue;
      worst = std::max(worst, v / (M * std::exp(expo)));
    }
  }
  return worst;
}

}  // namespace patchfront
