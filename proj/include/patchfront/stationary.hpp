#pragma once

// Stationary solutions of the two-patch problem, built from their
// first-integral characterizations: the connection K1 -> 0 (with an optional
// interior bump), the connection K1 -> K2, and the compactly supported
// half-bump.  Interface values are roots of explicit integral equations;
// profiles are integrated branch-by-branch with a per-step projection onto
// the conserved energy level, which suppresses the exponential error growth
// of a plain marching scheme near the saddle equilibria.

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <vector>

#include <patchfront/numerics.hpp>
#include <patchfront/reaction.hpp>

namespace patchfront {

/// Two half-line diffusivities, the interface slope ratio, and one reaction
/// per patch.  Patch 1 occupies x < 0, patch 2 occupies x > 0.
struct PatchModel {
  double d1 = 1.0;
  double d2 = 1.0;
  double sigma = 1.0;
  Reaction f1 = logistic(1.0);
  Reaction f2 = logistic(1.0);
};

inline void validate_model(const PatchModel& m) {
  if (!(m.d1 > 0.0) || !(m.d2 > 0.0) || !(m.sigma > 0.0))
    throw std::invalid_argument("PatchModel: d1, d2, sigma must be positive");
}

enum class ProfileKind { ConnKtoZero, ConnKtoK, HalfBump };

/// A sampled stationary profile.  `xi` is the interface value u(0); the
/// slopes are the one-sided derivatives at 0 and satisfy
/// slope_left = sigma * slope_right.
struct StationaryProfile {
  ProfileKind kind = ProfileKind::ConnKtoZero;
  double xi = 0.0;
  double slope_left = 0.0;
  double slope_right = 0.0;
  double left_limit = 0.0;
  double right_limit = 0.0;
  std::vector<double> x;  ///< uniform per side, node at 0
  std::vector<double> u;
};

/// Which sufficient condition certified existence of the K1 -> 0 connection.
enum class ExistenceRule {
  NegativeRightMass,              ///< mass(f2, 0, K2) < 0
  BalancedRightMassOrderedCaps,   ///< mass = 0 and K1 < K2
  PositiveRightMassCapBelowBalance,  ///< mass > 0 and K1 <= balanced threshold
  RootOutsideGuarantee,           ///< root found, no sufficient condition held
  NoRoot,
};

struct ExistenceVerdict {
  bool exists = false;
  ExistenceRule rule = ExistenceRule::NoRoot;
  std::vector<double> roots;  ///< admissible interface values, increasing
};

namespace detail {

/// Signed integral of f over [a, b] (closed form where available).
inline double signed_mass(const Reaction& f, double a, double b) {
  return a <= b ? mass(f, a, b) : -mass(f, b, a);
}

/// F(u) = int_0^u f, valid for every reaction kind.
inline double energy_level(const Reaction& f, double u) {
  if (f.kind == ReactionKind::Custom) return signed_mass(f, 0.0, u);
  return antiderivative(f, u);
}

/// Integral of f over the short span from u to an anchor sitting on the
/// branch's energy level.  Computed without forming the antiderivative
/// difference, which cancels catastrophically near equilibria: quadratic and
/// cubic reactions use one Simpson panel (exact), customs a composite rule
/// whose relative error vanishes with the span.
inline double anchored_mass(const Reaction& f, double u, double anchor) {
  const double len = anchor - u;
  if (f.kind == ReactionKind::Custom) {
    constexpr int n = 32;
    const double h = len / n;
    double acc = eval(f, u) + eval(f, anchor);
    for (int i = 1; i < n; ++i) acc += eval(f, u + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
  }
  return len / 6.0 *
         (eval(f, u) + 4.0 * eval(f, 0.5 * (u + anchor)) + eval(f, anchor));
}

/// One branch's conserved-energy data: (d/2) u'^2 + F(u) = E along the
/// trajectory, with E = F(anchor) for every anchor in the list.
struct BranchEnergy {
  const Reaction* f = nullptr;
  double d = 1.0;
  double E = 0.0;                 ///< energy via the closed antiderivative
  std::array<double, 2> anchors{0.0, 0.0};
  int n_anchors = 0;
  double scale = 1.0;

  /// (2/d)(E - F(u)), switching to anchored quadrature near the anchors.
  double slope_sq(double u) const {
    for (int i = 0; i < n_anchors; ++i)
      if (std::abs(u - anchors[i]) < 0.1 * scale)
        return 2.0 / d * anchored_mass(*f, u, anchors[i]);
    if (f->kind == ReactionKind::Custom)
      return 2.0 / d * integrate(f->eval_fn, u, anchors[0], 1e-12);
    return 2.0 / d * (E - antiderivative(*f, u));
  }
};

/// March one branch outward from (u0, v0) over n uniform steps, storing u at
/// every node.  After each step the slope is re-imposed from the first
/// integral (the instability of the saddle approach lives entirely in the
/// energy-off direction), and once within snapping distance of the declared
/// limit the branch is pinned to it exactly.
inline std::vector<double> march_branch(const Reaction& f, double d, double u0,
                                        double v0, const BranchEnergy& energy,
                                        std::optional<double> limit, long n,
                                        double h, double blowup_cap) {
  std::vector<double> out;
  out.reserve(n + 1);
  out.push_back(u0);
  std::array<double, 2> y{u0, v0};
  auto rhs = [&f, d](const std::array<double, 2>& s) {
    return std::array<double, 2>{s[1], -eval(f, s[0]) / d};
  };
  // The pin inserts a value jump of up to snap_u at the junction node, which
  // a second-difference residual sees as d*snap_u/h^2 — keep it well under
  // any plausible residual budget.  Branches whose limit is O(1) or larger
  // stall on the floating-point staircase before reaching the threshold;
  // that tail is a smooth freeze and needs no pin.
  const double snap_u = 1e-15 * energy.scale;
  const double snap_v =
      snap_u * (1.0 + std::sqrt(std::abs(deriv(f, limit.value_or(0.0))) / d));
  bool snapped =
      limit && std::abs(y[0] - *limit) < snap_u && std::abs(y[1]) < snap_v;
  for (long i = 0; i < n; ++i) {
    if (!snapped) {
      y = rk4_step(y, h, rhs);
      if (!std::isfinite(y[0]) || std::abs(y[0]) > blowup_cap)
        throw numeric_error(
            "stationary branch: trajectory is not a connection");
      const double sq = std::max(0.0, energy.slope_sq(y[0]));
      y[1] = (y[1] > 0.0 ? 1.0 : (y[1] < 0.0 ? -1.0 : 0.0)) * std::sqrt(sq);
      if (limit && std::abs(y[0] - *limit) < snap_u && std::abs(y[1]) < snap_v)
        snapped = true;
    }
    out.push_back(snapped ? *limit : y[0]);
  }
  return out;
}

/// Interface-value equation for the K1 -> 0 connection: slope matching
/// squared, G(xi) = int_xi^K1 f1 + (d1 sigma^2/d2) int_0^xi f2.
inline double conn_zero_mismatch(const PatchModel& m, double xi) {
  return signed_mass(m.f1, xi, m.f1.K) +
         m.d1 * m.sigma * m.sigma / m.d2 * signed_mass(m.f2, 0.0, xi);
}

/// Interface-value equation for the K1 -> K2 connection:
/// H(xi) = int_xi^K1 f1 - (d1 sigma^2/d2) int_xi^K2 f2.
inline double conn_kk_mismatch(const PatchModel& m, double xi) {
  return signed_mass(m.f1, xi, m.f1.K) -
         m.d1 * m.sigma * m.sigma / m.d2 * signed_mass(m.f2, xi, m.f2.K);
}

}  // namespace detail

/// Default truncation half-length: 40 e-foldings of the slowest linearized
/// decay rate among the three relevant equilibria (K1 left; 0 and K2 right).
inline double default_tail_length(const PatchModel& m) {
  validate_model(m);
  const double r1 = std::sqrt(std::abs(deriv(m.f1, m.f1.K)) / m.d1);
  const double r2 = std::sqrt(std::abs(deriv(m.f2, 0.0)) / m.d2);
  const double r3 = std::sqrt(std::abs(deriv(m.f2, m.f2.K)) / m.d2);
  return 40.0 / std::min({r1, r2, r3});
}

/// Default marching step: 1e-3 of the shorter of unit length and the
/// steepest reaction length scale.
inline double default_step(const PatchModel& m) {
  validate_model(m);
  double fp = 0.0;
  for (const Reaction* f : {&m.f1, &m.f2})
    for (int i = 0; i <= 10000; ++i)
      fp = std::max(fp, std::abs(deriv(*f, f->K * i / 10000.0)));
  return 1e-3 * std::min(1.0, 1.0 / std::sqrt(fp));
}

/// Find every admissible interface value of the K1 -> 0 connection and
/// report which sufficient existence condition (if any) certified it.
/// Requires f1 with positive mass (single-stable-state or bistable) and
/// bistable f2.  The admissible range depends on the sign of mass(f2):
/// (0, K1) when negative, (0, min(K1,K2)) when balanced, (0, theta*] when
/// positive, where theta* is f2's balanced threshold.
inline ExistenceVerdict solve_interface_value_U(const PatchModel& m) {
  validate_model(m);
  const auto c1 = classify(m.f1);
  const auto c2 = classify(m.f2);
  if (c2.verdict != ReactionVerdict::Bistable)
    throw std::invalid_argument(
        "solve_interface_value_U: right reaction must be bistable");
  const bool f1_ok =
      c1.verdict == ReactionVerdict::KPP ||
      (c1.verdict == ReactionVerdict::Bistable &&
       c1.mass_sign == MassSign::Positive);
  if (!f1_ok)
    throw std::invalid_argument(
        "solve_interface_value_U: left reaction must have positive mass");

  const double K1 = m.f1.K, K2 = m.f2.K;
  auto G = [&m](double xi) { return detail::conn_zero_mismatch(m, xi); };

  double hi;
  ExistenceRule rule = ExistenceRule::RootOutsideGuarantee;
  std::vector<double> roots;
  switch (c2.mass_sign) {
    case MassSign::Negative:
      hi = K1;
      rule = ExistenceRule::NegativeRightMass;
      break;
    case MassSign::Zero:
      hi = std::min(K1, K2);
      if (K1 < K2) rule = ExistenceRule::BalancedRightMassOrderedCaps;
      break;
    case MassSign::Positive: {
      const double ts = theta_star(m.f2);
      hi = ts;
      if (K1 <= ts + 1e-12)
        rule = ExistenceRule::PositiveRightMassCapBelowBalance;
      roots = scan_roots(G, 0.0, ts);
      // endpoint root where both interface integrals vanish (xi = K1 = ts)
      if (std::abs(G(ts)) < 1e-12 &&
          (roots.empty() || std::abs(roots.back() - ts) > 1e-9 * ts))
        roots.push_back(ts);
      break;
    }
  }
  if (c2.mass_sign != MassSign::Positive) roots = scan_roots(G, 0.0, hi);

  // roots at the origin are not interface values
  while (!roots.empty() && roots.front() < 1e-12 * std::max(K1, 1.0))
    roots.erase(roots.begin());

  ExistenceVerdict v;
  v.roots = roots;
  v.exists = !roots.empty();
  if (!v.exists) {
    if (rule != ExistenceRule::RootOutsideGuarantee)
      throw theorem_violation(
          "solve_interface_value_U: existence condition holds but no "
          "interface value was found");
    v.rule = ExistenceRule::NoRoot;
  } else {
    v.rule = rule;
  }
  return v;
}

/// Every interface value of the monotone K1 -> K2 connection in
/// (min(K1,K2), max(K1,K2)); [K1] when the caps coincide.  Requires
/// mass(f2) >= 0 or two single-stable-state reactions.
inline std::vector<double> solve_interface_value_V(const PatchModel& m) {
  validate_model(m);
  const auto c1 = classify(m.f1);
  const auto c2 = classify(m.f2);
  const bool both_kpp = c1.verdict == ReactionVerdict::KPP &&
                        c2.verdict == ReactionVerdict::KPP;
  if (!both_kpp && c2.mass_sign == MassSign::Negative)
    throw std::invalid_argument(
        "solve_interface_value_V: right reaction loses mass; no such "
        "connection exists");
  const double K1 = m.f1.K, K2 = m.f2.K;
  if (std::abs(K1 - K2) < 1e-14 * std::max(K1, K2)) return {K1};

  auto H = [&m](double xi) { return detail::conn_kk_mismatch(m, xi); };
  auto roots = scan_roots(H, std::min(K1, K2), std::max(K1, K2));
  const double span = std::abs(K1 - K2);
  while (!roots.empty() && std::abs(roots.front() - std::min(K1, K2)) <
                               1e-12 * span)
    roots.erase(roots.begin());
  while (!roots.empty() &&
         std::abs(roots.back() - std::max(K1, K2)) < 1e-12 * span)
    roots.pop_back();
  if (roots.empty())
    throw theorem_violation(
        "solve_interface_value_V: hypotheses hold but no interface value "
        "was found");
  return roots;
}

namespace detail {

/// Shared sampling driver: integrate the two branches from the interface and
/// glue them on the uniform grid j*h, j = -n..n.
inline StationaryProfile assemble_two_branch(
    const PatchModel& m, ProfileKind kind, double xi, double slope_left,
    double slope_right, const BranchEnergy& e_left,
    const BranchEnergy& e_right, double left_limit, double right_limit,
    double L_tail, double h) {
  if (!(L_tail > 0.0) || !(h > 0.0) || h >= L_tail)
    throw std::invalid_argument("stationary profile: need 0 < h < L_tail");
  const long n = static_cast<long>(std::ceil(L_tail / h - 1e-9));
  const double cap = 10.0 * std::max(m.f1.K, m.f2.K);
  // the left branch runs in the mirrored coordinate, where the equation is
  // unchanged and the initial slope flips sign
  const auto left =
      march_branch(m.f1, m.d1, xi, -slope_left, e_left, left_limit, n, h, cap);
  const auto right = march_branch(m.f2, m.d2, xi, slope_right, e_right,
                                  right_limit, n, h, cap);
  StationaryProfile p;
  p.kind = kind;
  p.xi = xi;
  p.slope_left = slope_left;
  p.slope_right = slope_right;
  p.left_limit = left_limit;
  p.right_limit = right_limit;
  p.x.resize(2 * n + 1);
  p.u.resize(2 * n + 1);
  for (long j = -n; j <= n; ++j) {
    p.x[j + n] = j * h;
    p.u[j + n] = j <= 0 ? left[-j] : right[j];
  }
  return p;
}

}  // namespace detail

/// Sample the K1 -> 0 connection through the interface value xi (a root from
/// solve_interface_value_U) on [-L_tail, L_tail] with step h.
inline StationaryProfile construct_U(const PatchModel& m, double xi,
                                     double L_tail, double h) {
  validate_model(m);
  const double K1 = m.f1.K;
  const double int_right = detail::signed_mass(m.f2, 0.0, xi);
  const double int_left = detail::signed_mass(m.f1, xi, K1);
  if (int_right > 1e-10 || int_left < -1e-10)
    throw std::invalid_argument(
        "construct_U: xi is not an admissible interface value");
  // Gate on the matching equation itself: comparing square-rooted slopes
  // would amplify last-digit rounding of the integrals into ~1e-8 noise at
  // degenerate roots where both slopes vanish.
  const double scale = std::max({m.f1.K, m.f2.K, 1.0});
  if (std::abs(detail::conn_zero_mismatch(m, xi)) >
      1e-9 * scale * scale * scale * scale)
    throw std::invalid_argument(
        "construct_U: xi does not satisfy the slope-matching equation");
  const double sgn = xi > K1 ? 1.0 : (xi < K1 ? -1.0 : 0.0);
  double slope_right =
      sgn * std::sqrt(std::max(0.0, -2.0 / m.d2 * int_right));
  double slope_left = sgn * std::sqrt(std::max(0.0, 2.0 / m.d1 * int_left));
  // square-rooted rounding dust; report degenerate slopes as exact zeros
  if (std::abs(slope_left) < 1e-7 * scale) slope_left = 0.0;
  if (std::abs(slope_right) < 1e-7 * scale) slope_right = 0.0;

  detail::BranchEnergy e_left{&m.f1, m.d1, detail::energy_level(m.f1, K1),
                              {K1, 0.0}, 1, std::max(m.f1.K, 1.0)};
  detail::BranchEnergy e_right{&m.f2, m.d2, 0.0, {0.0, 0.0}, 1,
                               std::max(m.f2.K, 1.0)};
  if (classify(m.f2).mass_sign == MassSign::Positive) {
    e_right.anchors[1] = theta_star(m.f2);  // bump turning value
    e_right.n_anchors = 2;
  }
  return detail::assemble_two_branch(m, ProfileKind::ConnKtoZero, xi,
                                     slope_left, slope_right, e_left, e_right,
                                     K1, 0.0, L_tail, h);
}

/// Sample the monotone K1 -> K2 connection through xi (a root from
/// solve_interface_value_V) on [-L_tail, L_tail] with step h.
inline StationaryProfile construct_V(const PatchModel& m, double xi,
                                     double L_tail, double h) {
  validate_model(m);
  const double K1 = m.f1.K, K2 = m.f2.K;
  const double int_left = detail::signed_mass(m.f1, xi, K1);
  const double int_right = detail::signed_mass(m.f2, xi, K2);
  if (int_left < -1e-10 || int_right < -1e-10)
    throw std::invalid_argument(
        "construct_V: xi is not an admissible interface value");
  const double scale = std::max({K1, K2, 1.0});
  if (std::abs(detail::conn_kk_mismatch(m, xi)) >
      1e-9 * scale * scale * scale * scale)
    throw std::invalid_argument(
        "construct_V: xi does not satisfy the slope-matching equation");
  const double sgn = xi > K1 ? 1.0 : (xi < K1 ? -1.0 : 0.0);
  double slope_left = sgn * std::sqrt(std::max(0.0, 2.0 / m.d1 * int_left));
  double slope_right = sgn * std::sqrt(std::max(0.0, 2.0 / m.d2 * int_right));
  if (std::abs(slope_left) < 1e-7 * scale) slope_left = 0.0;
  if (std::abs(slope_right) < 1e-7 * scale) slope_right = 0.0;

  detail::BranchEnergy e_left{&m.f1, m.d1, detail::energy_level(m.f1, K1),
                              {K1, 0.0}, 1, std::max(K1, 1.0)};
  detail::BranchEnergy e_right{&m.f2, m.d2, detail::energy_level(m.f2, K2),
                               {K2, 0.0}, 1, std::max(K2, 1.0)};
  return detail::assemble_two_branch(m, ProfileKind::ConnKtoK, xi, slope_left,
                                     slope_right, e_left, e_right, K1, K2,
                                     L_tail, h);
}

/// Compactly supported even hump of the right patch equation: apex psi0 at
/// x = 0, descending to 0 at x = +-R, where R is the first-integral
/// quadrature R = int_0^psi0 du / sqrt((2/d2) int_u^psi0 f2).  Requires
/// mass(f2) > 0 and psi0 strictly between the balanced threshold and K2.
inline StationaryProfile construct_half_bump(const Reaction& f2, double d2,
                                             double psi0, double h) {
  if (!(d2 > 0.0) || !(h > 0.0))
    throw std::invalid_argument("construct_half_bump: d2, h must be positive");
  const auto c2 = classify(f2);
  if (c2.verdict != ReactionVerdict::Bistable ||
      c2.mass_sign != MassSign::Positive)
    throw std::invalid_argument(
        "construct_half_bump: reaction must be bistable with positive mass");
  const double ts = theta_star(f2);
  const double K2 = f2.K;
  if (!(psi0 > ts + 1e-9 * K2) || !(psi0 < K2 - 1e-9 * K2))
    throw std::invalid_argument(
        "construct_half_bump: apex must lie strictly between the balanced "
        "threshold and the carrying capacity");

  detail::BranchEnergy energy{&f2, d2, detail::energy_level(f2, psi0),
                              {psi0, 0.0}, 1, std::max(K2, 1.0)};

  // Support half-width by quadrature; u = psi0 - v^2 removes the apex-side
  // square-root singularity.
  const double v_top = std::sqrt(psi0);
  auto integrand = [&](double v) {
    if (v < 1e-12) return 2.0 / std::sqrt(2.0 / d2 * eval(f2, psi0));
    const double sq = energy.slope_sq(psi0 - v * v);
    return 2.0 * v / std::sqrt(sq);
  };
  const double R = integrate(integrand, 0.0, v_top, 1e-12);

  // Raw descent from the apex (a regular point: psi'' = -f2(psi0)/d2 < 0).
  std::vector<double> raw_u, raw_v;
  {
    std::array<double, 2> y{psi0, 0.0};
    auto rhs = [&f2, d2](const std::array<double, 2>& s) {
      return std::array<double, 2>{s[1], -eval(f2, s[0]) / d2};
    };
    raw_u.push_back(y[0]);
    raw_v.push_back(y[1]);
    const long cap = static_cast<long>(4.0 * R / h) + 16;
    for (long i = 0; i < cap && y[0] > -0.1 * K2; ++i) {
      y = rk4_step(y, h, rhs);
      const double sq = std::max(0.0, energy.slope_sq(y[0]));
      if (y[0] < psi0)  // below the apex the descent has a definite sign
        y[1] = -std::sqrt(sq);
      raw_u.push_back(y[0]);
      raw_v.push_back(y[1]);
      if (y[0] < 0.0) break;
    }
  }
  if (raw_u.back() >= 0.0)
    throw numeric_error("construct_half_bump: descent did not reach zero");

  // Locate the foot on the quintic interpolant of the raw pass, then
  // resample onto a uniform grid whose last node is exactly the foot.
  auto curv = [&](double u_v) { return -eval(f2, u_v) / d2; };
  auto hermite_at = [&](std::size_t i, double t) {
    return hermite5(t, h, raw_u[i], raw_v[i], curv(raw_u[i]), raw_u[i + 1],
                    raw_v[i + 1], curv(raw_u[i + 1]));
  };
  const std::size_t jf = raw_u.size() - 2;  // foot straddles the last step
  double t_lo = 0.0, t_hi = h;
  for (int it = 0; it < 80; ++it) {
    const double t_mid = 0.5 * (t_lo + t_hi);
    (hermite_at(jf, t_mid) > 0.0 ? t_lo : t_hi) = t_mid;
  }
  const double R_ode = jf * h + 0.5 * (t_lo + t_hi);
  if (std::abs(R_ode - R) > 1e-6 * std::max(1.0, R))
    throw numeric_error(
        "construct_half_bump: quadrature and descent disagree on the "
        "support width");

  const long n = static_cast<long>(std::ceil(R_ode / h - 1e-9));
  const double hh = R_ode / n;
  StationaryProfile p;
  p.kind = ProfileKind::HalfBump;
  p.xi = psi0;
  p.slope_left = 0.0;
  p.slope_right = 0.0;
  p.left_limit = 0.0;
  p.right_limit = 0.0;
  p.x.resize(2 * n + 1);
  p.u.resize(2 * n + 1);
  for (long j = 0; j <= n; ++j) {
    const double xj = j * hh;
    auto i = static_cast<std::size_t>(xj / h);
    if (i + 1 >= raw_u.size()) i = raw_u.size() - 2;
    double val = j == 0 ? psi0 : hermite_at(i, xj - i * h);
    if (j == n) val = 0.0;  // foot: the root just solved, clamped exactly
    p.x[n + j] = xj;
    p.u[n + j] = val;
    p.x[n - j] = -xj;
    p.u[n - j] = val;  // even extension
  }
  return p;
}

}  // namespace patchfront
