#pragma once

// Reaction terms for the two-patch model: the closed-form logistic and
// cubic families plus user-supplied custom nonlinearities, with mass
// integrals, growth-type classification, the balanced threshold θ*, and
// the density rescaling s ↦ k·f(s/k).

#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "numerics.hpp"

namespace patchfront {

enum class ReactionKind { LogisticKPP, CubicBistable, Custom };
enum class MassSign { Negative, Zero, Positive };
enum class ReactionVerdict { KPP, Bistable, Neither };

/// Dead-band below which a mass integral counts as exactly balanced.
inline constexpr double kMassDeadBand = 1e-12;

/// Number of sample points used by the grid-sampled hypothesis checks.
inline constexpr int kHypothesisGridPoints = 10000;

/// A reaction term f with f(0)=f(K)=0.
///
/// Closed forms: LogisticKPP is f(u)=u(1-u/K); CubicBistable is
/// f(u)=u(K-u)(u-theta) with 0<theta<K. Custom reactions carry callables
/// plus a declared constant lipschitz_K with f(s) <= lipschitz_K*s for all
/// s >= 0 (closed-form kinds compute it). Immutable after construction.
struct Reaction {
  ReactionKind kind = ReactionKind::LogisticKPP;
  double K = 1.0;
  std::optional<double> theta;  // unstable zero, bistable kinds only
  std::function<double(double)> eval_fn;   // Custom only
  std::function<double(double)> deriv_fn;  // Custom only
  double lipschitz_K = 1.0;
};

inline double eval(const Reaction& r, double u) {
  switch (r.kind) {
    case ReactionKind::LogisticKPP:
      return u * (1.0 - u / r.K);
    case ReactionKind::CubicBistable:
      return u * (r.K - u) * (u - *r.theta);
    default:
      return r.eval_fn(u);
  }
}

inline double deriv(const Reaction& r, double u) {
  switch (r.kind) {
    case ReactionKind::LogisticKPP:
      return 1.0 - 2.0 * u / r.K;
    case ReactionKind::CubicBistable: {
      const double th = *r.theta;
      return -3.0 * u * u + 2.0 * (r.K + th) * u - r.K * th;
    }
    default:
      return r.deriv_fn(u);
  }
}

namespace detail {

/// Antiderivative (from 0) of the closed-form kinds.
inline double antiderivative(const Reaction& r, double u) {
  if (r.kind == ReactionKind::LogisticKPP)
    return u * u / 2.0 - u * u * u / (3.0 * r.K);
  const double th = *r.theta;
  const double u2 = u * u;
  return -u2 * u2 / 4.0 + (r.K + th) * u2 * u / 3.0 - r.K * th * u2 / 2.0;
}

}  // namespace detail

/// ∫_a^b f(s) ds; closed form for the polynomial kinds, adaptive
/// quadrature (absolute tolerance 1e-12) for Custom.
inline double mass(const Reaction& r, double a, double b) {
  if (a > b) throw std::invalid_argument("mass: requires a <= b");
  if (a == b) return 0.0;
  if (r.kind == ReactionKind::Custom)
    return integrate(r.eval_fn, a, b, 1e-12);
  return detail::antiderivative(r, b) - detail::antiderivative(r, a);
}

inline MassSign mass_sign(const Reaction& r) {
  const double m = mass(r, 0.0, r.K);
  if (std::abs(m) <= kMassDeadBand) return MassSign::Zero;
  return m > 0.0 ? MassSign::Positive : MassSign::Negative;
}

namespace detail {

/// Root of ∫_0^ν f = 0 in (theta, K), assuming positive total mass.
/// Bracketed bisection on the mass itself until |mass| < 1e-12.
inline double balanced_threshold(const Reaction& r) {
  const double th = *r.theta;
  auto g = [&](double nu) { return mass(r, 0.0, nu); };
  double nu = bisect(g, th, r.K, g(th), 1e-12);
  // polish to the floating-point root: the bisection stops ~1e-12/f(nu)
  // short, and downstream slope formulas take square roots of g, which
  // amplifies that residue badly near degenerate configurations
  for (int i = 0; i < 2; ++i) nu -= g(nu) / eval(r, nu);
  return nu;
}

inline bool kpp_checks(const Reaction& r) {
  const double fp0 = deriv(r, 0.0);
  if (!(fp0 > 0.0) || !(deriv(r, r.K) < 0.0)) return false;
  const int n = kHypothesisGridPoints;
  for (int i = 1; i <= n; ++i) {
    const double s = r.K * i / (n + 1.0);
    const double fs = eval(r, s);
    if (!(fs > 0.0)) return false;
    if (fs > fp0 * s + 1e-12) return false;
  }
  return true;
}

inline bool bistable_checks(const Reaction& r) {
  if (!r.theta) return false;
  const double th = *r.theta;
  if (!(th > 0.0 && th < r.K)) return false;
  if (std::abs(eval(r, 0.0)) > 1e-12 || std::abs(eval(r, th)) > 1e-12 ||
      std::abs(eval(r, r.K)) > 1e-12)
    return false;
  if (!(deriv(r, 0.0) < 0.0) || !(deriv(r, th) > 0.0) ||
      !(deriv(r, r.K) < 0.0))
    return false;
  const int n = kHypothesisGridPoints;
  for (int i = 1; i <= n; ++i) {
    const double s = th * i / (n + 1.0);
    if (!(eval(r, s) < 0.0)) return false;
  }
  for (int i = 1; i <= n; ++i) {
    const double s = th + (r.K - th) * i / (n + 1.0);
    if (!(eval(r, s) > 0.0)) return false;
  }
  return true;
}

}  // namespace detail

/// Growth-type classification with the balanced threshold attached when
/// it exists (bistable with strictly positive mass).
struct ReactionClass {
  ReactionVerdict verdict = ReactionVerdict::Neither;
  MassSign mass_sign = MassSign::Zero;
  std::optional<double> theta_star;
};

inline ReactionClass classify(const Reaction& r) {
  ReactionClass c;
  c.mass_sign = mass_sign(r);
  if (detail::kpp_checks(r))
    c.verdict = ReactionVerdict::KPP;
  else if (detail::bistable_checks(r))
    c.verdict = ReactionVerdict::Bistable;
  else
    c.verdict = ReactionVerdict::Neither;
  if (c.verdict == ReactionVerdict::Bistable &&
      c.mass_sign == MassSign::Positive)
    c.theta_star = detail::balanced_threshold(r);
  return c;
}

/// The balanced threshold θ* ∈ (θ,K) with ∫_0^{θ*} f = 0.
/// Requires a bistable reaction with strictly positive mass.
inline double theta_star(const Reaction& r) {
  if (!detail::bistable_checks(r) || mass_sign(r) != MassSign::Positive)
    throw std::domain_error("theta_star: no balanced threshold");
  return detail::balanced_threshold(r);
}

namespace detail {

inline void validate_zeros(const Reaction& r) {
  if (!(r.K > 0.0)) throw std::invalid_argument("reaction: K must be > 0");
  if (std::abs(eval(r, 0.0)) > 1e-12 || std::abs(eval(r, r.K)) > 1e-12)
    throw std::invalid_argument("reaction: f(0)=f(K)=0 violated");
}

inline void validate_lipschitz(const Reaction& r) {
  const int n = kHypothesisGridPoints;
  for (int i = 1; i <= n; ++i) {
    const double s = 2.0 * r.K * i / static_cast<double>(n);
    if (eval(r, s) > r.lipschitz_K * s + 1e-12)
      throw std::invalid_argument(
          "reaction: declared lipschitz_K fails f(s) <= lipschitz_K*s");
  }
}

}  // namespace detail

inline Reaction logistic(double K) {
  Reaction r;
  r.kind = ReactionKind::LogisticKPP;
  r.K = K;
  r.lipschitz_K = 1.0;  // f'(0) of u(1-u/K)
  detail::validate_zeros(r);
  return r;
}

inline Reaction cubic(double K, double theta) {
  Reaction r;
  r.kind = ReactionKind::CubicBistable;
  r.K = K;
  r.theta = theta;
  if (!(K > 0.0) || !(theta > 0.0) || !(theta < K))
    throw std::invalid_argument("cubic: requires 0 < theta < K");
  // max of f(s)/s = (K-s)(s-theta) over its critical point s=(K+theta)/2.
  const double half = (K - theta) / 2.0;
  r.lipschitz_K = half * half;
  detail::validate_zeros(r);
  return r;
}

inline Reaction custom(std::function<double(double)> f,
                       std::function<double(double)> df, double K,
                       double lipschitz_K,
                       std::optional<double> theta = std::nullopt) {
  Reaction r;
  r.kind = ReactionKind::Custom;
  r.K = K;
  r.theta = theta;
  r.eval_fn = std::move(f);
  r.deriv_fn = std::move(df);
  r.lipschitz_K = lipschitz_K;
  if (lipschitz_K < 0.0)
    throw std::invalid_argument("custom: lipschitz_K must be >= 0");
  detail::validate_zeros(r);
  detail::validate_lipschitz(r);
  return r;
}

/// Density rescaling s ↦ k·f(s/k). Closed-form kinds stay in-family with
/// K→kK, θ→kθ (the family's normalized amplitude is kept); Custom kinds
/// get the literal wrapped map, whose Lipschitz constant is unchanged.
inline Reaction rescale(const Reaction& r, double k) {
  if (!(k > 0.0)) throw std::invalid_argument("rescale: k must be > 0");
  switch (r.kind) {
    case ReactionKind::LogisticKPP:
      return logistic(k * r.K);
    case ReactionKind::CubicBistable:
      return cubic(k * r.K, k * *r.theta);
    default: {
      auto f = r.eval_fn, df = r.deriv_fn;
      std::optional<double> th;
      if (r.theta) th = k * *r.theta;
      return custom([f, k](double s) { return k * f(s / k); },
                    [df, k](double s) { return df(s / k); }, k * r.K,
                    r.lipschitz_K, th);
    }
  }
}

// ---------------------------------------------------------------------------
// Config-line serialization: `logistic(K=1)`, `cubic(K=4, theta=1)`.
// ---------------------------------------------------------------------------

namespace detail {

inline std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

inline std::string format_reaction(const Reaction& r) {
  switch (r.kind) {
    case ReactionKind::LogisticKPP:
      return "logistic(K=" + detail::format_real(r.K) + ")";
    case ReactionKind::CubicBistable:
      return "cubic(K=" + detail::format_real(r.K) +
             ", theta=" + detail::format_real(*r.theta) + ")";
    default:
      throw config_error("custom reactions are not serializable");
  }
}

inline Reaction parse_reaction(const std::string& text) {
  auto fail = [&]() -> Reaction {
    throw config_error("cannot parse reaction: '" + text + "'");
  };
  const auto open = text.find('(');
  const auto close = text.rfind(')');
  if (open == std::string::npos || close == std::string::npos || close < open)
    return fail();
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t");
    const auto e = s.find_last_not_of(" \t");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  const std::string name = trim(text.substr(0, open));
  if (!trim(text.substr(close + 1)).empty()) return fail();
  std::optional<double> K, theta;
  const std::string args = text.substr(open + 1, close - open - 1);
  std::size_t start = 0;
  while (start <= args.size() && !trim(args).empty()) {
    const auto comma = args.find(',', start);
    const std::string item = trim(
        args.substr(start, (comma == std::string::npos ? args.size() : comma) - start));
    const auto eq = item.find('=');
    if (eq == std::string::npos) return fail();
    const std::string key = trim(item.substr(0, eq));
    const std::string val = trim(item.substr(eq + 1));
    try {
      std::size_t used = 0;
      const double x = std::stod(val, &used);
      if (used != val.size()) return fail();
      if (key == "K")
        K = x;
      else if (key == "theta")
        theta = x;
      else
        return fail();
    } catch (const std::logic_error&) {
      return fail();
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  try {
    if (name == "logistic" && K && !theta) return logistic(*K);
    if (name == "cubic" && K && theta) return cubic(*K, *theta);
  } catch (const std::invalid_argument& e) {
    throw config_error(std::string("invalid reaction parameters: ") + e.what());
  }
  return fail();
}

}  // namespace patchfront
