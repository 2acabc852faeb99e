#pragma once

// Small numerical toolbox shared by the library: adaptive quadrature,
// bracketed root finding, least-squares line fits, monotone cubic
// interpolation, golden-section minimization, and one-step integrators.
// Self-contained; no external dependencies.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace patchfront {

/// Ill-posed setup detected while parsing configuration or inputs.
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Numerical failure (non-convergence, NaN/Inf, CFL violation, blow-up).
struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A theorem's hypotheses hold but its conclusion failed numerically.
/// Flagged loudly: this signals a bug, not a valid model outcome.
struct theorem_violation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

template <class F>
double simpson_adapt(F& f, double a, double fa, double b, double fb, double m,
                     double fm, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  if (depth <= 0)
    throw numeric_error("adaptive quadrature failed to converge");
  return simpson_adapt(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         simpson_adapt(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature of f over [a,b] to absolute tolerance.
template <class F>
double integrate(F&& f, double a, double b, double abs_tol = 1e-12) {
  if (a == b) return 0.0;
  double sign = 1.0;
  if (a > b) {
    std::swap(a, b);
    sign = -1.0;
  }
  const double m = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fm = f(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return sign *
         detail::simpson_adapt(f, a, fa, b, fb, m, fm, whole, abs_tol, 52);
}

/// Bisection on a bracketing interval [lo,hi] (g(lo)·g(hi) ≤ 0).
/// Stops when |g(mid)| < g_tol or the interval is at floating-point
/// resolution; returns the midpoint of the final bracket.
template <class G>
double bisect(G&& g, double lo, double hi, double g_lo, double g_tol = 1e-12) {
  if (lo > hi) std::swap(lo, hi);
  bool lo_nonpos = (g_lo <= 0.0);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // interval exhausted
    const double gm = g(mid);
    if (std::abs(gm) < g_tol) return mid;
    if ((gm <= 0.0) == lo_nonpos)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

/// Scan [lo,hi] with n uniform cells and bisect every sign change of g.
/// Node values with |g| < g_tol count as roots directly. Roots closer than
/// (hi-lo)·1e-9 are deduplicated.
template <class G>
std::vector<double> scan_roots(G&& g, double lo, double hi, int n = 1000,
                               double g_tol = 1e-12) {
  std::vector<double> roots;
  if (!(hi > lo) || n < 1) return roots;
  const double dx = (hi - lo) / n;
  double x_prev = lo, g_prev = g(lo);
  auto push = [&](double r) {
    for (double q : roots)
      if (std::abs(q - r) <= (hi - lo) * 1e-9) return;
    roots.push_back(r);
  };
  if (std::abs(g_prev) < g_tol) push(lo);
  for (int i = 1; i <= n; ++i) {
    const double x = (i == n) ? hi : lo + i * dx;
    const double gx = g(x);
    if (std::abs(gx) < g_tol) {
      push(x);
    } else if (g_prev * gx < 0.0) {
      push(bisect(g, x_prev, x, g_prev, g_tol));
    }
    x_prev = x;
    g_prev = gx;
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

/// Least-squares line y ≈ slope·t + intercept with RMS residual.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms = 0.0;
};

inline LineFit fit_line(const std::vector<double>& t,
                        const std::vector<double>& y) {
  const std::size_t n = t.size();
  if (n != y.size() || n < 2)
    throw std::invalid_argument("fit_line: need two or more points");
  double st = 0, sy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    st += t[i];
    sy += y[i];
  }
  const double tm = st / n, ym = sy / n;
  double stt = 0, sty = 0;
  for (std::size_t i = 0; i < n; ++i) {
    stt += (t[i] - tm) * (t[i] - tm);
    sty += (t[i] - tm) * (y[i] - ym);
  }
  if (stt == 0.0) throw std::invalid_argument("fit_line: degenerate abscissae");
  LineFit fit;
  fit.slope = sty / stt;
  fit.intercept = ym - fit.slope * tm;
  double ss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (fit.slope * t[i] + fit.intercept);
    ss += r * r;
  }
  fit.rms = std::sqrt(ss / n);
  return fit;
}

/// Golden-section minimization of a unimodal f over [a,b].
template <class F>
double golden_min(F&& f, double a, double b, double x_tol = 1e-10) {
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);  // 0.618...
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > x_tol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

/// Shape-preserving piecewise-cubic interpolant (Fritsch–Carlson slopes).
/// Outside the node range evaluation clamps to the boundary values.
class MonotoneCubic {
 public:
  MonotoneCubic() = default;

  MonotoneCubic(std::vector<double> x, std::vector<double> y)
      : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n != y_.size() || n < 2)
      throw std::invalid_argument("MonotoneCubic: need two or more nodes");
    for (std::size_t i = 1; i < n; ++i)
      if (!(x_[i] > x_[i - 1]))
        throw std::invalid_argument("MonotoneCubic: abscissae not increasing");
    m_.assign(n, 0.0);
    std::vector<double> h(n - 1), delta(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      h[i] = x_[i + 1] - x_[i];
      delta[i] = (y_[i + 1] - y_[i]) / h[i];
    }
    if (n == 2) {
      m_[0] = m_[1] = delta[0];
      return;
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
      if (delta[i - 1] * delta[i] <= 0.0) {
        m_[i] = 0.0;
      } else {
        const double w1 = 2.0 * h[i] + h[i - 1];
        const double w2 = h[i] + 2.0 * h[i - 1];
        m_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
      }
    }
    m_[0] = edge_slope(h[0], h[1], delta[0], delta[1]);
    m_[n - 1] = edge_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
  }

  double operator()(double s) const {
    if (s <= x_.front()) return y_.front();
    if (s >= x_.back()) return y_.back();
    const auto it = std::upper_bound(x_.begin(), x_.end(), s);
    const std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
    const double h = x_[i + 1] - x_[i];
    const double t = (s - x_[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    return h00 * y_[i] + h * h10 * m_[i] + h01 * y_[i + 1] + h * h11 * m_[i + 1];
  }

  double x_min() const { return x_.front(); }
  double x_max() const { return x_.back(); }

 private:
  static double edge_slope(double h0, double h1, double d0, double d1) {
    double m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (m * d0 <= 0.0)
      m = 0.0;
    else if (d0 * d1 < 0.0 && std::abs(m) > 3.0 * std::abs(d0))
      m = 3.0 * d0;
    return m;
  }

  std::vector<double> x_, y_, m_;
};

/// One classical Runge–Kutta (4th order) step for an autonomous 2-system.
template <class RHS>
std::array<double, 2> rk4_step(const std::array<double, 2>& y, double dt,
                               RHS&& rhs) {
  const auto k1 = rhs(y);
  const auto k2 = rhs({y[0] + 0.5 * dt * k1[0], y[1] + 0.5 * dt * k1[1]});
  const auto k3 = rhs({y[0] + 0.5 * dt * k2[0], y[1] + 0.5 * dt * k2[1]});
  const auto k4 = rhs({y[0] + dt * k3[0], y[1] + dt * k3[1]});
  return {y[0] + dt / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]),
          y[1] + dt / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])};
}

/// Two-point quintic Hermite evaluation on [0,h] from endpoint values,
/// first and second derivatives. Exact for polynomials of degree ≤ 5.
inline double hermite5(double t, double h, double y0, double v0, double a0,
                       double y1, double v1, double a1) {
  const double tau = t / h;
  const double t2 = tau * tau, t3 = t2 * tau, t4 = t3 * tau, t5 = t4 * tau;
  const double H0 = 1 - 10 * t3 + 15 * t4 - 6 * t5;
  const double H1 = tau - 6 * t3 + 8 * t4 - 3 * t5;
  const double H2 = 0.5 * t2 - 1.5 * t3 + 1.5 * t4 - 0.5 * t5;
  const double G0 = 10 * t3 - 15 * t4 + 6 * t5;
  const double G1 = -4 * t3 + 7 * t4 - 3 * t5;
  const double G2 = 0.5 * t3 - t4 + 0.5 * t5;
  return y0 * H0 + h * v0 * H1 + h * h * a0 * H2 + y1 * G0 + h * v1 * G1 +
         h * h * a1 * G2;
}

}  // namespace patchfront
