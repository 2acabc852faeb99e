#pragma once

// Reference single-domain explicit solver: identical bulk stencil and
// Neumann truncation to the two-patch integrator, but every node (including
// x = 0) is an ordinary interior node.  When sigma = 1, d1 = d2 and f1 = f2
// the two-patch scheme should reproduce this up to the interface-node
// truncation error.

#include <algorithm>
#include <vector>

#include <patchfront/reaction.hpp>

inline std::vector<double> homogeneous_reference(const patchfront::Reaction& f,
                                                 double d,
                                                 std::vector<double> u,
                                                 double h, double dt0,
                                                 double T) {
  std::vector<double> next(u.size());
  const long N = static_cast<long>(u.size());
  double t = 0.0;
  while (t < T - 1e-12 * std::max(1.0, T)) {
    const double dt = std::min(dt0, T - t);
    const double c = d * dt / (h * h);
    next[0] = u[0] + 2.0 * c * (u[1] - u[0]) + dt * patchfront::eval(f, u[0]);
    for (long i = 1; i < N - 1; ++i)
      next[i] = u[i] + c * (u[i - 1] - 2.0 * u[i] + u[i + 1]) +
                dt * patchfront::eval(f, u[i]);
    next[N - 1] = u[N - 1] + 2.0 * c * (u[N - 2] - u[N - 1]) +
                  dt * patchfront::eval(f, u[N - 1]);
    u.swap(next);
    t += dt;
  }
  return u;
}
