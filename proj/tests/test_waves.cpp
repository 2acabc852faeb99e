#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include <patchfront/reaction.hpp>
#include <patchfront/waves.hpp>

using namespace patchfront;

namespace {

// Exact speed of the cubic front: sqrt(d/2) * (K - 2*theta).
double cubic_speed(double K, double theta, double d) {
  return std::sqrt(d / 2.0) * (K - 2.0 * theta);
}

// Interior centered-difference residual of the profile ODE, maximized over
// the sampled window.
double max_residual(const FrontProfile& p, const Reaction& f) {
  double worst = 0.0;
  const double ds = p.s[1] - p.s[0];
  for (std::size_t i = 1; i + 1 < p.phi.size(); ++i) {
    const double lap = (p.phi[i - 1] - 2.0 * p.phi[i] + p.phi[i + 1]) / (ds * ds);
    const double grad = (p.phi[i + 1] - p.phi[i - 1]) / (2.0 * ds);
    worst = std::max(worst,
                     std::abs(p.d * lap + p.c * grad + eval(f, p.phi[i])));
  }
  return worst;
}

// The profile ODE integrates to  c * \int phi'^2 = \int_0^K f :  a global
// identity independent of the shooting construction.
double energy_speed(const FrontProfile& p, const Reaction& f) {
  const double ds = p.s[1] - p.s[0];
  double dissipation = 0.0;
  for (std::size_t i = 1; i + 1 < p.phi.size(); ++i) {
    const double grad = (p.phi[i + 1] - p.phi[i - 1]) / (2.0 * ds);
    dissipation += grad * grad * ds;
  }
  return mass(f, 0.0, p.K) / dissipation;
}

}  // namespace

TEST_CASE("front speed matches the exact cubic formula", "[waves]") {
  const FrontProfile p = bistable_front(cubic(4.0, 1.0), 1.0);
  CHECK(p.c == Catch::Approx(std::sqrt(2.0)).margin(1e-9));
  CHECK(p.decay_alpha == Catch::Approx(2.0 * std::sqrt(2.0)).margin(1e-8));
  CHECK(p.decay_beta == Catch::Approx(2.0 * std::sqrt(2.0)).margin(1e-8));

  const struct { double K, th, d; } cases[] = {
      {1.0, 0.3, 1.0}, {2.0, 1.2, 0.5}, {0.7, 0.2, 2.0}, {3.0, 1.0, 0.25}};
  for (const auto& cs : cases) {
    const FrontProfile q = bistable_front(cubic(cs.K, cs.th), cs.d);
    CHECK(q.c == Catch::Approx(cubic_speed(cs.K, cs.th, cs.d)).margin(1e-6));
  }
}

TEST_CASE("balanced cubic has exactly zero speed", "[waves]") {
  const FrontProfile p = bistable_front(cubic(4.0, 2.0), 1.0);
  CHECK(p.c == 0.0);
  const FrontProfile n = bistable_front(cubic(4.0, 3.0), 1.0);
  CHECK(n.c == Catch::Approx(-std::sqrt(2.0)).margin(1e-9));
  CHECK(n.c < 0.0);
}

TEST_CASE("front profile invariants", "[waves]") {
  const Reaction f = cubic(4.0, 1.0);
  const FrontProfile p = bistable_front(f, 1.0);

  // normalization: s = 0 is a sample and carries exactly theta
  REQUIRE(!p.s.empty());
  bool has_zero = false;
  for (std::size_t i = 0; i < p.s.size(); ++i)
    if (p.s[i] == 0.0) {
      has_zero = true;
      CHECK(std::abs(p.phi[i] - 1.0) < 1e-10);
    }
  CHECK(has_zero);
  CHECK(std::abs(front_eval(p, 0.0) - 1.0) < 1e-10);

  // strictly decreasing samples
  bool decreasing = true;
  for (std::size_t i = 1; i < p.phi.size(); ++i)
    decreasing = decreasing && p.phi[i] < p.phi[i - 1];
  CHECK(decreasing);

  CHECK(max_residual(p, f) < 1e-6);
  CHECK(energy_speed(p, f) == Catch::Approx(p.c).margin(1e-5));

  // sampled window reaches deep into both tails
  CHECK(p.phi.front() > 4.0 - 1e-7);
  CHECK(p.phi.back() < 1e-9);
}

TEST_CASE("fitted tails sandwich the profile", "[waves]") {
  const FrontProfile p = bistable_front(cubic(4.0, 1.0), 1.0);
  CHECK(p.tail_a0 > 0.0);
  CHECK(p.tail_b0 > 0.0);
  CHECK(p.tail_a1 / p.tail_a0 < 1.2);
  CHECK(p.tail_b1 / p.tail_b0 < 1.2);
  bool sandwiched = true;
  for (std::size_t i = 0; i < p.s.size(); ++i) {
    const double v = p.phi[i];
    if (v <= 0.05 * p.K && v >= 1e-6 * p.K) {
      const double e = std::exp(-p.decay_alpha * p.s[i]);
      sandwiched = sandwiched && p.tail_a0 * e <= v + 1e-15 &&
                   v <= p.tail_a1 * e + 1e-15;
    }
    if (p.K - v <= 0.05 * p.K && p.K - v >= 1e-6 * p.K) {
      const double e = std::exp(p.decay_beta * p.s[i]);
      sandwiched = sandwiched && p.tail_b0 * e <= p.K - v + 1e-15 &&
                   p.K - v <= p.tail_b1 * e + 1e-15;
    }
  }
  CHECK(sandwiched);
}

TEST_CASE("front evaluation is monotone and limits correctly", "[waves]") {
  const FrontProfile p = bistable_front(cubic(4.0, 1.0), 1.0);
  const double lo = p.s.front() - 5.0, hi = p.s.back() + 5.0;
  double prev = front_eval(p, lo);
  bool nonincreasing = true;
  for (int i = 1; i < 1000; ++i) {
    const double v = front_eval(p, lo + (hi - lo) * i / 999.0);
    nonincreasing = nonincreasing && v <= prev + 1e-12;
    prev = v;
  }
  CHECK(nonincreasing);
  CHECK(front_eval(p, hi) < 1e-12);
  CHECK(front_eval(p, lo) == Catch::Approx(4.0).margin(1e-7));
  // tails join the sampled window continuously
  const double eps = 1e-9;
  CHECK(front_eval(p, p.s.back() + eps) ==
        Catch::Approx(p.phi.back()).margin(1e-10));
  CHECK(front_eval(p, p.s.front() - eps) ==
        Catch::Approx(p.phi.front()).margin(1e-10));
}

TEST_CASE("pulled-front minimal speed and decay rate", "[waves]") {
  const KppFrontData k = kpp_speed(logistic(1.0), 1.0);
  CHECK(k.c_star == Catch::Approx(2.0).margin(1e-14));
  CHECK(k.lambda_c(k.c_star) == Catch::Approx(1.0).margin(1e-7));

  const KppFrontData k2 = kpp_speed(logistic(2.0), 2.0);
  CHECK(k2.c_star == Catch::Approx(2.0 * std::sqrt(2.0)).margin(1e-14));
  CHECK(k2.lambda_c(k2.c_star) ==
        Catch::Approx(k2.c_star / (2.0 * k2.d)).margin(1e-7));

  CHECK(k.lambda_c(3.0) ==
        Catch::Approx((3.0 - std::sqrt(5.0)) / 2.0).margin(1e-14));
  CHECK_THROWS_AS(k.lambda_c(1.9), std::invalid_argument);
  CHECK_THROWS_AS(kpp_speed(cubic(4.0, 1.0), 1.0), std::invalid_argument);
  CHECK_THROWS_AS(kpp_speed(logistic(1.0), 0.0), std::invalid_argument);
}

TEST_CASE("front construction rejects bad inputs", "[waves]") {
  CHECK_THROWS_AS(bistable_front(logistic(1.0), 1.0), std::invalid_argument);
  CHECK_THROWS_AS(bistable_front(cubic(4.0, 1.0), -1.0),
                  std::invalid_argument);
}
