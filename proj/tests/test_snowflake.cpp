#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

#include "snowlab/snowflake.hpp"

using namespace snowlab;

namespace {

// Plain bisection for a root of an increasing function on [lo, hi].
double bisect(const std::function<double(double)>& f, double lo, double hi) {
  for (int i = 0; i < 400; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<SnowflakeFunction> catalog_sample() {
  return {
      SnowflakeFunction::power(0.3),
      SnowflakeFunction::power(0.5),
      SnowflakeFunction::power(0.9),
      SnowflakeFunction::linear_plus_sqrt(1.0, 1.0),
      SnowflakeFunction::linear_plus_sqrt(0.25, 3.0),
      SnowflakeFunction::scaled_log1p(2.0),
      SnowflakeFunction::linear_plus_constant(1.0, 0.5),
      SnowflakeFunction::piecewise({0.0, 1.0, 3.0, 10.0}, {2.0, 1.0, 0.5}),
      SnowflakeFunction::piecewise({0.0, 1.0, 3.0, 10.0}, {2.0, 1.0, 0.5}, 0.5, 0.5),
  };
}

}  // namespace

TEST_CASE("eval and inverse examples") {
  const auto p = SnowflakeFunction::power(0.5);
  CHECK(p(9.0) == doctest::Approx(3.0));
  CHECK(p.inverse(3.0) == doctest::Approx(9.0));

  const auto s = SnowflakeFunction::linear_plus_sqrt(1.0, 1.0);
  CHECK(s(4.0) == 6.0);
  const double oracle = bisect([&](double t) { return t + std::sqrt(t) - 6.0; }, 0.0, 10.0);
  CHECK(s.inverse(6.0) == doctest::Approx(oracle).epsilon(1e-12));
  CHECK(s.inverse(6.0) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK_THROWS_AS(s.inverse(-1.0), DomainError);
  CHECK_THROWS_AS(s(-1.0), DomainError);
}

TEST_CASE("piecewise evaluation by segment arithmetic") {
  const auto h = SnowflakeFunction::piecewise({0.0, 1.0, 3.0, 10.0}, {2.0, 1.0, 0.5});
  CHECK(h(0.5) == doctest::Approx(1.0));
  CHECK(h(1.0) == doctest::Approx(2.0));
  CHECK(h(2.0) == doctest::Approx(3.0));
  CHECK(h(10.0) == doctest::Approx(7.5));
  CHECK(h(12.0) == doctest::Approx(8.5));
  CHECK(h.inverse(3.0) == doctest::Approx(2.0));
  CHECK(h.inverse(8.5) == doctest::Approx(12.0));

  const auto lead = SnowflakeFunction::piecewise({0.0, 1.0, 3.0}, {2.0, 0.5}, 0.5, 0.5);
  CHECK(lead(0.25) == doctest::Approx(2.0 * std::sqrt(0.25)));
  CHECK(lead(1.0) == doctest::Approx(2.0));
  CHECK(lead(3.0) == doctest::Approx(3.0));
  // Tail 3 + 0.5 * 3 / 0.5 * ((t/3)^0.5 - 1), slope 0.5 at T_m.
  CHECK(lead(12.0) == doctest::Approx(3.0 + 3.0 * (2.0 - 1.0)));
}

TEST_CASE("piecewise construction rejects non-concave data") {
  CHECK_THROWS_AS(SnowflakeFunction::piecewise({0.0, 1.0, 2.0}, {1.0, 2.0}), InvalidSnowflakeError);
  CHECK_THROWS_AS(SnowflakeFunction::piecewise({0.0, 2.0, 1.0}, {2.0, 1.0}), InvalidSnowflakeError);
  CHECK_THROWS_AS(SnowflakeFunction::piecewise({1.0, 2.0, 3.0}, {2.0, 1.0}), InvalidSnowflakeError);
  CHECK_THROWS_AS(SnowflakeFunction::piecewise({0.0, 1.0, 2.0}, {2.0, 1.5}, 0.5), InvalidSnowflakeError);
}

TEST_CASE("axiom flags") {
  CHECK(check_axioms(SnowflakeFunction::power(0.5)).all_hold());
  const auto f = check_axioms(SnowflakeFunction::linear_plus_sqrt(1.0, 1.0));
  CHECK(f.s1 == Verdict::holds);
  CHECK(f.s2 == Verdict::holds);
  CHECK(f.s3 == Verdict::holds);
  CHECK(f.s4 == Verdict::fails);

  const auto pw = SnowflakeFunction::piecewise({0.0, 1.0, 2.0, 4.0, 8.0}, {1.0, 0.5, 0.25, 0.125}, 0.5, 0.5);
  CHECK(check_axioms(pw).all_hold());

  const auto lg = check_axioms(SnowflakeFunction::scaled_log1p(1.0));
  CHECK(lg.s2 == Verdict::holds);
  CHECK(lg.s3 == Verdict::fails);
  CHECK(lg.s4 == Verdict::holds);

  const auto cst = check_axioms(SnowflakeFunction::linear_plus_constant(1.0, 1.0));
  CHECK(cst.s3 == Verdict::holds);
  CHECK(cst.s4 == Verdict::fails);

  const auto convex = check_axioms(SnowflakeFunction::power(1.5));
  CHECK(convex.s2 == Verdict::fails);
}

TEST_CASE("modulus") {
  CHECK(SnowflakeFunction::power(0.5).modulus(4.0) == doctest::Approx(0.5));
  const auto s = SnowflakeFunction::linear_plus_sqrt(1.0, 1.0);
  CHECK(s.modulus(4.0) == doctest::Approx(1.5));
  CHECK(s.modulus_at_infinity() == 1.0);
  CHECK(s.modulus(1e8) == doctest::Approx(1.0).epsilon(1e-3));
  CHECK_THROWS_AS(s.modulus(0.0), DomainError);
}

TEST_CASE("threshold_T examples") {
  const auto p = SnowflakeFunction::power(0.5);
  CHECK(threshold_T(p, 1.0) == doctest::Approx(4.0).epsilon(1e-9));
  CHECK(threshold_T(p, 4.0) == doctest::Approx(16.0).epsilon(1e-9));
  for (double a : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    const auto h = SnowflakeFunction::power(a);
    for (double t : {1e-3, 0.7, 5.0, 1e4}) {
      const double T = threshold_T(h, t);
      const double oracle = bisect([&](double S) { return 0.5 * std::pow(t, a - 1.0) - std::pow(S, a - 1.0); },
                                   t, t * 1e12);
      CHECK(T == doctest::Approx(oracle).epsilon(1e-9));
      CHECK(T / t == doctest::Approx(std::pow(2.0, 1.0 / (1.0 - a))).epsilon(1e-9));
    }
  }
  CHECK_THROWS_AS(threshold_T(SnowflakeFunction::linear_plus_sqrt(1.0, 1.0), 1.0), UnboundedThresholdError);
  CHECK_THROWS_AS(threshold_T(SnowflakeFunction::power(0.5), 0.0), DomainError);
}

TEST_CASE("threshold_T_tilde examples") {
  const auto p = SnowflakeFunction::power(0.5);
  CHECK(threshold_T_tilde(p, 4.0) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(threshold_T_tilde(p, 16.0) == doctest::Approx(4.0).epsilon(1e-9));
  for (const auto& h : catalog_sample()) {
    for (double S : {0.01, 1.0, 50.0}) {
      if (!(h.modulus_at_zero() > 2.0 * h.modulus(S))) {
        CHECK_THROWS_AS(threshold_T_tilde(h, S), ZeroThresholdError);
        continue;
      }
      const double t0 = threshold_T_tilde(h, S);
      CHECK(t0 <= S);
      CHECK(h.modulus(t0) >= 2.0 * h.modulus(S) * (1.0 - 1e-9));
    }
  }
  CHECK_THROWS_AS(threshold_T_tilde(SnowflakeFunction::scaled_log1p(1.0), 1.0), ZeroThresholdError);
}

TEST_CASE("check_halving examples") {
  const auto p = SnowflakeFunction::power(0.5);
  CHECK(check_halving(p, 4.0, 1.0).slack == doctest::Approx(2.5 - std::sqrt(5.0)));
  CHECK(check_halving(p, 4.0, 1.0).holds);
  CHECK(check_halving(p, 1.0, 1.0).slack == doctest::Approx(1.5 - std::sqrt(2.0)));

  const auto s = SnowflakeFunction::linear_plus_sqrt(1.0, 1.0);
  // h(S) + h(1)/2 - h(S+1) = 1 + sqrt(S) - sqrt(S+1) - 1 + 0.5 -> 0.5 - 1/(2 sqrt S) + ...
  for (double S : {1e2, 1e4, 1e6}) {
    const double expect = std::sqrt(S) - std::sqrt(S + 1.0);
    CHECK(check_halving(s, S, 1.0).slack == doctest::Approx(expect).epsilon(1e-6));
  }
}

TEST_CASE("modulus is nonincreasing and h is concave on a probe grid") {
  const auto grid = ProbeGrid{}.points();
  for (const auto& h : catalog_sample()) {
    double prev = INFINITY;
    for (double t : grid) {
      const double c = h.modulus(t);
      CHECK(c <= prev * (1.0 + 1e-12));
      prev = c;
    }
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
      const double a = grid[i];
      const double b = grid[i + 1];
      const double mid = h(0.5 * (a + b));
      CHECK(mid >= 0.5 * (h(a) + h(b)) - 1e-12 * mid);
    }
  }
}

TEST_CASE("inverse of eval is the identity") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> lg(-6.0, 6.0);
  for (const auto& h : catalog_sample()) {
    for (int i = 0; i < 200; ++i) {
      const double t = std::pow(10.0, lg(rng));
      CHECK(h.inverse(h(t)) == doctest::Approx(t).epsilon(1e-10));
    }
  }
}

TEST_CASE("halving holds beyond T for random t") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> lg(-4.0, 4.0);
  std::uniform_real_distribution<double> extra(0.0, 6.0);
  std::vector<SnowflakeFunction> hs{
      SnowflakeFunction::power(0.3), SnowflakeFunction::power(0.7), SnowflakeFunction::scaled_log1p(1.5),
      SnowflakeFunction::piecewise({0.0, 1.0, 3.0}, {2.0, 0.5}, 0.5, 0.5)};
  for (const auto& h : hs) {
    for (int i = 0; i < 2000; ++i) {
      const double t = std::pow(10.0, lg(rng));
      const double S = threshold_T(h, t) * std::pow(10.0, extra(rng));
      CHECK(check_halving(h, S, t).slack >= -1e-12 * std::max(1.0, h(S)));
    }
  }
}
