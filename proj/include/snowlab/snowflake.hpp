#pragma once

// Snowflaking functions h : [0, inf) -> [0, inf) and the quantities derived
// from their modulus c(t) = h(t) / t.

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <boost/math/special_functions/expm1.hpp>
#include <boost/math/special_functions/log1p.hpp>

#include "snowlab/errors.hpp"

namespace snowlab {

/// h(t) = t^alpha. Concave for alpha in (0, 1]; larger exponents are accepted
/// so that callers can exercise the rejection path of check_axioms.
struct PowerLaw {
  double alpha;
};

/// Concave piecewise-linear h with knots T_0 = 0 < T_1 < ... < T_m and slopes
/// c_1 > ... > c_m > 0, slope c_k on [T_{k-1}, T_k].
///
/// The optional lead replaces the first segment with c_1 T_1 (t / T_1)^gamma,
/// which keeps h(T_1) = c_1 T_1 and makes c(t) blow up at 0. The optional tail
/// continues past T_m as a power curve whose slope matches at T_m, so that
/// c(t) -> 0; without it the last slope continues forever.
struct PiecewiseLinear {
  std::vector<double> breakpoints;  // T_0 .. T_m, T_0 == 0
  std::vector<double> slopes;       // c_1 .. c_m
  std::optional<double> lead_gamma;
  std::optional<double> tail_gamma;
  std::vector<double> values;       // H_k = h(T_k), filled on construction
};

/// a t + b sqrt(t)
struct LinearPlusSqrt {
  double a;
  double b;
};

/// c t + b for t > 0 and 0 at t = 0 (the "add a constant" metric transform).
struct LinearPlusConstant {
  double c;
  double b;
};

/// a log(1 + t)
struct ScaledLog1p {
  double a;
};

enum class Verdict { holds, fails, undetermined };

std::string to_string(Verdict v);

struct AxiomFlags {
  Verdict s1 = Verdict::undetermined;
  Verdict s2 = Verdict::undetermined;
  Verdict s3 = Verdict::undetermined;
  Verdict s4 = Verdict::undetermined;

  bool all_hold() const {
    return s1 == Verdict::holds && s2 == Verdict::holds && s3 == Verdict::holds &&
           s4 == Verdict::holds;
  }
};

/// Logarithmic probe grid used to decide limit axioms on catalog entries.
struct ProbeGrid {
  double t_min = 1e-8;
  double t_max = 1e8;
  int per_decade = 10;

  std::vector<double> points() const;
};

class SnowflakeFunction {
 public:
  using Catalog = std::variant<LinearPlusSqrt, LinearPlusConstant, ScaledLog1p>;
  using Variant = std::variant<PowerLaw, PiecewiseLinear, Catalog>;

  static SnowflakeFunction power(double alpha);
  static SnowflakeFunction piecewise(std::vector<double> breakpoints, std::vector<double> slopes,
                                     std::optional<double> lead_gamma = std::nullopt,
                                     std::optional<double> tail_gamma = std::nullopt);
  static SnowflakeFunction linear_plus_sqrt(double a, double b);
  static SnowflakeFunction linear_plus_constant(double c, double b);
  static SnowflakeFunction scaled_log1p(double a);

  const Variant& variant() const { return v_; }
  bool is_catalog() const { return std::holds_alternative<Catalog>(v_); }

  /// Human readable form, e.g. "t^0.5" or "1*t+1*sqrt(t)".
  std::string name() const;

  template <class Real>
  Real eval(const Real& t) const;

  double operator()(double t) const { return eval<double>(t); }

  /// h^{-1}(s), in closed form for every variant.
  template <class Real>
  Real inverse(const Real& s) const;

  /// c(t) = h(t) / t for t > 0.
  double modulus(double t) const;

  /// lim_{t->0} c(t); +inf when S3 holds.
  double modulus_at_zero() const;
  /// lim_{t->inf} c(t); 0 when S4 holds.
  double modulus_at_infinity() const;

  /// c(t) - c(inf), evaluated without subtracting nearly equal numbers.
  template <class Real>
  Real excess_modulus(const Real& t) const;

  bool strictly_increasing() const;

 private:
  explicit SnowflakeFunction(Variant v) : v_(std::move(v)) {}

  Variant v_;
};

/// Decide (S1)-(S4). Power and piecewise variants are decided symbolically;
/// catalog entries by evaluating c(t) at the probe grid extremes.
AxiomFlags check_axioms(const SnowflakeFunction& h, const ProbeGrid& probe = {});

/// Least S0 with c(S) <= c(t) / 2 for every S >= S0, so that
/// h(S + t) <= h(S) + h(t) / 2 whenever S >= threshold_T(h, t).
double threshold_T(const SnowflakeFunction& h, double t, double rel_tol = 1e-13);

/// Greatest t0 <= S with c(t) >= 2 c(S) for every 0 < t <= t0.
double threshold_T_tilde(const SnowflakeFunction& h, double S, double rel_tol = 1e-13);

struct HalvingCheck {
  bool holds;
  double slack;  // h(S) + h(t)/2 - h(S + t)
};

HalvingCheck check_halving(const SnowflakeFunction& h, double S, double t);

// ---------------------------------------------------------------------------

namespace detail {

template <class Real>
Real piecewise_eval(const PiecewiseLinear& p, const Real& t) {
  using std::pow;
  const auto& T = p.breakpoints;
  const auto& H = p.values;
  const std::size_t m = p.slopes.size();
  if (t <= Real(0)) return Real(0);
  if (p.lead_gamma && t < Real(T[1])) {
    return Real(p.slopes[0]) * Real(T[1]) * pow(t / Real(T[1]), Real(*p.lead_gamma));
  }
  if (t > Real(T[m])) {
    if (p.tail_gamma) {
      const Real g(*p.tail_gamma);
      const Real slope(p.lead_gamma && m == 1 ? *p.lead_gamma * p.slopes[0] : p.slopes[m - 1]);
      return Real(H[m]) + slope * Real(T[m]) / g * (pow(t / Real(T[m]), g) - Real(1));
    }
    return Real(H[m]) + Real(p.slopes[m - 1]) * (t - Real(T[m]));
  }
  std::size_t k = 1;
  while (k < m && t > Real(T[k])) ++k;
  return Real(H[k - 1]) + Real(p.slopes[k - 1]) * (t - Real(T[k - 1]));
}

template <class Real>
Real piecewise_inverse(const PiecewiseLinear& p, const Real& s) {
  using std::pow;
  const auto& T = p.breakpoints;
  const auto& H = p.values;
  const std::size_t m = p.slopes.size();
  if (s <= Real(0)) return Real(0);
  if (p.lead_gamma && s < Real(H[1])) {
    return Real(T[1]) * pow(s / (Real(p.slopes[0]) * Real(T[1])), Real(1) / Real(*p.lead_gamma));
  }
  if (s > Real(H[m])) {
    if (p.tail_gamma) {
      const Real g(*p.tail_gamma);
      const Real slope(p.lead_gamma && m == 1 ? *p.lead_gamma * p.slopes[0] : p.slopes[m - 1]);
      return Real(T[m]) * pow(Real(1) + (s - Real(H[m])) * g / (slope * Real(T[m])), Real(1) / g);
    }
    return Real(T[m]) + (s - Real(H[m])) / Real(p.slopes[m - 1]);
  }
  std::size_t k = 1;
  while (k < m && s > Real(H[k])) ++k;
  return Real(T[k - 1]) + (s - Real(H[k - 1])) / Real(p.slopes[k - 1]);
}

}  // namespace detail

template <class Real>
Real SnowflakeFunction::eval(const Real& t) const {
  using std::pow;
  using std::sqrt;
  if (t < Real(0)) throw DomainError("snowflake function evaluated at a negative argument");
  if (t == Real(0)) return Real(0);
  return std::visit(
      [&](const auto& f) -> Real {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, PowerLaw>) {
          return pow(t, Real(f.alpha));
        } else if constexpr (std::is_same_v<F, PiecewiseLinear>) {
          return detail::piecewise_eval(f, t);
        } else {
          return std::visit(
              [&](const auto& g) -> Real {
                using G = std::decay_t<decltype(g)>;
                if constexpr (std::is_same_v<G, LinearPlusSqrt>) {
                  return Real(g.a) * t + Real(g.b) * sqrt(t);
                } else if constexpr (std::is_same_v<G, LinearPlusConstant>) {
                  return Real(g.c) * t + Real(g.b);
                } else {
                  return Real(g.a) * boost::math::log1p(t);
                }
              },
              f);
        }
      },
      v_);
}

template <class Real>
Real SnowflakeFunction::inverse(const Real& s) const {
  using std::pow;
  using std::sqrt;
  if (s < Real(0)) throw DomainError("snowflake inverse of a negative value");
  if (s == Real(0)) return Real(0);
  return std::visit(
      [&](const auto& f) -> Real {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, PowerLaw>) {
          return pow(s, Real(1) / Real(f.alpha));
        } else if constexpr (std::is_same_v<F, PiecewiseLinear>) {
          return detail::piecewise_inverse(f, s);
        } else {
          return std::visit(
              [&](const auto& g) -> Real {
                using G = std::decay_t<decltype(g)>;
                if constexpr (std::is_same_v<G, LinearPlusSqrt>) {
                  if (g.a == 0.0) return (s / Real(g.b)) * (s / Real(g.b));
                  // sqrt(t) = 2s / (b + sqrt(b^2 + 4as)), free of cancellation
                  const Real r = Real(2) * s / (Real(g.b) + sqrt(Real(g.b) * Real(g.b) + Real(4) * Real(g.a) * s));
                  return r * r;
                } else if constexpr (std::is_same_v<G, LinearPlusConstant>) {
                  if (s < Real(g.b)) throw DomainError("value lies in the gap (0, b) of c*t+b");
                  return (s - Real(g.b)) / Real(g.c);
                } else {
                  return boost::math::expm1(s / Real(g.a));
                }
              },
              f);
        }
      },
      v_);
}

template <class Real>
Real SnowflakeFunction::excess_modulus(const Real& t) const {
  using std::pow;
  using std::sqrt;
  if (t <= Real(0)) throw DomainError("modulus requires t > 0");
  return std::visit(
      [&](const auto& f) -> Real {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, PowerLaw>) {
          if (f.alpha == 1.0) return Real(0);
          return pow(t, Real(f.alpha) - Real(1));
        } else if constexpr (std::is_same_v<F, PiecewiseLinear>) {
          if (f.tail_gamma) return detail::piecewise_eval(f, t) / t;
          const std::size_t m = f.slopes.size();
          const Real cm(f.slopes[m - 1]);
          const auto& T = f.breakpoints;
          if (t > Real(T[m - 1]) && !(f.lead_gamma && m == 1)) {
            // Last segment: h(t) - c_m t is the constant intercept.
            return (Real(f.values[m - 1]) - cm * Real(T[m - 1])) / t;
          }
          return (detail::piecewise_eval(f, t) - cm * t) / t;
        } else {
          return std::visit(
              [&](const auto& g) -> Real {
                using G = std::decay_t<decltype(g)>;
                if constexpr (std::is_same_v<G, LinearPlusSqrt>) {
                  return Real(g.b) / sqrt(t);
                } else if constexpr (std::is_same_v<G, LinearPlusConstant>) {
                  return Real(g.b) / t;
                } else {
                  return Real(g.a) * boost::math::log1p(t) / t;
                }
              },
              f);
        }
      },
      v_);
}

}  // namespace snowlab
