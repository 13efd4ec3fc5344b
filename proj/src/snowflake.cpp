#include "snowlab/snowflake.hpp"

#include <algorithm>
#include <cstdio>

namespace snowlab {

namespace {

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

bool finite_positive(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::holds:
      return "holds";
    case Verdict::fails:
      return "fails";
    case Verdict::undetermined:
      return "undetermined";
  }
  return "undetermined";
}

std::vector<double> ProbeGrid::points() const {
  if (!(t_min > 0.0) || !(t_max > t_min) || per_decade < 1) {
    throw StructuralError("probe grid needs 0 < t_min < t_max and per_decade >= 1");
  }
  const double decades = std::log10(t_max / t_min);
  const int steps = std::max(2, static_cast<int>(std::ceil(decades * per_decade)));
  std::vector<double> out(steps + 1);
  for (int i = 0; i <= steps; ++i) {
    out[i] = t_min * std::pow(t_max / t_min, static_cast<double>(i) / steps);
  }
  out.front() = t_min;
  out.back() = t_max;
  return out;
}

SnowflakeFunction SnowflakeFunction::power(double alpha) {
  if (!finite_positive(alpha)) throw InvalidSnowflakeError("power exponent must be positive");
  return SnowflakeFunction(PowerLaw{alpha});
}

SnowflakeFunction SnowflakeFunction::piecewise(std::vector<double> breakpoints,
                                               std::vector<double> slopes,
                                               std::optional<double> lead_gamma,
                                               std::optional<double> tail_gamma) {
  const std::size_t m = slopes.size();
  if (m == 0 || breakpoints.size() != m + 1) {
    throw InvalidSnowflakeError("piecewise h needs m slopes and m+1 breakpoints T_0..T_m");
  }
  if (breakpoints[0] != 0.0) throw InvalidSnowflakeError("piecewise h needs T_0 = 0");
  for (std::size_t k = 1; k <= m; ++k) {
    if (!std::isfinite(breakpoints[k]) || !(breakpoints[k] > breakpoints[k - 1])) {
      throw InvalidSnowflakeError("breakpoints must be strictly increasing");
    }
  }
  for (std::size_t k = 0; k < m; ++k) {
    if (!finite_positive(slopes[k])) throw InvalidSnowflakeError("slopes must be positive");
    if (k > 0 && !(slopes[k] < slopes[k - 1])) {
      throw InvalidSnowflakeError("slopes must be strictly decreasing (concavity)");
    }
  }
  for (const auto& g : {lead_gamma, tail_gamma}) {
    if (g && !(*g > 0.0 && *g < 1.0)) {
      throw InvalidSnowflakeError("lead/tail exponents must lie in (0, 1)");
    }
  }
  if (lead_gamma) {
    // Left slope at T_1 is gamma c_1; the next piece may not be steeper.
    const double left = *lead_gamma * slopes[0];
    if (m >= 2 && slopes[1] > left) {
      throw InvalidSnowflakeError("lead segment breaks concavity: need c_2 <= gamma c_1");
    }
    if (m == 1 && !tail_gamma) {
      throw InvalidSnowflakeError("a lead segment with a single slope needs a tail");
    }
  }
  PiecewiseLinear p{std::move(breakpoints), std::move(slopes), lead_gamma, tail_gamma, {}};
  p.values.assign(m + 1, 0.0);
  for (std::size_t k = 1; k <= m; ++k) {
    p.values[k] = p.values[k - 1] + p.slopes[k - 1] * (p.breakpoints[k] - p.breakpoints[k - 1]);
  }
  return SnowflakeFunction(std::move(p));
}

SnowflakeFunction SnowflakeFunction::linear_plus_sqrt(double a, double b) {
  if (!(a >= 0.0 && b >= 0.0 && (a > 0.0 || b > 0.0)) || !std::isfinite(a) || !std::isfinite(b)) {
    throw InvalidSnowflakeError("a*t+b*sqrt(t) needs a, b >= 0, not both zero");
  }
  return SnowflakeFunction(Catalog{LinearPlusSqrt{a, b}});
}

SnowflakeFunction SnowflakeFunction::linear_plus_constant(double c, double b) {
  if (!finite_positive(c) || !(b >= 0.0) || !std::isfinite(b)) {
    throw InvalidSnowflakeError("c*t+b needs c > 0 and b >= 0");
  }
  return SnowflakeFunction(Catalog{LinearPlusConstant{c, b}});
}

SnowflakeFunction SnowflakeFunction::scaled_log1p(double a) {
  if (!finite_positive(a)) throw InvalidSnowflakeError("a*log(1+t) needs a > 0");
  return SnowflakeFunction(Catalog{ScaledLog1p{a}});
}

std::string SnowflakeFunction::name() const {
  return std::visit(
      [](const auto& f) -> std::string {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, PowerLaw>) {
          return "t^" + num(f.alpha);
        } else if constexpr (std::is_same_v<F, PiecewiseLinear>) {
          std::string s = "piecewise(";
          s += std::to_string(f.slopes.size()) + " segments";
          if (f.lead_gamma) s += ", lead t^" + num(*f.lead_gamma);
          if (f.tail_gamma) s += ", tail t^" + num(*f.tail_gamma);
          return s + ")";
        } else {
          return std::visit(
              [](const auto& g) -> std::string {
                using G = std::decay_t<decltype(g)>;
                if constexpr (std::is_same_v<G, LinearPlusSqrt>) {
                  return num(g.a) + "*t+" + num(g.b) + "*sqrt(t)";
                } else if constexpr (std::is_same_v<G, LinearPlusConstant>) {
                  return num(g.c) + "*t+" + num(g.b);
                } else {
                  return num(g.a) + "*log(1+t)";
                }
              },
              f);
        }
      },
      v_);
}

double SnowflakeFunction::modulus(double t) const {
  if (!(t > 0.0)) throw DomainError("modulus c(t) = h(t)/t requires t > 0");
  return eval(t) / t;
}

double SnowflakeFunction::modulus_at_zero() const {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return std::visit(
      [](const auto& f) -> double {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, PowerLaw>) {
          return f.alpha < 1.0 ? inf : (f.alpha == 1.0 ? 1.0 : 0.0);
        } else if constexpr (std::is_same_v<F, PiecewiseLinear>) {
          return f.lead_gamma ? inf : f.slopes.front();
        } else {
          return std::visit(
              [](const auto& g) -> double {
                using G = std::decay_t<decltype(g)>;
                if constexpr (std::is_same_v<G, LinearPlusSqrt>) {
                  return g.b > 0.0 ? inf : g.a;
                } else if constexpr (std::is_same_v<G, LinearPlusConstant>) {
                  return g.b > 0.0 ? inf : g.c;
                } else {
                  return g.a;
                }
              },
              f);
        }
      },
      v_);
}

double SnowflakeFunction::modulus_at_infinity() const {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return std::visit(
      [](const auto& f) -> double {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, PowerLaw>) {
          return f.alpha < 1.0 ? 0.0 : (f.alpha == 1.0 ? 1.0 : inf);
        } else if constexpr (std::is_same_v<F, PiecewiseLinear>) {
          return f.tail_gamma ? 0.0 : f.slopes.back();
        } else {
          return std::visit(
              [](const auto& g) -> double {
                using G = std::decay_t<decltype(g)>;
                if constexpr (std::is_same_v<G, LinearPlusSqrt>) {
                  return g.a;
                } else if constexpr (std::is_same_v<G, LinearPlusConstant>) {
                  return g.c;
                } else {
                  return 0.0;
                }
              },
              f);
        }
      },
      v_);
}

bool SnowflakeFunction::strictly_increasing() const {
  // Every constructible variant has positive coefficients.
  return true;
}

namespace {

// Concavity and monotonicity of h on {0} U grid, relative tolerance 1e-12.
Verdict grid_concavity(const SnowflakeFunction& h, const std::vector<double>& grid) {
  std::vector<double> t{0.0};
  t.insert(t.end(), grid.begin(), grid.end());
  std::vector<double> v(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) v[i] = h(t[i]);
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (v[i] < v[i - 1] - 1e-12 * std::abs(v[i])) return Verdict::fails;
  }
  for (std::size_t i = 1; i + 1 < t.size(); ++i) {
    const double w = (t[i] - t[i - 1]) / (t[i + 1] - t[i - 1]);
    const double chord = (1.0 - w) * v[i - 1] + w * v[i + 1];
    if (v[i] < chord - 1e-12 * std::max(std::abs(v[i]), std::abs(chord))) return Verdict::fails;
  }
  return Verdict::holds;
}

// c(t) -> inf as t -> 0, judged from the three smallest decades of the grid.
Verdict estimate_s3(const SnowflakeFunction& h, const ProbeGrid& g) {
  const double ref = h.modulus(std::sqrt(g.t_min * g.t_max));
  const double c0 = h.modulus(g.t_min);
  const double c1 = h.modulus(g.t_min * 10.0);
  const double c2 = h.modulus(g.t_min * 100.0);
  if (c0 >= 1e3 * ref) return Verdict::holds;
  const double d1 = c0 - c1;
  const double d2 = c1 - c2;
  if (d1 <= 0.0) return Verdict::fails;
  if (d2 > 0.0 && d1 / d2 < 0.5) return Verdict::fails;  // increments shrink geometrically
  return Verdict::undetermined;
}

// c(t) -> 0 as t -> inf, judged from the three largest decades of the grid.
Verdict estimate_s4(const SnowflakeFunction& h, const ProbeGrid& g) {
  const double ref = h.modulus(std::sqrt(g.t_min * g.t_max));
  const double c0 = h.modulus(g.t_max);
  const double c1 = h.modulus(g.t_max / 10.0);
  const double c2 = h.modulus(g.t_max / 100.0);
  if (c0 <= 1e-3 * ref) return Verdict::holds;
  const double d1 = c1 - c0;
  const double d2 = c2 - c1;
  if (d1 <= 0.0) return Verdict::fails;
  if (d2 > 0.0) {
    const double q = d1 / d2;
    if (q < 0.5) {
      const double limit = c0 - d1 * q / (1.0 - q);
      if (limit > 0.5 * c0) return Verdict::fails;
    }
  }
  return Verdict::undetermined;
}

}  // namespace

AxiomFlags check_axioms(const SnowflakeFunction& h, const ProbeGrid& probe) {
  AxiomFlags flags;
  flags.s1 = h(0.0) == 0.0 ? Verdict::holds : Verdict::fails;
  const auto& v = h.variant();
  if (const auto* p = std::get_if<PowerLaw>(&v)) {
    flags.s2 = p->alpha <= 1.0 ? Verdict::holds : Verdict::fails;
    flags.s3 = p->alpha < 1.0 ? Verdict::holds : Verdict::fails;
    flags.s4 = p->alpha < 1.0 ? Verdict::holds : Verdict::fails;
    return flags;
  }
  if (const auto* p = std::get_if<PiecewiseLinear>(&v)) {
    // Concavity is enforced on construction.
    flags.s2 = Verdict::holds;
    flags.s3 = p->lead_gamma ? Verdict::holds : Verdict::fails;
    flags.s4 = p->tail_gamma ? Verdict::holds : Verdict::fails;
    return flags;
  }
  flags.s2 = grid_concavity(h, probe.points());
  flags.s3 = estimate_s3(h, probe);
  flags.s4 = estimate_s4(h, probe);
  return flags;
}

double threshold_T(const SnowflakeFunction& h, double t, double rel_tol) {
  if (!(t > 0.0)) throw DomainError("threshold_T requires t > 0");
  const double target = 0.5 * h.modulus(t);
  if (!(h.modulus_at_infinity() < target)) {
    throw UnboundedThresholdError("c(S) never drops to c(t)/2: no finite threshold T(t)");
  }
  double lo = t;
  double hi = 2.0 * t;
  while (h.modulus(hi) > target) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi) || hi > 1e300) {
      throw UnboundedThresholdError("threshold T(t) exceeds the representable range");
    }
  }
  while (hi - lo > rel_tol * hi) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (h.modulus(mid) <= target) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

double threshold_T_tilde(const SnowflakeFunction& h, double S, double rel_tol) {
  if (!(S > 0.0)) throw DomainError("threshold_T_tilde requires S > 0");
  const double target = 2.0 * h.modulus(S);
  if (!(h.modulus_at_zero() > target)) {
    throw ZeroThresholdError("c(t) never reaches 2 c(S) near zero: threshold T~(S) is zero");
  }
  double hi = S;
  double lo = 0.5 * S;
  while (h.modulus(lo) < target) {
    hi = lo;
    lo *= 0.5;
    if (lo < 1e-300) throw ZeroThresholdError("threshold T~(S) below the representable range");
  }
  while (hi - lo > rel_tol * hi) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (h.modulus(mid) >= target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::min(lo, S);
}

HalvingCheck check_halving(const SnowflakeFunction& h, double S, double t) {
  if (!(S > 0.0) || !(t > 0.0)) throw DomainError("check_halving requires S, t > 0");
  const double slack = h(S) + 0.5 * h(t) - h(S + t);
  return {slack >= 0.0, slack};
}

}  // namespace snowlab
