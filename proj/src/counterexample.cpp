#include "snowlab/counterexample.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "snowlab/errors.hpp"

namespace snowlab {

std::vector<double> geometric_angles(int N) {
  std::vector<double> a;
  for (int i = 1; i <= N; ++i) a.push_back(std::ldexp(kPi, -(i + 2)));
  return a;
}

std::vector<double> inverse_square_angles(int N) {
  std::vector<double> a;
  for (int i = 1; i <= N; ++i) a.push_back(kPi / (4.0 * i * i));
  return a;
}

namespace {

double limit_or_throw(const SnowflakeFunction& h) {
  const double c = h.modulus_at_infinity();
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw DomainError("construction needs c(t) -> c with 0 < c < inf (h must fail S4): " + h.name());
  }
  return c;
}

double margin(const SnowflakeFunction& h, double alpha, double s, double t, bool weak) {
  const double c = h.modulus_at_infinity();
  const double es = h.excess_modulus(s);
  const double et = h.excess_modulus(t);
  const double est = h.excess_modulus(s + t);
  const double sh = std::sin(alpha / 2.0);
  const double rhs =
      2.0 * (2.0 * c * c * sh * sh + 2.0 * c * est + est * est - std::cos(alpha) * (c * es + c * et + es * et));
  const double lhs = weak ? (2.0 * c + es + et) * est : (4.0 * c + es + et + 2.0 * est) * est;
  return rhs - lhs;
}

bool grid_check(const SnowflakeFunction& h, double alpha, double t0, const TiSearch& search) {
  const int P = std::max(2, search.grid_points);
  for (int a = 0; a < P; ++a) {
    const double s = t0 * std::pow(10.0, search.grid_decades * a / (P - 1));
    for (int b = a; b < P; ++b) {
      const double t = t0 * std::pow(10.0, search.grid_decades * b / (P - 1));
      if (!std::isfinite(s + t)) continue;
      if (margin(h, alpha, s, t, false) < 0.0) return false;
    }
  }
  return true;
}

}  // namespace

double tichoice_margin(const SnowflakeFunction& h, double alpha, double s, double t) {
  return margin(h, alpha, s, t, false);
}

double tichoice_margin_weak(const SnowflakeFunction& h, double alpha, double s, double t) {
  return margin(h, alpha, s, t, true);
}

bool tail_test(const SnowflakeFunction& h, double alpha, double t0) {
  const double c = h.modulus_at_infinity();
  const double e0 = h.excess_modulus(t0);
  const double e2 = h.excess_modulus(2.0 * t0);
  const double sh = std::sin(alpha / 2.0);
  const double lhs = (2.0 * (c + e0) + 2.0 * (c + e2)) * e2;
  const double rhs = 2.0 * (2.0 * c * c * sh * sh - (2.0 * c * e0 + e0 * e0) * std::cos(alpha));
  return lhs <= rhs;
}

double solve_ti(const SnowflakeFunction& h, double alpha, double prev_t, const TiSearch& search) {
  limit_or_throw(h);
  if (!(alpha > 0.0 && alpha < kPi / 2.0)) throw DomainError("angle must lie in (0, pi/2)");
  if (!(prev_t > 0.0) || !std::isfinite(prev_t)) throw DomainError("previous t must be positive");
  if (search.per_decade < 1) throw StructuralError("grid needs at least one point per decade");
  auto passes = [&](double t) { return tail_test(h, alpha, t) && grid_check(h, alpha, t, search); };
  if (passes(prev_t)) return prev_t;
  const double pd = search.per_decade;
  for (long k = static_cast<long>(std::floor(std::log10(prev_t) * pd)) + 1;; ++k) {
    const double t = std::pow(10.0, k / pd);
    if (t <= prev_t) continue;
    if (!(t <= search.t_cap) || !std::isfinite(2.0 * t)) break;
    if (passes(t)) return t;
  }
  throw SearchRangeError("no t_i up to the search cap for angle " + std::to_string(alpha));
}

std::vector<Point2W> spiral_points(const std::vector<Wide>& gaps, const std::vector<double>& alphas) {
  const std::size_t N = gaps.size();
  if (N > 0 && alphas.size() + 1 < N) throw StructuralError("need an angle for every turn");
  std::vector<Point2W> pts{{Wide(0), Wide(0)}};
  Wide turn = 0;
  for (std::size_t n = 1; n <= N; ++n) {
    if (n >= 2) turn += Wide(alphas[n - 2]);
    const auto& p = pts.back();
    pts.push_back({p[0] + gaps[n - 1] * cos(turn), p[1] + gaps[n - 1] * sin(turn)});
  }
  return pts;
}

Matrix Spiral::coords() const {
  Matrix m(static_cast<Eigen::Index>(points.size()), 2);
  for (std::size_t i = 0; i < points.size(); ++i) {
    m(static_cast<Eigen::Index>(i), 0) = static_cast<double>(points[i][0]);
    m(static_cast<Eigen::Index>(i), 1) = static_cast<double>(points[i][1]);
  }
  return m;
}

Spiral build_spiral(const ConstructionParams& p) {
  Spiral sp;
  sp.limit_c = limit_or_throw(p.h);
  double total = 0.0;
  for (double a : p.alphas) {
    if (!(a > 0.0)) throw DomainError("turning angles must be positive");
    total += a;
  }
  if (!(total < kPi / 2.0)) throw DomainError("turning angles must sum to less than pi/2");
  sp.alphas = p.alphas;
  double prev = p.t_start;
  for (double a : p.alphas) {
    prev = solve_ti(p.h, a, prev, p.search);
    sp.thresholds.push_back(prev);
    sp.gaps.push_back(p.h.eval(Wide(prev)));
  }
  sp.points = spiral_points(sp.gaps, sp.alphas);
  return sp;
}

namespace {

template <class Real, class Dist>
PreimageReport verify_impl(int n, Dist dist, const SnowflakeFunction& h, double tol) {
  using std::abs;
  if (!h.strictly_increasing()) throw InvalidSnowflakeError("verification needs a strictly increasing h");
  std::vector<Real> d(static_cast<std::size_t>(n) * n, Real(0));
  std::vector<Real> pre(static_cast<std::size_t>(n) * n, Real(0));
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const Real v = dist(i, j);
      if (!(v > Real(0))) throw DegenerateInputError("duplicate points");
      d[i * n + j] = d[j * n + i] = v;
      pre[i * n + j] = pre[j * n + i] = h.inverse(v);
    }
  }
  PreimageReport rep;
  rep.min_slack = std::numeric_limits<double>::infinity();
  rep.min_rel_slack = std::numeric_limits<double>::infinity();
  auto check = [&](int a, int apex, int b) {
    const Real side = d[a * n + b];
    const Real bound = h.eval(pre[a * n + apex] + pre[apex * n + b]);
    const Real slack = bound - side;
    const double s = static_cast<double>(slack);
    ++rep.checks;
    if (s < -tol) ++rep.violations;
    if (s < rep.min_slack) {
      rep.min_slack = s;
      rep.worst = {a, apex, b};
    }
    rep.min_rel_slack = std::min(rep.min_rel_slack, static_cast<double>(slack / side));
  };
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (int k = j + 1; k < n; ++k) {
        check(i, j, k);
        check(i, k, j);
        check(j, i, k);
      }
    }
  }
  if (rep.checks == 0) {
    rep.min_slack = 0.0;
    rep.min_rel_slack = 0.0;
  }
  return rep;
}

}  // namespace

PreimageReport verify_snowflake_preimage(const std::vector<Point2W>& pts, const SnowflakeFunction& h,
                                         double tol) {
  auto dist = [&](int i, int j) {
    const Wide dx = pts[i][0] - pts[j][0];
    const Wide dy = pts[i][1] - pts[j][1];
    return sqrt(dx * dx + dy * dy);
  };
  return verify_impl<Wide>(static_cast<int>(pts.size()), dist, h, tol);
}

PreimageReport verify_snowflake_preimage(const Matrix& pts, const SnowflakeFunction& h, double tol) {
  if (!pts.allFinite()) throw StructuralError("point coordinates must be finite");
  auto dist = [&](int i, int j) { return (pts.row(i) - pts.row(j)).norm(); };
  return verify_impl<double>(static_cast<int>(pts.rows()), dist, h, tol);
}

TailRecheck recheck_tichoice(const SnowflakeFunction& h, double alpha, double t0, int samples,
                             std::uint64_t seed, double decades) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, decades);
  TailRecheck r;
  r.min_margin = std::numeric_limits<double>::infinity();
  for (int k = 0; k < samples; ++k) {
    const double s = t0 * std::pow(10.0, u(rng));
    const double t = t0 * std::pow(10.0, u(rng));
    const double m = tichoice_margin(h, alpha, s, t);
    if (m < 0.0) ++r.violations;
    if (tichoice_margin_weak(h, alpha, s, t) < 0.0) ++r.weak_violations;
    r.min_margin = std::min(r.min_margin, m);
    ++r.samples;
  }
  return r;
}

RemarkConstruction remark_construction(int n, const std::vector<double>& slopes,
                                       const std::vector<double>& seg_lengths,
                                       std::optional<std::vector<double>> alphas) {
  if (n < 2) throw StructuralError("remark construction needs n >= 2");
  const std::size_t m = slopes.size();
  if (m < 2) throw StructuralError("need a lead slope and at least one linear slope");
  if (!(seg_lengths.size() == m || seg_lengths.size() + 1 == m || seg_lengths.empty())) {
    throw StructuralError("segment lengths: give m or m-1 values");
  }
  // Validate slopes (and the lead/concavity constraint) on a provisional h.
  std::vector<double> T{0.0};
  for (std::size_t k = 1; k < m; ++k) {
    const double L = seg_lengths.empty() ? 1.0 : seg_lengths[k - 1];
    if (!(L > 0.0) || !std::isfinite(L)) throw StructuralError("segment lengths must be positive");
    T.push_back(T.back() + L);
  }
  {
    std::vector<double> Tp = T;
    Tp.push_back(T.back() + 1.0);
    (void)SnowflakeFunction::piecewise(Tp, slopes, 0.5, 0.5);
  }
  double H = slopes[0] * T[1];
  for (std::size_t k = 2; k < m; ++k) H += slopes[k - 1] * (T[k] - T[k - 1]);
  const double cm = slopes[m - 1];
  const double bm = H - cm * T[m - 1];
  const auto h_seg = SnowflakeFunction::linear_plus_constant(cm, bm);

  ConstructionParams params{h_seg, alphas ? *alphas : geometric_angles(n - 1), T[m - 1], {}};
  if (static_cast<int>(params.alphas.size()) != n - 1) throw StructuralError("need n-1 turning angles");
  const Spiral sp = build_spiral(params);

  Wide maxd = 0;
  for (std::size_t i = 0; i < sp.points.size(); ++i) {
    for (std::size_t j = i + 1; j < sp.points.size(); ++j) {
      const Wide dx = sp.points[i][0] - sp.points[j][0];
      const Wide dy = sp.points[i][1] - sp.points[j][1];
      maxd = std::max(maxd, Wide(sqrt(dx * dx + dy * dy)));
    }
  }
  // Triangle checks evaluate h at s + t, up to twice the largest preimage.
  const double t_req = 2.0 * static_cast<double>((maxd - Wide(bm)) / Wide(cm));
  const double required = std::max(t_req - T[m - 1], 0.0);
  double L = required * (1.0 + 1e-6) + 1e-9;
  if (seg_lengths.size() == m) {
    L = seg_lengths[m - 1];
    if (L < required) throw RangeError("host segment too short for the points", required);
  }
  T.push_back(T.back() + L);

  RemarkConstruction out{SnowflakeFunction::piecewise(T, slopes, 0.5, 0.5), sp.coords(), T, slopes,
                         static_cast<int>(m), required, {}};
  out.verification = verify_snowflake_preimage(sp.points, out.h);
  return out;
}

}  // namespace snowlab
