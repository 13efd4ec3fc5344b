#include <cmath>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "snowlab/certify.hpp"
#include "snowlab/counterexample.hpp"
#include "snowlab/embed.hpp"
#include "snowlab/errors.hpp"
#include "snowlab/metric.hpp"
#include "snowlab/norm.hpp"
#include "snowlab/ramsey.hpp"
#include "snowlab/snowflake.hpp"

namespace snowlab::cli {

namespace {

struct Check {
  const char* module;
  const char* what;
  std::function<bool()> run;
};

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

FiniteMetric k13() {
  Matrix d(4, 4);
  d << 0, 1, 1, 1, 1, 0, 2, 2, 1, 2, 0, 2, 1, 2, 2, 0;
  return make_metric(d);
}

FiniteMetric equilateral(int n) {
  Matrix d = Matrix::Ones(n, n) - Matrix::Identity(n, n);
  return make_metric(d);
}

FiniteMetric line_metric(int n, double step) {
  Matrix d(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) d(i, j) = std::abs(i - j) * step;
  return make_metric(d);
}

Matrix rows2(std::initializer_list<std::pair<double, double>> pts) {
  Matrix m(static_cast<Eigen::Index>(pts.size()), 2);
  Eigen::Index i = 0;
  for (const auto& [x, y] : pts) {
    m(i, 0) = x;
    m(i, 1) = y;
    ++i;
  }
  return m;
}

Vector vec2(double x, double y) {
  Vector v(2);
  v << x, y;
  return v;
}

const std::vector<Check>& checks() {
  static const std::vector<Check> table = {
      // metric-core
      {"metric-core", "1x1 matrix is a metric", [] { return validate_metric(Matrix::Zero(1, 1)).is_metric; }},
      {"metric-core", "K13 path metric is a metric", [] { return validate_metric(k13().dist).is_metric; }},
      {"metric-core", "1, 1, 5 fails with worst slack -3",
       [] {
         Matrix d(3, 3);
         d << 0, 1, 5, 1, 0, 1, 5, 1, 0;
         const auto r = validate_metric(d);
         return !r.is_metric && near(r.worst_triangle->slack, -3.0, 1e-12);
       }},
      {"metric-core", "K13 with t^0.9: leaf distance 2^0.9",
       [] {
         const auto m = apply_snowflake(k13(), SnowflakeFunction::power(0.9));
         return near(m(1, 2), std::pow(2.0, 0.9), 1e-15) && m(0, 1) == 1.0;
       }},
      {"metric-core", "collinear 0, 1, 2 with t^0.5: pulled-back triangle fails",
       [] {
         const auto r = desnowflake(line_metric(3, 1.0), SnowflakeFunction::power(0.5), true);
         return std::holds_alternative<TriangleViolation>(r);
       }},
      {"metric-core", "simplex e_j / sqrt 2 has unit distances",
       [] {
         const auto m = metric_from_points(PointConfig{simplex_base(5), Norm::l2(5), {}});
         return (m.dist - equilateral(5).dist).cwiseAbs().maxCoeff() < 1e-15;
       }},
      // snowflake
      {"snowflake", "t^0.5: eval 9 = 3, inverse 3 = 9",
       [] {
         const auto h = SnowflakeFunction::power(0.5);
         return near(h(9.0), 3.0, 1e-15) && near(h.inverse(3.0), 9.0, 1e-14);
       }},
      {"snowflake", "t + sqrt(t): eval 4 = 6, inverse 6 = 4",
       [] {
         const auto h = SnowflakeFunction::linear_plus_sqrt(1.0, 1.0);
         return near(h(4.0), 6.0, 1e-15) && near(h.inverse(6.0), 4.0, 1e-12);
       }},
      {"snowflake", "t^0.5 satisfies all four axioms",
       [] { return check_axioms(SnowflakeFunction::power(0.5)).all_hold(); }},
      {"snowflake", "t + sqrt(t) fails S4 only",
       [] {
         const auto f = check_axioms(SnowflakeFunction::linear_plus_sqrt(1.0, 1.0));
         return f.s1 == Verdict::holds && f.s2 == Verdict::holds && f.s3 == Verdict::holds &&
                f.s4 == Verdict::fails;
       }},
      {"snowflake", "T(1) = 4 and T(4) = 16 for t^0.5",
       [] {
         const auto h = SnowflakeFunction::power(0.5);
         return near(threshold_T(h, 1.0), 4.0, 1e-9) && near(threshold_T(h, 4.0), 16.0, 1e-9);
       }},
      {"snowflake", "T~(4) = 1 and T~(16) = 4 for t^0.5",
       [] {
         const auto h = SnowflakeFunction::power(0.5);
         return near(threshold_T_tilde(h, 4.0), 1.0, 1e-9) && near(threshold_T_tilde(h, 16.0), 4.0, 1e-9);
       }},
      {"snowflake", "halving slack sqrt5 case",
       [] {
         const auto r = check_halving(SnowflakeFunction::power(0.5), 4.0, 1.0);
         return r.holds && near(r.slack, 2.5 - std::sqrt(5.0), 1e-12);
       }},
      // norm-geometry
      {"norm-geometry", "linf and l1 examples",
       [] { return Norm::linf(2)(vec2(1, -0.5)) == 1.0 && Norm::l1(2)(vec2(1, 1)) == 2.0; }},
      {"norm-geometry", "square polytope matches linf",
       [] {
         const auto sq = Norm::polytope_from_vertices(rows2({{1, 1}, {1, -1}}));
         return near(sq(vec2(1, -0.5)), 1.0, 1e-12);
       }},
      {"norm-geometry", "John ellipsoid of l1 in R^2 is 2 I",
       [] { return (john_ellipsoid(Norm::l1(2)).matrix() - 2.0 * Matrix::Identity(2, 2)).norm() < 1e-12; }},
      {"norm-geometry", "angle in diag(4, 1)",
       [] {
         Matrix A(2, 2);
         A << 4, 0, 0, 1;
         return near(angle(Ellipsoid(A), vec2(1, 0), vec2(1, 1)), std::acos(4.0 / (2.0 * std::sqrt(5.0))), 1e-12);
       }},
      {"norm-geometry", "projection in diag(2, 1)",
       [] {
         Matrix A(2, 2);
         A << 2, 0, 0, 1;
         const Vector z = project_to_line(Ellipsoid(A), vec2(0, 0), vec2(1, 0), vec2(1, 1));
         return (z - vec2(1, 0)).norm() < 1e-15;
       }},
      {"norm-geometry", "n = 2: K = 2 sqrt 2, C = 16.241",
       [] {
         const auto k = lemma_constants(2);
         return near(k.K, 2.0 * std::sqrt(2.0), 1e-15) && near(k.C, 16.241, 2e-3);
       }},
      // embed
      {"embed", "equilateral n-point metrics embed in R^{n-1}",
       [] {
         for (int n = 3; n <= 8; ++n) {
           if (min_embedding_dimension(equilateral(n)) != n - 1) return false;
         }
         return true;
       }},
      {"embed", "K13 with alpha 0.9: gram eigenvalue -0.48221",
       [] {
         const auto g = euclidean_embed(power_snowflake(k13(), 0.9));
         return !g.embeddable() && near(g.eigenvalues(0), 1.0 + 2.0 * (1.0 - std::pow(2.0, 0.8)), 1e-12);
       }},
      {"embed", "20 points of [0,1] with alpha 1/2 need 19 dimensions",
       [] { return min_embedding_dimension(power_snowflake(line_metric(20, 1.0 / 19.0), 0.5)) == 19; }},
      {"embed", "collinear 1, 1, 2 embeds in R^1", [] { return min_embedding_dimension(line_metric(3, 1.0)) == 1; }},
      {"embed", "Newton from rho = 1 returns the simplex",
       [] {
         const auto s = newton_embed(Matrix::Ones(5, 5));
         return s.residual_sq < 1e-15 && (s.points - simplex_base(5)).norm() < 1e-15;
       }},
      {"embed", "K13 boundary (1 + log2(3/2)) / 2",
       [] {
         const auto p = alpha_star(k13());
         return p.boundaries.size() == 1 && near(p.boundaries[0], (1.0 + std::log2(1.5)) / 2.0, 1e-6);
       }},
      {"embed", "2 points into R^1 have distortion 1",
       [] { return near(distortion_probe(line_metric(2, 3.0), 1, 2, 0).distortion, 1.0, 1e-6); }},
      // ramsey-angles
      {"ramsey-angles", "collinear points: angle pi at the middle",
       [] {
         const auto t = max_angle_triple(rows2({{0, 0}, {1, 0}, {2, 0}}), Ellipsoid::identity(2));
         return t.angle == kPi && t.j == 1;
       }},
      {"ramsey-angles", "unit square: pi / 2",
       [] {
         const auto t = max_angle_triple(rows2({{0, 0}, {1, 0}, {1, 1}, {0, 1}}), Ellipsoid::identity(2));
         return near(t.angle, kPi / 2.0, 1e-14);
       }},
      {"ramsey-angles", "regular 12-gon: 5 pi / 6",
       [] {
         Matrix p(12, 2);
         for (int j = 0; j < 12; ++j) {
           p(j, 0) = std::cos(2 * kPi * j / 12);
           p(j, 1) = std::sin(2 * kPi * j / 12);
         }
         return near(max_angle_triple(p, Ellipsoid::identity(2)).angle, kPi * 10.0 / 12.0, 1e-12);
       }},
      {"ramsey-angles", "equilateral triangle has no angle above pi / 2",
       [] {
         return !find_angle_above(rows2({{0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2}}), Ellipsoid::identity(2),
                                  kPi / 2)
                     .has_value();
       }},
      {"ramsey-angles", "line: floor 2", [] { return empirical_ramsey_floor(1, 3.0, 200, 0).floor == 2; }},
      {"ramsey-angles", "plane, beta = 2 pi / 3: floor >= 4",
       [] { return empirical_ramsey_floor(2, 2.0 * kPi / 3.0, 500, 0).floor >= 4; }},
      // counterexample
      {"counterexample", "linear h: solve_ti returns prev_t",
       [] { return solve_ti(SnowflakeFunction::power(1.0), kPi / 8, 3.0) == 3.0; }},
      {"counterexample", "N = 1 spiral is (0,0), (h(t_1), 0)",
       [] {
         const auto h = SnowflakeFunction::linear_plus_sqrt(1.0, 1.0);
         const auto s = build_spiral(ConstructionParams{h, geometric_angles(1), 1.0, {}});
         const Matrix c = s.coords();
         return c.rows() == 2 && c(0, 0) == 0.0 && c(1, 1) == 0.0 && near(c(1, 0), h(s.thresholds[0]), 1e-9);
       }},
      {"counterexample", "spiral for t + sqrt(t), N = 12: zero violations",
       [] {
         const auto h = SnowflakeFunction::linear_plus_sqrt(1.0, 1.0);
         const auto s = build_spiral(ConstructionParams{h, geometric_angles(12), 1.0, {}});
         return verify_snowflake_preimage(s.points, h).violations == 0;
       }},
      {"counterexample", "collinear 0, 1, 2 with t^0.5 violates",
       [] {
         return verify_snowflake_preimage(rows2({{0, 0}, {1, 0}, {2, 0}}), SnowflakeFunction::power(0.5))
                    .violations > 0;
       }},
      {"counterexample", "remark construction, n = 3 and n = 10",
       [] {
         const std::vector<double> slopes = {0.5, 0.25, 0.125, 0.0625};
         for (int n : {3, 10}) {
           const auto r = remark_construction(n, slopes);
           if (r.verification.violations != 0 || !check_axioms(r.h).all_hold()) return false;
         }
         return true;
       }},
      // certify
      {"certify", "theta(2, 1/2) = 1.68e-3", [] { return near(theta_threshold(2, 0.5), 1.68e-3, 1.68e-5); }},
      {"certify", "table provider returns 10 verbatim",
       [] { return cardinality_bound(2, 0.5, table_provider({{{2, 3.2}, 10}})).N == 10; }},
      {"certify", "absent provider raises the unavailable-bound error",
       [] {
         try {
           cardinality_bound(2, 0.5, RamseyProvider{});
         } catch (const UnavailableBoundError&) {
           return true;
         }
         return false;
       }},
      {"certify", "near-collinear triple: 4 > 1 + 1",
       [] {
         const PointConfig p{rows2({{0, 0}, {1, 0}, {2, 1e-6}}), Norm::l2(2), {}};
         const auto r = refute_alpha_embedding(p, 0.5);
         return r.certificate && near(r.certificate->d_xy, 4.0, 1e-9) &&
                r.certificate->reverify(p, [](double v) { return v * v; });
       }},
      {"certify", "equilateral triangle: no certificate",
       [] {
         const PointConfig p{rows2({{0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2}}), Norm::l2(2), {}};
         return !refute_alpha_embedding(p, 0.5).certificate;
       }},
      {"certify", "geometric ray with t^0.5: certificate in the unbounded mode",
       [] {
         Matrix p(5, 2);
         for (int i = 0; i < 5; ++i) {
           p(i, 0) = std::pow(4.0, i);
           p(i, 1) = 0.0;
         }
         return refute_h_embedding(PointConfig{p, Norm::l2(2), {}}, SnowflakeFunction::power(0.5),
                                   WitnessMode::unbounded)
             .certificate.has_value();
       }},
  };
  return table;
}

}  // namespace

int run_selftest(const std::string& module) {
  int ran = 0;
  int failed = 0;
  for (const auto& c : checks()) {
    if (module != "all" && module != c.module) continue;
    ++ran;
    bool ok = false;
    std::string err;
    try {
      ok = c.run();
    } catch (const std::exception& e) {
      err = e.what();
    }
    if (!ok) ++failed;
    std::cout << (ok ? "ok    " : "FAIL  ") << c.module << ": " << c.what;
    if (!err.empty()) std::cout << " (" << err << ")";
    std::cout << "\n";
  }
  if (ran == 0) return -1;
  std::cout << ran - failed << "/" << ran << " checks passed\n";
  return failed;
}

}  // namespace snowlab::cli
