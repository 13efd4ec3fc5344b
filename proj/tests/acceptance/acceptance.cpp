// One line per acceptance criterion: PASS or FAIL, the measured quantities and
// the wall time against the budget. Exit status 0 only when every line passes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "snowlab/certify.hpp"
#include "snowlab/counterexample.hpp"
#include "snowlab/embed.hpp"
#include "snowlab/errors.hpp"
#include "snowlab/metric.hpp"
#include "snowlab/norm.hpp"
#include "snowlab/snowflake.hpp"

using namespace snowlab;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

void fail(Outcome& o, const std::string& why) {
  if (o.pass) o.detail.clear();
  o.pass = false;
  if (!o.detail.empty()) o.detail += "; ";
  o.detail += why;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

FiniteMetric equilateral(int n) { return make_metric(Matrix::Ones(n, n) - Matrix::Identity(n, n)); }

FiniteMetric k13() {
  Matrix d(4, 4);
  d << 0, 1, 1, 1,
       1, 0, 2, 2,
       1, 2, 0, 2,
       1, 2, 2, 0;
  return make_metric(d);
}

double distance_gap(const Matrix& a, const Matrix& b) {
  double g = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = i + 1; j < a.rows(); ++j)
      g = std::max(g, std::abs((a.row(i) - a.row(j)).norm() - (b.row(i) - b.row(j)).norm()));
  return g;
}

std::vector<Norm> norm_matrix() {
  std::vector<Norm> out;
  for (int n : {2, 3}) {
    for (double p : {1.0, 1.5, 2.0, 4.0, HUGE_VAL}) out.push_back(Norm::lp(p, n));
  }
  out.push_back(Norm::regular_polygon(4));
  out.push_back(Norm::regular_polygon(6));
  Matrix sq(4, 2);
  sq << 1, 1, 1, -1, -1, 1, -1, -1;
  out.push_back(Norm::polytope_from_vertices(sq));
  return out;
}

// --- criteria --------------------------------------------------------------

Outcome simplex() {
  Outcome o;
  double worst = 0.0;
  for (int n = 3; n <= 8; ++n) {
    const auto g = euclidean_embed(equilateral(n));
    if (g.min_dim != n - 1) fail(o, "n = " + std::to_string(n) + " wrong dimension");
    worst = std::max(worst, g.residual);
  }
  if (!(worst < 1e-9)) fail(o, "residual " + fmt("%.3g", worst));
  if (o.pass) o.detail = "n = 3..8 in R^{n-1}, max residual " + fmt("%.2g", worst);
  return o;
}

Outcome newton() {
  Outcome o;
  std::mt19937_64 rng(0);
  std::uniform_real_distribution<double> u(-0.01, 0.01);
  const int n = 6;
  double worst_res = 0.0, worst_gap = 0.0;
  int worst_iter = 0;
  for (int rep = 0; rep < 100; ++rep) {
    Matrix rho = Matrix::Ones(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) rho(i, j) = rho(j, i) = 1.0 + u(rng);
    NewtonState s;
    try {
      s = newton_embed(rho);
    } catch (const Error& e) {
      fail(o, std::string("run ") + std::to_string(rep) + ": " + e.what());
      continue;
    }
    Matrix d = rho;
    d.diagonal().setZero();
    const auto g = euclidean_embed(make_metric(d));
    if (!g.coords) {
      fail(o, "target " + std::to_string(rep) + " not embeddable");
      continue;
    }
    worst_res = std::max(worst_res, s.residual_sq);
    worst_iter = std::max(worst_iter, s.iterations);
    worst_gap = std::max(worst_gap, distance_gap(s.points, *g.coords));
  }
  if (!(worst_res < 1e-12)) fail(o, "residual_sq " + fmt("%.3g", worst_res));
  if (worst_iter > 50) fail(o, std::to_string(worst_iter) + " iterations");
  if (!(worst_gap < 1e-9)) fail(o, "distance agreement " + fmt("%.3g", worst_gap));
  if (o.pass) {
    o.detail = "100 targets, max residual_sq " + fmt("%.2g", worst_res) + ", max iterations " +
               std::to_string(worst_iter) + ", distance agreement " + fmt("%.2g", worst_gap);
  }
  return o;
}

Outcome jacobian() {
  Outcome o;
  double worst = 0.0;
  for (int n = 3; n <= 6; ++n) {
    const Matrix J = distance_map_jacobian_numeric(simplex_base(n), 1e-5);
    int r = 0;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j, ++r) {
        for (int l = 0; l < n; ++l) {
          for (int k = 0; k < n; ++k) {
            // -sqrt 2 at the coordinates q_i^j and q_j^i, 0 at every other off-diagonal coordinate.
            if (l == k) continue;
            const bool hit = (l == i && k == j) || (l == j && k == i);
            worst = std::max(worst, std::abs(J(r, l * n + k) - (hit ? -std::sqrt(2.0) : 0.0)));
          }
        }
      }
    }
  }
  if (!(worst < 1e-6)) fail(o, "max deviation " + fmt("%.3g", worst));
  if (o.pass) o.detail = "n = 3..6, max deviation " + fmt("%.2g", worst);
  return o;
}

Outcome k13_threshold() {
  Outcome o;
  const double target = (1.0 + std::log2(1.5)) / 2.0;
  const auto p = alpha_star(k13());
  if (p.boundaries.size() != 1) {
    fail(o, std::to_string(p.boundaries.size()) + " boundaries");
  } else if (!(std::abs(p.boundaries[0] - target) < 1e-6)) {
    fail(o, "boundary " + fmt("%.9f", p.boundaries[0]));
  }
  const auto g = euclidean_embed(power_snowflake(k13(), 0.9));
  // Oracle: the gram matrix about the centre, eigenvalues by a separate solver.
  const double a = 1.0 - std::pow(2.0, 2.0 * 0.9 - 1.0);
  Eigen::Matrix3d G;
  G << 1, a, a, a, 1, a, a, a, 1;
  const double oracle = Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(G).eigenvalues()(0);
  if (g.embeddable()) fail(o, "alpha = 0.9 reported embeddable");
  if (!(std::abs(g.eigenvalues(0) - oracle) < 1e-12)) fail(o, "eigenvalue " + fmt("%.8f", g.eigenvalues(0)));
  if (!(std::abs(oracle + 0.48221) < 1e-5)) fail(o, "oracle " + fmt("%.8f", oracle));
  if (o.pass) {
    o.detail = "boundary " + fmt("%.9f", p.boundaries[0]) + ", eigenvalue at 0.9 " + fmt("%.6f", g.eigenvalues(0));
  }
  return o;
}

Outcome segment_rank() {
  Outcome o;
  std::string dims;
  for (int n : {5, 10, 20}) {
    Matrix d(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) d(i, j) = std::abs(i - j) / double(n - 1);
    const auto g = euclidean_embed(power_snowflake(make_metric(d), 0.5));
    const double trace = g.gram.trace();
    if (g.min_dim != n - 1) fail(o, "n = " + std::to_string(n) + " not full rank");
    if (!(g.smallest_retained() > 1e-12 * trace)) fail(o, "n = " + std::to_string(n) + " small eigenvalue");
    if (!dims.empty()) dims += ", ";
    dims += std::to_string(n) + " -> " + std::to_string(g.min_dim.value_or(-1)) + " (" +
            fmt("%.2g", g.smallest_retained() / trace) + ")";
  }
  if (o.pass) o.detail = "min_dim " + dims;
  return o;
}

Outcome sandwich() {
  Outcome o;
  double worst = -1.0;
  const auto norms = norm_matrix();
  for (const auto& n : norms) {
    const auto r = check_sandwich(n, john_ellipsoid(n), 10000, 1);
    worst = std::max({worst, r.worst_inner, r.worst_outer});
    if (!r.holds(1e-8)) fail(o, n.describe());
  }
  if (o.pass) o.detail = std::to_string(norms.size()) + " norms x 1e4 directions, worst excursion " + fmt("%.2g", worst);
  return o;
}

// Triple with angle_x(y, z) = phi in the John inner product.
void close_triple(const Ellipsoid& e, std::mt19937_64& rng, double phi, Vector& x, Vector& y, Vector& z) {
  const int n = e.dim();
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.2, 3.0);
  x = Vector(n);
  Vector a(n), b(n);
  for (int i = 0; i < n; ++i) {
    x(i) = g(rng);
    a(i) = g(rng);
    b(i) = g(rng);
  }
  a.normalize();
  b -= b.dot(a) * a;
  b.normalize();
  y = x + e.unwhiten(a * u(rng));
  z = x + e.unwhiten((std::cos(phi) * a + std::sin(phi) * b) * u(rng));
}

Outcome lemmas() {
  Outcome o;
  constexpr int kTriples = 100000;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  long close_checked = 0, compare_checked = 0;
  int close_bad = 0, compare_bad = 0;
  const auto norms = norm_matrix();
  for (const auto& n : norms) {
    const auto geo = make_geometry(n);
    for (int i = 0; i < kTriples; ++i) {
      Vector x, y, z;
      close_triple(geo.john, rng, geo.constants.epsilon * u(rng) * 0.999, x, y, z);
      const auto s = check_lemma_close_to_euclidean(geo, x, y, z);
      if (!s.applicable) continue;
      ++close_checked;
      if (s.slack < -1e-12 * std::max(1.0, s.rhs)) ++close_bad;
    }
    // z near the segment xy, so that both base angles are below pi/4.
    int done = 0;
    while (done < kTriples) {
      Vector x, y, z;
      close_triple(geo.john, rng, kPi / 4.0 * u(rng), x, y, z);
      const Vector zz = x + (0.05 + 0.9 * u(rng)) * (z - x).norm() / (y - x).norm() * (z - x);
      const auto r = check_lemma_angle_comparison(geo, x, y, zz);
      if (!r.applicable) continue;
      ++done;
      ++compare_checked;
      if (r.lower_slack < -1e-12 || r.upper_slack < -1e-12) ++compare_bad;
    }
  }
  if (close_checked < static_cast<long>(norms.size()) * kTriples) fail(o, "close-to-Euclidean: too few admissible triples");
  if (close_bad) fail(o, std::to_string(close_bad) + " close-to-Euclidean violations");
  if (compare_bad) fail(o, std::to_string(compare_bad) + " angle comparison violations");
  if (o.pass) {
    o.detail = std::to_string(close_checked) + " + " + std::to_string(compare_checked) +
               " admissible triples over " + std::to_string(norms.size()) + " norms, 0 violations";
  }
  return o;
}

Outcome spiral() {
  Outcome o;
  const auto h = SnowflakeFunction::linear_plus_sqrt(1.0, 1.0);
  const auto s = build_spiral(ConstructionParams{h, geometric_angles(40), 1.0, {}});
  const auto v = verify_snowflake_preimage(s.points, h);
  if (v.checks != 3 * 10660) fail(o, std::to_string(v.checks) + " checks");
  if (v.violations != 0) fail(o, std::to_string(v.violations) + " violations");
  if (!(v.min_slack >= -1e-9)) fail(o, "min slack " + fmt("%.3g", v.min_slack));
  int bad = 0, samples = 0;
  for (std::size_t i = 0; i < s.alphas.size(); ++i) {
    const auto r = recheck_tichoice(h, s.alphas[i], s.thresholds[i], 10000, 100 + i);
    bad += r.violations;
    samples += r.samples;
  }
  if (bad) fail(o, std::to_string(bad) + " tail recheck violations");
  if (o.pass) {
    o.detail = "10660 triangles (3 sides each), min slack " + fmt("%.4g", v.min_slack) + "; " +
               std::to_string(samples) + " tail samples, 0 violations";
  }
  return o;
}

Outcome remark() {
  Outcome o;
  const std::vector<double> slopes = {0.5, 0.25, 0.125, 0.0625};
  for (int n : {3, 5, 10}) {
    const std::string tag = "n = " + std::to_string(n) + ": ";
    try {
      const auto r = remark_construction(n, slopes);
      if (!check_axioms(r.h).all_hold()) fail(o, tag + "axioms");
      const auto m = metric_from_points(PointConfig{r.points, Norm::l2(2), {}});
      const auto pre = desnowflake(m, r.h, true);
      if (!std::holds_alternative<FiniteMetric>(pre) ||
          !validate_metric(std::get<FiniteMetric>(pre).dist).is_metric) {
        fail(o, tag + "preimage is not a metric");
      }
    } catch (const Error& e) {
      fail(o, tag + e.what());
    }
  }
  if (o.pass) o.detail = "n = 3, 5, 10: all four axioms, preimages are metrics";
  return o;
}

Outcome refutation() {
  Outcome o;
  auto pull = [](double v) { return v * v; };
  auto direct = [&](const PointConfig& p, const ViolationCertificate& c) {
    auto d = [&](int a, int b) { return pull(p.norm(p.point(a) - p.point(b))); };
    return d(c.x, c.apex) + d(c.apex, c.y) - d(c.x, c.y);
  };
  std::string found;
  Matrix tri(3, 2);
  tri << 0, 0, 1, 0, 2, 1e-6;
  std::vector<std::pair<std::string, PointConfig>> positives = {{"near-collinear", {tri, Norm::l2(2), {}}}};
  std::mt19937_64 rng(0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Matrix cloud(600, 2);
  for (Eigen::Index i = 0; i < cloud.size(); ++i) cloud(i) = u(rng);
  positives.push_back({"600 points l2", {cloud, Norm::l2(2), {}}});
  positives.push_back({"600 points linf", {cloud, Norm::linf(2), {}}});
  for (const auto& [name, p] : positives) {
    const auto r = refute_alpha_embedding(p, 0.5, 0);
    if (!r.certificate) {
      fail(o, name + ": no certificate");
      continue;
    }
    const double slack = direct(p, *r.certificate);
    if (!(slack < -1e-9) || !r.certificate->reverify(p, pull)) fail(o, name + ": re-verification");
    found += (found.empty() ? "" : ", ") + name + " " + fmt("%.3g", slack);
  }

  int negatives = 0;
  std::normal_distribution<double> g;
  for (int n : {3, 5, 8, 12}) {
    for (int dim : {1, 2, 3}) {
      for (double alpha : {0.3, 0.5, 0.7, 0.9}) {
        Matrix src(n, dim);
        for (Eigen::Index i = 0; i < src.size(); ++i) src(i) = g(rng);
        const auto d = metric_from_points(PointConfig{src, Norm::l2(dim), {}});
        const auto e = euclidean_embed(power_snowflake(d, alpha));
        if (!e.coords) {
          fail(o, "snowflaked Euclidean metric not embeddable");
          continue;
        }
        const PointConfig p{*e.coords, Norm::l2(static_cast<int>(e.coords->cols())), {}};
        if (refute_alpha_embedding(p, alpha).certificate) fail(o, "certificate on an embeddable instance");
        ++negatives;
      }
    }
  }
  for (int n = 3; n <= 8; ++n) {
    const auto e = euclidean_embed(equilateral(n));
    const PointConfig p{*e.coords, Norm::l2(n - 1), {}};
    for (double alpha : {0.3, 0.5, 0.9}) {
      if (refute_alpha_embedding(p, alpha).certificate) fail(o, "certificate on a simplex");
      ++negatives;
    }
  }
  if (o.pass) {
    o.detail = "certificates (direct slack): " + found + "; none on " + std::to_string(negatives) +
               " embeddable instances";
  }
  return o;
}

Outcome theta() {
  Outcome o;
  const double t = theta_threshold(2, 0.5);
  if (!(std::abs(t - 1.68e-3) < 0.01 * 1.68e-3)) fail(o, "theta(2, 1/2) = " + fmt("%.5g", t));
  double prev = HUGE_VAL;
  for (int k = 1; k < 100; ++k) {
    const double v = theta_threshold(2, k / 100.0);
    if (v > prev) fail(o, "increase at alpha = " + fmt("%.2f", k / 100.0));
    prev = v;
  }
  if (o.pass) o.detail = "theta(2, 1/2) = " + fmt("%.6g", t) + ", nonincreasing on alpha = 0.01..0.99";
  return o;
}

Outcome halving() {
  Outcome o;
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> lt(-3.0, 3.0);
  std::uniform_real_distribution<double> ls(0.0, 6.0);
  double worst_slack = HUGE_VAL, worst_ratio = 0.0;
  for (double alpha : {0.3, 0.5, 0.7}) {
    const auto h = SnowflakeFunction::power(alpha);
    const double closed = std::pow(2.0, 1.0 / (1.0 - alpha));
    for (int k = 0; k < 100000; ++k) {
      const double t = std::pow(10.0, lt(rng));
      const double T = threshold_T(h, t);
      if (k < 1000) worst_ratio = std::max(worst_ratio, std::abs(T / t / closed - 1.0));
      const double S = k % 10 == 0 ? T : T * std::pow(10.0, ls(rng));
      worst_slack = std::min(worst_slack, check_halving(h, S, t).slack);
    }
  }
  if (!(worst_slack >= -1e-12)) fail(o, "slack " + fmt("%.3g", worst_slack));
  if (!(worst_ratio <= 1e-9)) fail(o, "T(t)/t off by " + fmt("%.3g", worst_ratio));
  if (o.pass) {
    o.detail = "3 x 1e5 pairs, min slack " + fmt("%.3g", worst_slack) + ", T(t)/t relative error " +
               fmt("%.2g", worst_ratio);
  }
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double budget;  // seconds
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "simplex embedding", 1.0, simplex},
      {2, "Newton solver near the simplex", 5.0, newton},
      {3, "Jacobian at the simplex", 1.0, jacobian},
      {4, "K13 threshold", 1.0, k13_threshold},
      {5, "snowflaked segment rank", 1.0, segment_rank},
      {6, "John sandwich", 5.0, sandwich},
      {7, "comparison lemmas Monte-Carlo", 30.0, lemmas},
      {8, "spiral construction N = 40", 5.0, spiral},
      {9, "per-n embedding", 5.0, remark},
      {10, "refutation soundness and success", 60.0, refutation},
      {11, "theta threshold", 1.0, theta},
      {12, "halving inequality", 5.0, halving},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      fail(o, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.budget) fail(o, "took " + fmt("%.2f", secs) + " s, budget " + fmt("%.0f", c.budget) + " s");
    if (!o.pass) ++failed;
    std::printf("%s [%2d] %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
