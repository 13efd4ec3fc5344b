#include <doctest.h>

#include <cmath>
#include <random>

#include "snowlab/errors.hpp"
#include "snowlab/norm.hpp"

using namespace snowlab;

namespace {

Vector v2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
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

// Random triple with angle_x(y, z) = phi in the inner product of e.
void admissible_close(const Ellipsoid& e, std::mt19937_64& rng, double phi, Vector& x, Vector& y, Vector& z) {
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

}  // namespace

TEST_CASE("norm evaluation examples") {
  CHECK(Norm::linf(2)(v2(1, -0.5)) == 1.0);
  CHECK(Norm::l1(2)(v2(1, 1)) == 2.0);
  Matrix sq(4, 2);
  sq << 1, 1, 1, -1, -1, 1, -1, -1;
  const auto square = Norm::polytope_from_vertices(sq);
  CHECK(square(v2(1, -0.5)) == doctest::Approx(1.0));
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  for (int i = 0; i < 200; ++i) {
    const Vector v = v2(g(rng), g(rng));
    CHECK(square(v) == doctest::Approx(Norm::linf(2)(v)).epsilon(1e-13));
    CHECK(Norm::regular_polygon(4)(v) == doctest::Approx(Norm::l1(2)(v)).epsilon(1e-13));
    CHECK(Norm::lp(3.0, 2)(v) == doctest::Approx(std::cbrt(std::pow(std::abs(v(0)), 3) + std::pow(std::abs(v(1)), 3))));
  }
  CHECK_THROWS_AS(Norm::l2(3)(v2(1, 1)), StructuralError);
}

TEST_CASE("polytope representations") {
  // Interior points are dropped; facets of the square are the l1-dual functionals.
  Matrix v(5, 2);
  v << 1, 1, 1, -1, -1, 1, -1, -1, 0.2, 0.1;
  const auto n = Norm::polytope_from_vertices(v);
  const auto& p = std::get<PolytopeNorm>(n.variant());
  CHECK(p.vertices.rows() == 2);
  CHECK(p.facets.rows() == 2);
  Matrix f(3, 2);
  f << 1, 0, 0, 1, 0.5, 0.5;  // last row redundant
  const auto m = Norm::polytope_from_facets(f);
  CHECK(std::get<PolytopeNorm>(m.variant()).facets.rows() == 2);
  CHECK(m(v2(0.3, -2)) == doctest::Approx(2.0));
  Matrix flat(2, 2);
  flat << 1, 0, 2, 0;
  CHECK_THROWS_AS(Norm::polytope_from_vertices(flat), DegenerateInputError);
}

TEST_CASE("john ellipsoid examples") {
  CHECK((john_ellipsoid(Norm::l2(3)).matrix() - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((john_ellipsoid(Norm::linf(2)).matrix() - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((john_ellipsoid(Norm::l1(2)).matrix() - 2.0 * Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-15);
  // Polytopal: the l1 ball as a square, the hexagon with inradius sqrt(3)/2.
  CHECK((john_ellipsoid(Norm::regular_polygon(4)).matrix() - 2.0 * Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() <
        1e-8);
  CHECK((john_ellipsoid(Norm::regular_polygon(6)).matrix() - (4.0 / 3.0) * Matrix::Identity(2, 2))
            .cwiseAbs()
            .maxCoeff() < 1e-8);
  // Sheared square: the John ellipse of a parallelogram is the affine image of the disc.
  Matrix T(2, 2);
  T << 2, 1, 0, 1;
  Matrix sq(2, 2);
  sq << 1, 1, 1, -1;
  const Matrix verts = (T * sq.transpose()).transpose();
  const Matrix Tinv = T.inverse();
  const Matrix expect = Tinv.transpose() * Tinv;
  CHECK((john_ellipsoid(Norm::polytope_from_vertices(verts)).matrix() - expect).cwiseAbs().maxCoeff() < 1e-8);
  const Ellipsoid e(Matrix(Vector::Constant(3, 2.0).asDiagonal()));
  CHECK((john_ellipsoid(Norm::ellipsoidal(e.matrix())).matrix() - e.matrix()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("john sandwich over the norm matrix") {
  for (const auto& n : norm_matrix()) {
    CAPTURE(n.describe());
    const auto e = john_ellipsoid(n);
    const auto rep = check_sandwich(n, e, 10000, 42);
    CHECK(rep.holds(1e-8));
    CHECK(rep.samples >= 10000);
  }
}

TEST_CASE("angle examples and invariances") {
  const auto I = Ellipsoid::identity(2);
  CHECK(angle(I, v2(1, 0), v2(0, 1)) == doctest::Approx(kPi / 2));
  CHECK(angle_at(I, v2(0, 0), v2(1, 0), v2(-1, 0)) == kPi);
  Matrix A(2, 2);
  A << 4, 0, 0, 1;
  const Ellipsoid E(A);
  CHECK(angle(E, v2(1, 0), v2(1, 1)) == doctest::Approx(std::acos(4.0 / (2.0 * std::sqrt(5.0)))).epsilon(1e-14));
  CHECK(angle(E, v2(1, 0), v2(1, 1)) == doctest::Approx(0.46364760900080615).epsilon(1e-12));
  CHECK_THROWS_AS(angle(I, v2(0, 0), v2(1, 0)), DomainError);

  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  for (int i = 0; i < 500; ++i) {
    const Vector x = v2(g(rng), g(rng)), y = v2(g(rng), g(rng)), z = v2(g(rng), g(rng)), s = v2(g(rng), g(rng));
    const double a = angle_at(E, y, x, z);
    CHECK(a >= 0.0);
    CHECK(a <= kPi);
    CHECK(a == doctest::Approx(angle_at(E, y, z, x)).epsilon(1e-14));
    CHECK(a == doctest::Approx(angle_at(E, y + s, x + s, z + s)).epsilon(1e-10));
    CHECK(a == doctest::Approx(angle_at(E, y, y + 3.7 * (x - y), y + 0.2 * (z - y))).epsilon(1e-12));
  }
}

TEST_CASE("projection examples and properties") {
  const auto I = Ellipsoid::identity(2);
  CHECK((project_to_line(I, v2(0, 0), v2(2, 0), v2(1, 5)) - v2(1, 0)).norm() < 1e-15);
  CHECK((project_to_line(I, v2(0, 0), v2(2, 0), v2(7, 0)) - v2(7, 0)).norm() < 1e-15);
  Matrix A(2, 2);
  A << 2, 0, 0, 1;
  const Ellipsoid E(A);
  CHECK((project_to_line(E, v2(0, 0), v2(1, 0), v2(1, 1)) - v2(1, 0)).norm() < 1e-15);
  CHECK_THROWS_AS(project_to_line(I, v2(1, 1), v2(1, 1), v2(0, 0)), DegenerateInputError);

  Matrix B(2, 2);
  B << 3, 1, 1, 2;
  const Ellipsoid F(B);
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g;
  for (int i = 0; i < 300; ++i) {
    const Vector x = v2(g(rng), g(rng)), y = v2(g(rng), g(rng)), z = v2(g(rng), g(rng));
    const Vector zp = project_to_line(F, x, y, z);
    CHECK(std::abs(F.inner(z - zp, y - x)) < 1e-12 * std::max(1.0, (z - x).squaredNorm() * 4.0));
    CHECK((project_to_line(F, x, y, zp) - zp).norm() < 1e-12 * std::max(1.0, zp.norm()));
  }
}

TEST_CASE("lemma constants") {
  const auto k2 = lemma_constants(2);
  CHECK(k2.K == doctest::Approx(2.0 * std::sqrt(2.0)));
  CHECK(k2.theta_cone == doctest::Approx(std::asin(1.0 / (2.0 * std::sqrt(2.0)))));
  CHECK(k2.theta_cone == doctest::Approx(0.36137).epsilon(1e-4));
  CHECK(k2.C == doctest::Approx(16.241).epsilon(1e-4));
  CHECK(k2.epsilon <= kPi / 4);
  const double st = std::sin(k2.theta_cone), ct = std::cos(k2.theta_cone);
  CHECK(st * std::cos(k2.epsilon) - 2 * ct * std::sin(k2.epsilon) > st / 2);
  const double e2 = k2.epsilon + 1e-6;
  CHECK_FALSE(st * std::cos(e2) - 2 * ct * std::sin(e2) > st / 2);
  const auto k1 = lemma_constants(1);
  CHECK(k1.K == 2.0);
  CHECK(k1.epsilon > 0.0);
  CHECK_THROWS_AS(lemma_constants(0), StructuralError);
}

TEST_CASE("cone constants validate on the norm matrix") {
  for (const auto& n : norm_matrix()) {
    CAPTURE(n.describe());
    const auto e = john_ellipsoid(n);
    const auto v = validate_cone_constants(n, e, lemma_constants(n.dim()), 10000, 3);
    CHECK(v.violations == 0);
  }
}

TEST_CASE("close-to-euclidean lemma") {
  const auto g = make_geometry(Norm::l2(2));
  // z on the line
  const auto on = check_lemma_close_to_euclidean(g, v2(0, 0), v2(1, 0), v2(3, 0));
  CHECK(on.applicable);
  CHECK(on.lhs == 0.0);
  CHECK(on.rhs == 0.0);
  // Euclidean: |xz| - |xz'| = r (1 - cos phi) against C r cos(phi) phi.
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const double phi = g.constants.epsilon * u(rng);
    const double r = 0.1 + 2.0 * u(rng);
    const Vector x = v2(u(rng), u(rng));
    const Vector y = x + v2(1.0, 0.0);
    const Vector z = x + r * v2(std::cos(phi), std::sin(phi));
    const auto s = check_lemma_close_to_euclidean(g, x, y, z);
    REQUIRE(s.applicable);
    CHECK(s.lhs == doctest::Approx(r * (1 - std::cos(phi))).epsilon(1e-6));
    CHECK(s.rhs == doctest::Approx(g.constants.C * r * std::cos(phi) * phi).epsilon(1e-9));
    CHECK(s.slack > 0.0);
  }
  const auto far = check_lemma_close_to_euclidean(g, v2(0, 0), v2(1, 0), v2(0, 1));
  CHECK_FALSE(far.applicable);

  for (const auto& n : norm_matrix()) {
    CAPTURE(n.describe());
    const auto geo = make_geometry(n);
    int violations = 0;
    for (int i = 0; i < 3000; ++i) {
      Vector x, y, z;
      admissible_close(geo.john, rng, geo.constants.epsilon * u(rng) * 0.999, x, y, z);
      const auto s = check_lemma_close_to_euclidean(geo, x, y, z);
      REQUIRE(s.applicable);
      if (s.slack < -1e-12) ++violations;
    }
    CHECK(violations == 0);
  }
}

TEST_CASE("angle comparison lemma") {
  const auto g = make_geometry(Norm::l2(2));
  const auto iso = check_lemma_angle_comparison(g, v2(0, 0), v2(2, 0), v2(1, 0.3));
  REQUIRE(iso.applicable);
  CHECK(iso.angle_ratio == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(iso.norm_ratio == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(iso.lower_slack > 0.0);
  CHECK(iso.upper_slack > 0.0);

  const auto s = check_lemma_angle_comparison(g, v2(0, 0), v2(4, 0), v2(1, 0.2));
  REQUIRE(s.applicable);
  CHECK(s.angle_ratio == doctest::Approx(std::atan(0.2) / std::atan(0.2 / 3.0)));
  CHECK(s.norm_ratio == doctest::Approx(3.0));
  CHECK(s.lower_slack > 0.0);
  CHECK(s.upper_slack > 0.0);

  CHECK_FALSE(check_lemma_angle_comparison(g, v2(0, 0), v2(1, 0), v2(0, 1)).applicable);

  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> gs;
  for (const auto& n : norm_matrix()) {
    CAPTURE(n.describe());
    const auto geo = make_geometry(n);
    const int d = n.dim();
    int checked = 0, violations = 0;
    for (int i = 0; i < 3000; ++i) {
      Vector x(d), dir(d), off(d);
      for (int k = 0; k < d; ++k) {
        x(k) = gs(rng);
        dir(k) = gs(rng);
        off(k) = gs(rng);
      }
      const Vector y = x + dir;
      const Vector z = x + u(rng) * dir + 0.3 * u(rng) * off * dir.norm() / std::max(off.norm(), 1e-9);
      const auto r = check_lemma_angle_comparison(geo, x, y, z);
      if (!r.applicable) continue;
      ++checked;
      if (r.lower_slack < -1e-12 || r.upper_slack < -1e-12) ++violations;
    }
    CHECK(checked > 500);
    CHECK(violations == 0);
  }
}
