#pragma once

// Finite-dimensional norms, their John ellipsoids, inner-product angles and the
// near-Euclidean comparison constants used by the refutation machinery.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include "snowlab/types.hpp"

namespace snowlab {

struct LpNorm {
  double p;  // in [1, inf]; +inf for the max norm
  int dim;
};

/// Symmetric polytope {x : |a_i . x| <= 1}. Facet normals are the rows of
/// `facets`, vertices the rows of `vertices`; each +-pair is stored once.
struct PolytopeNorm {
  Matrix facets;
  Matrix vertices;
};

/// ||x|| = sqrt(x^T A x)
struct EllipsoidalNorm {
  Matrix A;
};

class Norm {
 public:
  using Variant = std::variant<LpNorm, PolytopeNorm, EllipsoidalNorm>;

  static Norm lp(double p, int dim);
  static Norm l1(int dim) { return lp(1.0, dim); }
  static Norm l2(int dim) { return lp(2.0, dim); }
  static Norm linf(int dim);
  /// Vertices of a symmetric polytope (the -v copies may be omitted). Points
  /// that are not extreme are dropped.
  static Norm polytope_from_vertices(const Matrix& vertices);
  /// Facet functionals a_i of {x : |a_i . x| <= 1}; redundant rows are dropped.
  static Norm polytope_from_facets(const Matrix& facets);
  static Norm ellipsoidal(const Matrix& A);

  /// Regular 2k-gon with vertices on the unit circle.
  static Norm regular_polygon(int vertices);

  int dim() const;
  double operator()(const Vector& v) const;
  const Variant& variant() const { return v_; }
  std::string describe() const;

 private:
  explicit Norm(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

/// Centred ellipsoid {x : x^T A x <= 1}; also the inner product <u, v> = u^T A v.
class Ellipsoid {
 public:
  explicit Ellipsoid(const Matrix& A);
  static Ellipsoid identity(int n) { return Ellipsoid(Matrix::Identity(n, n)); }

  int dim() const { return static_cast<int>(A_.rows()); }
  const Matrix& matrix() const { return A_; }
  double inner(const Vector& u, const Vector& v) const { return u.dot(A_ * v); }
  double norm(const Vector& v) const { return std::sqrt(std::max(0.0, inner(v, v))); }
  /// Coordinates in which the inner product is the standard one: L^T v with A = L L^T.
  Vector whiten(const Vector& v) const { return L_.transpose() * v; }
  Vector unwhiten(const Vector& w) const;

 private:
  Matrix A_;
  Matrix L_;
};

/// Inner product whose unit ball B satisfies B c B_V c sqrt(n) B, with B the
/// maximal-volume ellipsoid inscribed in the unit ball B_V of the norm.
Ellipsoid john_ellipsoid(const Norm& norm);

struct SandwichReport {
  int samples = 0;
  double worst_inner = 0.0;  // max over samples of ||u|| - ||u||_e   (should be <= 0)
  double worst_outer = 0.0;  // max over samples of ||u||_e / sqrt(n) - ||u||   (<= 0)
  bool holds(double tol) const { return worst_inner <= tol && worst_outer <= tol; }
};

SandwichReport check_sandwich(const Norm& norm, const Ellipsoid& e, int samples,
                              std::uint64_t seed);

/// Angle between u and v in the inner product of e, in [0, pi].
double angle(const Ellipsoid& e, const Vector& u, const Vector& v);
/// Angle at apex y between x and z.
double angle_at(const Ellipsoid& e, const Vector& y, const Vector& x, const Vector& z);
/// e-orthogonal projection of z onto the line through x and y.
Vector project_to_line(const Ellipsoid& e, const Vector& x, const Vector& y, const Vector& z);

struct LemmaConstants {
  int n = 1;
  double theta_cone = 0.0;
  double ell_cone = 0.0;
  double epsilon = 0.0;
  double C = 0.0;
  double K = 0.0;
};

/// theta = asin(1/(2 sqrt n)), ell = 1/(2 sqrt n), K = 2 sqrt n,
/// C = (4 cos theta + 2) / sin theta, epsilon the largest multiple of 1e-6
/// (capped at pi/4) with sin theta cos eps - 2 cos theta sin eps > sin theta / 2.
LemmaConstants lemma_constants(int n);

struct ConeValidation {
  int samples = 0;
  int violations = 0;
  double worst = 0.0;  // largest excursion past the unit sphere
};

/// Sample points of the inward and outward cones at random unit-sphere points
/// of the norm and check that they fall inside / outside the ball.
ConeValidation validate_cone_constants(const Norm& norm, const Ellipsoid& e,
                                       const LemmaConstants& k, int samples, std::uint64_t seed);

/// Norm together with its John inner product and comparison constants.
struct NormGeometry {
  Norm norm;
  Ellipsoid john;
  LemmaConstants constants;
};

NormGeometry make_geometry(const Norm& norm);

struct LemmaSlack {
  bool applicable = false;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // rhs - lhs
};

/// | ||x-z|| - ||x-z'|| | <= C ||x-z'|| angle_x(y, z) when angle_x(y, z) < epsilon.
LemmaSlack check_lemma_close_to_euclidean(const NormGeometry& g, const Vector& x, const Vector& y,
                                          const Vector& z);

struct AngleComparisonSlack {
  bool applicable = false;
  double angle_ratio = 0.0;  // angle_x(y,z) / angle_y(x,z)
  double norm_ratio = 0.0;   // ||z'-y|| / ||z'-x||
  double lower_slack = 0.0;  // angle_ratio - norm_ratio / K
  double upper_slack = 0.0;  // K norm_ratio - angle_ratio
};

/// K^{-1} r <= angle_x / angle_y <= K r with r = ||z'-y|| / ||z'-x||, when both
/// angles lie in (0, pi/4).
AngleComparisonSlack check_lemma_angle_comparison(const NormGeometry& g, const Vector& x,
                                                  const Vector& y, const Vector& z);

}  // namespace snowlab
