#include "snowlab/norm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <vector>

#include "snowlab/errors.hpp"

namespace snowlab {

namespace {

constexpr double kPolarTol = 1e-9;

bool same_up_to_sign(const Vector& a, const Vector& b, double tol) {
  const double scale = std::max(1.0, std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff()));
  return (a - b).cwiseAbs().maxCoeff() <= tol * scale || (a + b).cwiseAbs().maxCoeff() <= tol * scale;
}

std::vector<Vector> dedupe_rows(const Matrix& rows) {
  std::vector<Vector> out;
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    Vector r = rows.row(i).transpose();
    if (!r.allFinite()) throw StructuralError("non-finite polytope data");
    if (r.cwiseAbs().maxCoeff() == 0.0) continue;
    bool dup = false;
    for (const auto& o : out) {
      if (same_up_to_sign(o, r, 1e-12)) {
        dup = true;
        break;
      }
    }
    if (!dup) out.push_back(std::move(r));
  }
  return out;
}

Matrix stack(const std::vector<Vector>& rows, int n) {
  Matrix m(static_cast<Eigen::Index>(rows.size()), n);
  for (std::size_t i = 0; i < rows.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
  return m;
}

// Vertices (one per +- pair) of the polar body {x : |s . x| <= 1 for all rows s}.
// Brute force over n-subsets of constraints and sign patterns; every vertex of
// the polar lies on n linearly independent constraint hyperplanes.
std::vector<Vector> polar_vertices(const std::vector<Vector>& S, int n) {
  const int m = static_cast<int>(S.size());
  if (m < n) throw DegenerateInputError("polytope is not full-dimensional");
  {
    Matrix all = stack(S, n);
    Eigen::FullPivLU<Matrix> lu(all);
    lu.setThreshold(1e-10);
    if (lu.rank() < n) throw DegenerateInputError("polytope is not full-dimensional");
  }
  double combos = 1.0;
  for (int i = 0; i < n; ++i) combos *= static_cast<double>(m - i) / (i + 1);
  combos *= std::ldexp(1.0, n - 1);
  if (combos > 5e6) throw StructuralError("polytope too large for facet enumeration");

  std::vector<Vector> out;
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  Matrix M(n, n);
  Vector rhs(n);
  while (true) {
    for (int i = 0; i < n; ++i) M.row(i) = S[idx[i]].transpose();
    Eigen::FullPivLU<Matrix> lu(M);
    lu.setThreshold(1e-12);
    if (lu.isInvertible()) {
      for (unsigned mask = 0; mask < (1u << (n - 1)); ++mask) {
        rhs(0) = 1.0;
        for (int i = 1; i < n; ++i) rhs(i) = (mask >> (i - 1)) & 1u ? -1.0 : 1.0;
        Vector x = lu.solve(rhs);
        bool feasible = true;
        for (const auto& s : S) {
          if (std::abs(s.dot(x)) > 1.0 + kPolarTol) {
            feasible = false;
            break;
          }
        }
        if (!feasible) continue;
        bool dup = false;
        for (const auto& o : out) {
          if (same_up_to_sign(o, x, 1e-9)) {
            dup = true;
            break;
          }
        }
        if (!dup) out.push_back(x);
      }
    }
    int k = n - 1;
    while (k >= 0 && idx[k] == m - n + k) --k;
    if (k < 0) break;
    ++idx[k];
    for (int j = k + 1; j < n; ++j) idx[j] = idx[j - 1] + 1;
  }
  if (static_cast<int>(out.size()) < n) throw DegenerateInputError("polytope is unbounded or flat");
  return out;
}

PolytopeNorm make_polytope(const std::vector<Vector>& facets, int n) {
  // Facets of conv(+-vertices) are the vertices of the polar body, and vice versa.
  auto vertices = polar_vertices(facets, n);
  auto canonical = polar_vertices(vertices, n);
  return PolytopeNorm{stack(canonical, n), stack(vertices, n)};
}

}  // namespace

Norm Norm::lp(double p, int dim) {
  if (dim < 1) throw StructuralError("norm dimension must be >= 1");
  if (!(p >= 1.0)) throw StructuralError("l_p norm needs p >= 1");
  return Norm(LpNorm{p, dim});
}

Norm Norm::linf(int dim) { return lp(std::numeric_limits<double>::infinity(), dim); }

Norm Norm::polytope_from_vertices(const Matrix& vertices) {
  const int n = static_cast<int>(vertices.cols());
  if (n < 1) throw StructuralError("polytope needs at least one coordinate");
  auto verts = dedupe_rows(vertices);
  auto facets = polar_vertices(verts, n);
  return Norm(make_polytope(facets, n));
}

Norm Norm::polytope_from_facets(const Matrix& facets) {
  const int n = static_cast<int>(facets.cols());
  if (n < 1) throw StructuralError("polytope needs at least one coordinate");
  return Norm(make_polytope(dedupe_rows(facets), n));
}

Norm Norm::ellipsoidal(const Matrix& A) {
  Ellipsoid check(A);  // validates symmetry and definiteness
  return Norm(EllipsoidalNorm{check.matrix()});
}

Norm Norm::regular_polygon(int vertices) {
  if (vertices < 4 || vertices % 2 != 0) {
    throw StructuralError("a symmetric polygon needs an even number (>= 4) of vertices");
  }
  Matrix v(vertices, 2);
  for (int j = 0; j < vertices; ++j) {
    const double a = 2.0 * kPi * j / vertices;
    v(j, 0) = std::cos(a);
    v(j, 1) = std::sin(a);
  }
  return polytope_from_vertices(v);
}

int Norm::dim() const {
  return std::visit(
      [](const auto& f) -> int {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, LpNorm>) {
          return f.dim;
        } else if constexpr (std::is_same_v<F, PolytopeNorm>) {
          return static_cast<int>(f.facets.cols());
        } else {
          return static_cast<int>(f.A.rows());
        }
      },
      v_);
}

double Norm::operator()(const Vector& v) const {
  if (v.size() != dim()) throw StructuralError("vector dimension does not match the norm");
  return std::visit(
      [&](const auto& f) -> double {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, LpNorm>) {
          const double mx = v.cwiseAbs().maxCoeff();
          if (std::isinf(f.p) || mx == 0.0) return mx;
          if (f.p == 1.0) return v.cwiseAbs().sum();
          if (f.p == 2.0) return v.norm();
          double s = 0.0;
          for (Eigen::Index i = 0; i < v.size(); ++i) s += std::pow(std::abs(v(i)) / mx, f.p);
          return mx * std::pow(s, 1.0 / f.p);
        } else if constexpr (std::is_same_v<F, PolytopeNorm>) {
          return (f.facets * v).cwiseAbs().maxCoeff();
        } else {
          return std::sqrt(std::max(0.0, v.dot(f.A * v)));
        }
      },
      v_);
}

std::string Norm::describe() const {
  char buf[96];
  std::visit(
      [&](const auto& f) {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, LpNorm>) {
          if (std::isinf(f.p)) {
            std::snprintf(buf, sizeof buf, "linf(n=%d)", f.dim);
          } else {
            std::snprintf(buf, sizeof buf, "l%g(n=%d)", f.p, f.dim);
          }
        } else if constexpr (std::is_same_v<F, PolytopeNorm>) {
          std::snprintf(buf, sizeof buf, "polytope(%d facet pairs, %d vertex pairs, n=%d)",
                        static_cast<int>(f.facets.rows()), static_cast<int>(f.vertices.rows()),
                        static_cast<int>(f.facets.cols()));
        } else {
          std::snprintf(buf, sizeof buf, "ellipsoid(n=%d)", static_cast<int>(f.A.rows()));
        }
      },
      v_);
  return buf;
}

Ellipsoid::Ellipsoid(const Matrix& A) {
  if (A.rows() != A.cols() || A.rows() < 1) throw StructuralError("ellipsoid matrix must be square");
  if (!A.allFinite()) throw StructuralError("ellipsoid matrix has non-finite entries");
  const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
  if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw StructuralError("ellipsoid matrix must be symmetric");
  }
  A_ = 0.5 * (A + A.transpose());
  Eigen::LLT<Matrix> llt(A_);
  if (llt.info() != Eigen::Success) throw DegenerateInputError("ellipsoid matrix is not positive definite");
  L_ = llt.matrixL();
}

Vector Ellipsoid::unwhiten(const Vector& w) const {
  return L_.transpose().triangularView<Eigen::Upper>().solve(w);
}

double angle(const Ellipsoid& e, const Vector& u, const Vector& v) {
  if (u.size() != e.dim() || v.size() != e.dim()) throw StructuralError("angle: dimension mismatch");
  if (u.cwiseAbs().maxCoeff() == 0.0 || v.cwiseAbs().maxCoeff() == 0.0) {
    throw DomainError("angle with a zero vector is undefined");
  }
  // Exactly parallel inputs give exactly 0 or pi in every inner product.
  bool parallel = true;
  for (Eigen::Index i = 0; i < u.size() && parallel; ++i) {
    for (Eigen::Index j = i + 1; j < u.size(); ++j) {
      if (u(i) * v(j) != u(j) * v(i)) {
        parallel = false;
        break;
      }
    }
  }
  if (parallel) {
    Eigen::Index k = 0;
    while (u(k) == 0.0) ++k;
    return (u(k) > 0.0) == (v(k) > 0.0) ? 0.0 : kPi;
  }
  Vector a = e.whiten(u);
  Vector b = e.whiten(v);
  a.normalize();
  b.normalize();
  return 2.0 * std::atan2((a - b).norm(), (a + b).norm());
}

double angle_at(const Ellipsoid& e, const Vector& y, const Vector& x, const Vector& z) {
  return angle(e, x - y, z - y);
}

Vector project_to_line(const Ellipsoid& e, const Vector& x, const Vector& y, const Vector& z) {
  const Vector d = y - x;
  const double dd = e.inner(d, d);
  if (!(dd > 0.0)) throw DegenerateInputError("projection onto a line needs x != y");
  return x + (e.inner(z - x, d) / dd) * d;
}

}  // namespace snowlab
