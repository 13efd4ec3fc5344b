#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "snowlab/errors.hpp"
#include "snowlab/norm.hpp"

namespace snowlab {

namespace {

struct SymBasis {
  int n;
  std::vector<std::pair<int, int>> idx;  // (p, q) with p <= q

  explicit SymBasis(int n_) : n(n_) {
    for (int p = 0; p < n; ++p) {
      for (int q = p; q < n; ++q) idx.emplace_back(p, q);
    }
  }
  int size() const { return static_cast<int>(idx.size()); }

  // a^T E_k a with E_pp = e_p e_p^T and E_pq = e_p e_q^T + e_q e_p^T.
  Vector quad_features(const Vector& a) const {
    Vector f(size());
    for (int k = 0; k < size(); ++k) {
      const auto [p, q] = idx[k];
      f(k) = p == q ? a(p) * a(p) : 2.0 * a(p) * a(q);
    }
    return f;
  }

  Matrix assemble(const Vector& x) const {
    Matrix X = Matrix::Zero(n, n);
    for (int k = 0; k < size(); ++k) {
      const auto [p, q] = idx[k];
      X(p, q) = x(k);
      X(q, p) = x(k);
    }
    return X;
  }

  // tr(M E_k) for symmetric M.
  Vector trace_with(const Matrix& M) const {
    Vector g(size());
    for (int k = 0; k < size(); ++k) {
      const auto [p, q] = idx[k];
      g(k) = p == q ? M(p, p) : 2.0 * M(p, q);
    }
    return g;
  }

  // tr(M E_k M E_l) for symmetric M.
  Matrix trace_pair(const Matrix& M) const {
    Matrix H(size(), size());
    for (int k = 0; k < size(); ++k) {
      const auto [p, q] = idx[k];
      for (int l = 0; l < size(); ++l) {
        const auto [r, s] = idx[l];
        double v;
        if (p == q && r == s) {
          v = M(p, r) * M(r, p);
        } else if (p == q) {
          v = 2.0 * M(p, r) * M(s, p);
        } else if (r == s) {
          v = 2.0 * M(q, r) * M(r, p);
        } else {
          v = 2.0 * (M(q, r) * M(s, p) + M(q, s) * M(r, p));
        }
        H(k, l) = v;
      }
    }
    return H;
  }
};

struct BarrierEval {
  bool feasible = false;
  double value = 0.0;
};

// t * (-log det X) - sum log(1 - a_i^T X a_i)
BarrierEval barrier(const SymBasis& b, const Matrix& F, const Vector& x, double t) {
  BarrierEval out;
  const Matrix X = b.assemble(x);
  Eigen::LLT<Matrix> llt(X);
  if (llt.info() != Eigen::Success) return out;
  const Matrix L = llt.matrixL();
  double logdet = 0.0;
  for (int i = 0; i < b.n; ++i) {
    if (!(L(i, i) > 0.0)) return out;
    logdet += 2.0 * std::log(L(i, i));
  }
  const Vector s = F * x;
  double v = -t * logdet;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (!(s(i) < 1.0)) return out;
    v -= std::log1p(-s(i));
  }
  out.feasible = true;
  out.value = v;
  return out;
}

// Maximal-volume ellipsoid {X^{1/2} u : |u| <= 1} inside {x : |a_i . x| <= 1}.
Matrix polytope_john(const Matrix& facets) {
  const int n = static_cast<int>(facets.cols());
  const int m = static_cast<int>(facets.rows());
  SymBasis b(n);
  Matrix F(m, b.size());
  for (int i = 0; i < m; ++i) F.row(i) = b.quad_features(facets.row(i).transpose()).transpose();

  double amax = 0.0;
  for (int i = 0; i < m; ++i) amax = std::max(amax, facets.row(i).norm());
  const double r = 0.5 / amax;
  Vector x = Vector::Zero(b.size());
  for (int k = 0; k < b.size(); ++k) {
    if (b.idx[k].first == b.idx[k].second) x(k) = r * r;
  }

  double t = 1.0;
  while (true) {
    for (int it = 0; it < 200; ++it) {
      const Matrix X = b.assemble(x);
      const Matrix Xinv = X.llt().solve(Matrix::Identity(n, n));
      const Vector s = F * x;
      const Vector w = (1.0 - s.array()).inverse().matrix();
      Vector grad = -t * b.trace_with(Xinv) + F.transpose() * w;
      Matrix H = t * b.trace_pair(Xinv) + F.transpose() * w.array().square().matrix().asDiagonal() * F;
      const Vector dx = H.ldlt().solve(-grad);
      const double decrement = -grad.dot(dx);
      if (decrement < 1e-20 * std::max(1.0, t)) break;
      const double f0 = barrier(b, F, x, t).value;
      double step = 1.0;
      bool moved = false;
      for (int ls = 0; ls < 80; ++ls) {
        const Vector xn = x + step * dx;
        const auto e = barrier(b, F, xn, t);
        if (e.feasible && e.value <= f0 - 0.25 * step * decrement) {
          x = xn;
          moved = true;
          break;
        }
        step *= 0.5;
      }
      if (!moved || decrement < 1e-14) break;
    }
    if (m / t < 1e-11) break;
    t *= 10.0;
  }

  const Vector s = F * x;
  x /= s.maxCoeff();  // touch the boundary exactly
  return b.assemble(x);
}

}  // namespace

Ellipsoid john_ellipsoid(const Norm& norm) {
  const int n = norm.dim();
  return std::visit(
      [&](const auto& f) -> Ellipsoid {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, LpNorm>) {
          // Sign and permutation symmetry force a Euclidean ball; its radius is
          // the inradius min(1, n^{1/p - 1/2}).
          const double inv_p = std::isinf(f.p) ? 0.0 : 1.0 / f.p;
          const double scale = std::max(1.0, std::pow(static_cast<double>(n), 2.0 * inv_p - 1.0));
          return Ellipsoid(scale * Matrix::Identity(n, n));
        } else if constexpr (std::is_same_v<F, PolytopeNorm>) {
          const Matrix X = polytope_john(f.facets);
          Matrix A = X.llt().solve(Matrix::Identity(n, n));
          A = 0.5 * (A + A.transpose());
          return Ellipsoid(A);
        } else {
          return Ellipsoid(f.A);
        }
      },
      norm.variant());
}

SandwichReport check_sandwich(const Norm& norm, const Ellipsoid& e, int samples,
                              std::uint64_t seed) {
  const int n = norm.dim();
  if (e.dim() != n) throw StructuralError("sandwich check: dimension mismatch");
  const double root_n = std::sqrt(static_cast<double>(n));
  SandwichReport rep;
  rep.worst_inner = -std::numeric_limits<double>::infinity();
  rep.worst_outer = -std::numeric_limits<double>::infinity();
  auto probe = [&](const Vector& u) {
    const double ue = e.norm(u);
    if (!(ue > 0.0)) return;
    const Vector v = u / ue;
    const double nv = norm(v);
    rep.worst_inner = std::max(rep.worst_inner, nv - 1.0);
    rep.worst_outer = std::max(rep.worst_outer, 1.0 / root_n - nv);
    ++rep.samples;
  };
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  for (int s = 0; s < samples; ++s) {
    Vector g(n);
    for (int i = 0; i < n; ++i) g(i) = gauss(rng);
    probe(e.unwhiten(g));
  }
  // Deterministic extremes: axes, the diagonal, polytope vertices and facet normals.
  for (int i = 0; i < n; ++i) probe(Vector::Unit(n, i));
  probe(Vector::Ones(n));
  if (const auto* p = std::get_if<PolytopeNorm>(&norm.variant())) {
    for (Eigen::Index i = 0; i < p->vertices.rows(); ++i) probe(p->vertices.row(i).transpose());
    for (Eigen::Index i = 0; i < p->facets.rows(); ++i) {
      probe(e.matrix().ldlt().solve(Vector(p->facets.row(i).transpose())));
    }
  }
  return rep;
}

}  // namespace snowlab
