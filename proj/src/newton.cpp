#include <cmath>
#include <limits>

#include "snowlab/embed.hpp"
#include "snowlab/errors.hpp"

namespace snowlab {

Vector distance_map(const Matrix& q) {
  const int n = static_cast<int>(q.rows());
  Vector f(n * (n - 1) / 2);
  int r = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) f(r++) = (q.row(i) - q.row(j)).squaredNorm();
  }
  return f;
}

Matrix simplex_base(int n) { return Matrix::Identity(n, n) / std::sqrt(2.0); }

Matrix distance_map_jacobian(const Matrix& q) {
  const int n = static_cast<int>(q.rows());
  const int dim = static_cast<int>(q.cols());
  Matrix J = Matrix::Zero(n * (n - 1) / 2, n * dim);
  int r = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j, ++r) {
      for (int k = 0; k < dim; ++k) {
        const double g = 2.0 * (q(i, k) - q(j, k));
        J(r, i * dim + k) = g;
        J(r, j * dim + k) = -g;
      }
    }
  }
  return J;
}

Matrix distance_map_jacobian_numeric(const Matrix& q, double step) {
  const int n = static_cast<int>(q.rows());
  const int dim = static_cast<int>(q.cols());
  Matrix J(n * (n - 1) / 2, n * dim);
  for (int l = 0; l < n; ++l) {
    for (int k = 0; k < dim; ++k) {
      Matrix qp = q;
      Matrix qm = q;
      qp(l, k) += step;
      qm(l, k) -= step;
      J.col(l * dim + k) = (distance_map(qp) - distance_map(qm)) / (2.0 * step);
    }
  }
  return J;
}

NewtonState newton_embed(const Matrix& rho, const NewtonOptions& opt) {
  const int n = static_cast<int>(rho.rows());
  if (rho.cols() != n || n < 2) throw StructuralError("target must be a square matrix of size >= 2");
  Vector target(n * (n - 1) / 2);
  {
    int r = 0;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const double v = rho(i, j);
        if (!std::isfinite(v)) throw StructuralError("non-finite target distance");
        if (!(std::abs(v - 1.0) < opt.box)) {
          throw DomainError("target distance outside the box around 1");
        }
        target(r++) = v * v;
      }
    }
  }
  // Free coordinates q_l^k, l < k, in the same order as the pairs (i, j).
  std::vector<int> free_cols;
  for (int l = 0; l < n; ++l) {
    for (int k = l + 1; k < n; ++k) free_cols.push_back(l * n + k);
  }

  NewtonState st;
  st.target = rho;
  st.points = simplex_base(n);
  Vector res = distance_map(st.points) - target;
  st.residual_sq = res.cwiseAbs().maxCoeff();
  st.history.push_back(st.residual_sq);
  while (st.residual_sq >= opt.tol) {
    if (st.iterations >= opt.max_iter) {
      throw IterationLimitError("Newton solver did not converge", st.residual_sq, st.iterations);
    }
    const Matrix Jfull = distance_map_jacobian(st.points);
    Matrix J(Jfull.rows(), static_cast<Eigen::Index>(free_cols.size()));
    for (std::size_t c = 0; c < free_cols.size(); ++c) J.col(c) = Jfull.col(free_cols[c]);
    const Vector dx = J.colPivHouseholderQr().solve(-res);
    if (!dx.allFinite()) {
      throw IterationLimitError("Newton step is not finite", st.residual_sq, st.iterations);
    }
    for (std::size_t c = 0; c < free_cols.size(); ++c) {
      st.points(free_cols[c] / n, free_cols[c] % n) += dx(c);
    }
    ++st.iterations;
    res = distance_map(st.points) - target;
    const double next = res.cwiseAbs().maxCoeff();
    if (!std::isfinite(next)) {
      throw IterationLimitError("Newton iterate diverged", st.residual_sq, st.iterations);
    }
    if (st.iterations > 1 && next > st.residual_sq) ++st.non_monotone_steps;
    st.residual_sq = next;
    st.history.push_back(next);
  }
  return st;
}

}  // namespace snowlab
