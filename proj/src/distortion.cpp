#include <cmath>
#include <limits>
#include <random>

#include "snowlab/embed.hpp"
#include "snowlab/errors.hpp"

namespace snowlab {

namespace {

struct Objective {
  const Matrix& d;
  double beta;  // 0: sum of squared log ratios; > 0: smoothed log distortion

  double operator()(const Matrix& X, Matrix* grad) const {
    const int n = static_cast<int>(X.rows());
    if (grad) grad->setZero(X.rows(), X.cols());
    if (beta == 0.0) {
      double f = 0.0;
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          const Vector diff = (X.row(i) - X.row(j)).transpose();
          const double e2 = diff.squaredNorm();
          if (!(e2 > 0.0)) return std::numeric_limits<double>::infinity();
          const double lr = 0.5 * std::log(e2) - std::log(d(i, j));
          f += lr * lr;
          if (grad) {
            const Vector g = (2.0 * lr / e2) * diff;
            grad->row(i) += g.transpose();
            grad->row(j) -= g.transpose();
          }
        }
      }
      return f;
    }
    // (1/b) log sum exp(b lr) + (1/b) log sum exp(-b lr)
    std::vector<double> lrs;
    double mx = -std::numeric_limits<double>::infinity();
    double mn = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const double e2 = (X.row(i) - X.row(j)).squaredNorm();
        if (!(e2 > 0.0)) return std::numeric_limits<double>::infinity();
        const double lr = 0.5 * std::log(e2) - std::log(d(i, j));
        lrs.push_back(lr);
        mx = std::max(mx, lr);
        mn = std::min(mn, lr);
      }
    }
    double sp = 0.0;
    double sm = 0.0;
    for (double lr : lrs) {
      sp += std::exp(beta * (lr - mx));
      sm += std::exp(-beta * (lr - mn));
    }
    const double f = mx + std::log(sp) / beta - mn + std::log(sm) / beta;
    if (grad) {
      int r = 0;
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j, ++r) {
          const double lr = lrs[r];
          const double w = std::exp(beta * (lr - mx)) / sp - std::exp(-beta * (lr - mn)) / sm;
          const Vector diff = (X.row(i) - X.row(j)).transpose();
          const Vector g = (w / diff.squaredNorm()) * diff;
          grad->row(i) += g.transpose();
          grad->row(j) -= g.transpose();
        }
      }
    }
    return f;
  }
};

void descend(const Objective& obj, Matrix& X, int iters) {
  Matrix g;
  double f = obj(X, &g);
  double step = 1e-2;
  for (int it = 0; it < iters; ++it) {
    const double gn = g.squaredNorm();
    if (!(gn > 1e-30)) break;
    bool moved = false;
    for (int ls = 0; ls < 60; ++ls) {
      Matrix Xn = X - step * g;
      Matrix gnext;
      const double fn = obj(Xn, &gnext);
      if (fn <= f - 1e-4 * step * gn) {
        X = std::move(Xn);
        f = fn;
        g = std::move(gnext);
        step *= 2.0;
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;
  }
}

Matrix optimize(const Matrix& d, Matrix X) {
  descend(Objective{d, 0.0}, X, 400);
  for (double beta : {10.0, 40.0, 160.0, 640.0}) descend(Objective{d, beta}, X, 200);
  return X;
}

}  // namespace

double distortion_of(const FiniteMetric& m, const Matrix& X) {
  const int n = m.size();
  if (X.rows() != n) throw StructuralError("coordinate count does not match the metric");
  double mx = 0.0;
  double mn = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double r = (X.row(i) - X.row(j)).norm() / m.dist(i, j);
      mx = std::max(mx, r);
      mn = std::min(mn, r);
    }
  }
  if (n < 2) return 1.0;
  if (!(mn > 0.0)) return std::numeric_limits<double>::infinity();
  return std::max(1.0, mx / mn);
}

DistortionResult distortion_probe(const FiniteMetric& m, int target_dim, int restarts,
                                  std::uint64_t seed) {
  const int n = m.size();
  if (target_dim < 1) throw StructuralError("target dimension must be >= 1");
  if (restarts < 0) throw StructuralError("restart count must be >= 0");
  DistortionResult best;
  best.distortion = std::numeric_limits<double>::infinity();
  if (n < 2) {
    best.distortion = 1.0;
    best.coords = Matrix::Zero(n, target_dim);
    best.per_run.push_back(1.0);
    return best;
  }

  // Run 0: classical scaling, keeping the largest nonnegative eigen-directions.
  const auto g = euclidean_embed(m);
  Matrix start = Matrix::Zero(n, target_dim);
  {
    Eigen::SelfAdjointEigenSolver<Matrix> es(g.gram);
    std::vector<int> others;
    for (int i = 0; i < n; ++i) {
      if (i != g.base_index) others.push_back(i);
    }
    const int k = n - 1;
    for (int c = 0; c < std::min(target_dim, k); ++c) {
      const int col = k - 1 - c;
      const double lam = std::max(0.0, es.eigenvalues()(col));
      for (int a = 0; a < k; ++a) start(others[a], c) = es.eigenvectors()(a, col) * std::sqrt(lam);
    }
  }
  auto consider = [&](int run, const Matrix& X) {
    const double dist = distortion_of(m, X);
    best.per_run.push_back(dist);
    if (dist < best.distortion) {
      best.distortion = dist;
      best.coords = X;
      best.best_run = run;
    }
  };
  if (g.min_dim && *g.min_dim <= target_dim) {
    consider(0, start);  // already isometric
  } else {
    bool usable = true;
    for (int i = 0; i < n && usable; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (!((start.row(i) - start.row(j)).squaredNorm() > 0.0)) {
          usable = false;
          break;
        }
      }
    }
    if (!usable) {
      std::mt19937_64 rng(seed);
      std::normal_distribution<double> gauss(0.0, 1e-3);
      for (int i = 0; i < n; ++i) {
        for (int c = 0; c < target_dim; ++c) start(i, c) += gauss(rng);
      }
    }
    consider(0, optimize(m.dist, start));
  }
  const double scale = m.dist.maxCoeff();
  for (int r = 1; r <= restarts; ++r) {
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(r));
    std::normal_distribution<double> gauss(0.0, scale);
    Matrix X(n, target_dim);
    for (int i = 0; i < n; ++i) {
      for (int c = 0; c < target_dim; ++c) X(i, c) = gauss(rng);
    }
    consider(r, optimize(m.dist, X));
  }
  return best;
}

}  // namespace snowlab
