#include "snowlab/embed.hpp"

#include <cmath>

#include "snowlab/errors.hpp"

namespace snowlab {

double GramDecomposition::smallest_retained() const {
  if (!min_dim || *min_dim == 0) return 0.0;
  return eigenvalues(eigenvalues.size() - *min_dim);
}

GramDecomposition euclidean_embed(const FiniteMetric& m, double tol_psd, double tol_rank,
                                  int base) {
  const int n = m.size();
  if (n < 1) throw StructuralError("empty metric");
  if (m.dist.cols() != n) throw StructuralError("distance matrix must be square");
  if (base < 0 || base >= n) throw StructuralError("base index out of range");
  GramDecomposition g;
  g.base_index = base;
  std::vector<int> others;
  for (int i = 0; i < n; ++i) {
    if (i != base) others.push_back(i);
  }
  const int k = n - 1;
  g.gram.resize(k, k);
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      const int i = others[a];
      const int j = others[b];
      const double d0i = m.dist(base, i);
      const double d0j = m.dist(base, j);
      const double dij = i == j ? 0.0 : m.dist(i, j);
      g.gram(a, b) = 0.5 * (d0i * d0i + d0j * d0j - dij * dij);
    }
  }
  if (k == 0) {
    g.eigenvalues.resize(0);
    g.min_dim = 0;
    g.coords = Matrix::Zero(1, 0);
    return g;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(g.gram);
  g.eigenvalues = es.eigenvalues();
  const double scale = std::max(std::abs(g.eigenvalues(0)), std::abs(g.eigenvalues(k - 1)));
  g.tol_psd = tol_psd * scale;
  g.tol_rank = tol_rank * scale;
  if (g.eigenvalues(0) < -g.tol_psd) return g;

  int rank = 0;
  for (int i = 0; i < k; ++i) {
    if (g.eigenvalues(i) > g.tol_rank) ++rank;
  }
  g.min_dim = rank;
  Matrix X = Matrix::Zero(n, rank);
  for (int c = 0; c < rank; ++c) {
    const int col = k - 1 - c;
    const double s = std::sqrt(g.eigenvalues(col));
    for (int a = 0; a < k; ++a) X(others[a], c) = es.eigenvectors()(a, col) * s;
  }
  double res = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      res = std::max(res, std::abs((X.row(i) - X.row(j)).norm() - m.dist(i, j)));
    }
  }
  g.coords = std::move(X);
  g.residual = res;
  return g;
}

std::optional<int> min_embedding_dimension(const FiniteMetric& m) { return euclidean_embed(m).min_dim; }

FiniteMetric power_snowflake(const FiniteMetric& m, double alpha) {
  if (!(alpha > 0.0)) throw DomainError("snowflake exponent must be positive");
  FiniteMetric out = m;
  for (int i = 0; i < m.size(); ++i) {
    for (int j = 0; j < m.size(); ++j) out.dist(i, j) = i == j ? 0.0 : std::pow(m.dist(i, j), alpha);
  }
  return out;
}

std::vector<double> default_alpha_grid() {
  std::vector<double> g;
  for (int k = 1; k <= 100; ++k) g.push_back(k / 100.0);
  return g;
}

AlphaProfile alpha_star(const FiniteMetric& m, const std::vector<double>& grid, double tol_alpha) {
  if (m.size() < 3) throw StructuralError("alpha profile needs at least 3 points");
  if (grid.empty()) throw StructuralError("empty alpha grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0) || (i > 0 && !(grid[i] > grid[i - 1]))) {
      throw StructuralError("alpha grid must be positive and increasing");
    }
  }
  auto verdict = [&](double a) { return euclidean_embed(power_snowflake(m, a)); };
  AlphaProfile prof;
  for (double a : grid) {
    const auto g = verdict(a);
    prof.samples.push_back({a, g.embeddable(), g.eigenvalues.size() ? g.eigenvalues(0) : 0.0});
  }
  std::optional<double> open;  // start of the current embeddable interval
  if (prof.samples[0].embeddable) open = prof.samples[0].alpha;
  for (std::size_t i = 0; i + 1 < prof.samples.size(); ++i) {
    const bool left = prof.samples[i].embeddable;
    if (left == prof.samples[i + 1].embeddable) continue;
    double lo = prof.samples[i].alpha;
    double hi = prof.samples[i + 1].alpha;
    while (hi - lo > tol_alpha) {
      const double mid = 0.5 * (lo + hi);
      if (verdict(mid).embeddable() == left) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    prof.boundaries.push_back(0.5 * (lo + hi));
    if (left) {
      prof.intervals.emplace_back(*open, lo);
      open.reset();
    } else {
      open = hi;
    }
  }
  if (open) prof.intervals.emplace_back(*open, prof.samples.back().alpha);
  if (!prof.intervals.empty()) prof.largest_embeddable = prof.intervals.back().second;
  return prof;
}

}  // namespace snowlab
