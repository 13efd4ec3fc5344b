#include "snowlab/metric.hpp"

#include <cmath>
#include <limits>

#include "snowlab/errors.hpp"

namespace snowlab {

namespace {

void check_square_finite(const Matrix& d) {
  if (d.rows() != d.cols()) throw StructuralError("distance matrix must be square");
  if (!d.allFinite()) throw StructuralError("distance matrix has non-finite entries");
}

}  // namespace

FiniteMetric make_metric(Matrix dist, std::vector<std::string> labels) {
  check_square_finite(dist);
  const auto n = static_cast<std::size_t>(dist.rows());
  if (labels.empty()) {
    for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  }
  if (labels.size() != n) throw StructuralError("label count does not match the matrix size");
  return FiniteMetric{std::move(labels), std::move(dist)};
}

ValidationReport validate_metric(const Matrix& d, double tol) {
  check_square_finite(d);
  const int n = static_cast<int>(d.rows());
  ValidationReport rep;
  rep.min_off_diagonal = n > 1 ? std::numeric_limits<double>::infinity() : 0.0;
  for (int i = 0; i < n; ++i) {
    rep.worst_diagonal = std::max(rep.worst_diagonal, std::abs(d(i, i)));
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      rep.worst_symmetry_gap = std::max(rep.worst_symmetry_gap, std::abs(d(i, j) - d(j, i)));
      rep.min_off_diagonal = std::min(rep.min_off_diagonal, d(i, j));
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      for (int k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        const double s = d(i, j) + d(j, k) - d(i, k);
        if (!rep.worst_triangle || s < rep.worst_triangle->slack) rep.worst_triangle = TriangleSlack{i, j, k, s};
      }
    }
  }
  rep.is_metric = rep.worst_symmetry_gap <= tol && rep.worst_diagonal <= tol &&
                  (n < 2 || rep.min_off_diagonal > 0.0) &&
                  (!rep.worst_triangle || rep.worst_triangle->slack >= -tol);
  return rep;
}

FiniteMetric apply_snowflake(const FiniteMetric& m, const SnowflakeFunction& h) {
  check_square_finite(m.dist);
  const auto flags = check_axioms(h);
  if (flags.s1 != Verdict::holds || flags.s2 != Verdict::holds) {
    throw InvalidSnowflakeError("snowflake transform needs h(0) = 0 and h concave: " + h.name());
  }
  FiniteMetric out = m;
  const int n = m.size();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) out.dist(i, j) = i == j ? 0.0 : h(m.dist(i, j));
  }
  return out;
}

std::variant<FiniteMetric, TriangleViolation> desnowflake(const FiniteMetric& m,
                                                          const SnowflakeFunction& h,
                                                          bool require_metric, double tol) {
  check_square_finite(m.dist);
  if (!h.strictly_increasing()) {
    throw InvalidSnowflakeError("inverse transform needs a strictly increasing h: " + h.name());
  }
  FiniteMetric out = m;
  const int n = m.size();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) out.dist(i, j) = i == j ? 0.0 : h.inverse(m.dist(i, j));
  }
  if (require_metric) {
    const auto rep = validate_metric(out.dist, tol);
    if (rep.worst_triangle && rep.worst_triangle->slack < -tol) {
      const auto& w = *rep.worst_triangle;
      return TriangleViolation{w.i, w.j, w.k, out.dist(w.i, w.j), out.dist(w.j, w.k), out.dist(w.i, w.k),
                               w.slack};
    }
  }
  return out;
}

FiniteMetric metric_from_points(const PointConfig& p) {
  const int n = p.size();
  if (p.coords.cols() != p.norm.dim()) throw StructuralError("point dimension does not match the norm");
  if (!p.coords.allFinite()) throw StructuralError("point coordinates must be finite");
  Matrix d = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const Vector diff = p.point(i) - p.point(j);
      if (diff.cwiseAbs().maxCoeff() == 0.0) {
        throw DegenerateInputError("duplicate points " + std::to_string(i) + " and " + std::to_string(j));
      }
      d(i, j) = d(j, i) = p.norm(diff);
    }
  }
  return make_metric(std::move(d), p.labels);
}

}  // namespace snowlab
