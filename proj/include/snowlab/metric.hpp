#pragma once

// Finite metric spaces as dense distance matrices.

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "snowlab/norm.hpp"
#include "snowlab/snowflake.hpp"
#include "snowlab/types.hpp"

namespace snowlab {

inline constexpr double kTolMetric = 1e-9;

struct FiniteMetric {
  std::vector<std::string> labels;
  Matrix dist;

  int size() const { return static_cast<int>(dist.rows()); }
  double operator()(int i, int j) const { return dist(i, j); }
};

/// Labels "0", "1", ... for an unlabeled matrix.
FiniteMetric make_metric(Matrix dist, std::vector<std::string> labels = {});

/// Points are the rows of `coords`.
struct PointConfig {
  Matrix coords;
  Norm norm;
  std::vector<std::string> labels;

  int size() const { return static_cast<int>(coords.rows()); }
  Vector point(int i) const { return coords.row(i).transpose(); }
};

struct TriangleSlack {
  int i, j, k;   // d(i,j) + d(j,k) - d(i,k)
  double slack;
};

struct ValidationReport {
  bool is_metric = false;
  std::optional<TriangleSlack> worst_triangle;
  double worst_symmetry_gap = 0.0;
  double worst_diagonal = 0.0;       // max |d(i,i)|
  double min_off_diagonal = 0.0;     // must be > 0
};

ValidationReport validate_metric(const Matrix& dist, double tol_metric = kTolMetric);

/// A violated triangle d(i,k) > d(i,j) + d(j,k), with the three distances.
struct TriangleViolation {
  int i, j, k;
  double d_ij, d_jk, d_ik;
  double slack;
};

/// (X, h o d). Rejects h unless (S1) and (S2) hold.
FiniteMetric apply_snowflake(const FiniteMetric& m, const SnowflakeFunction& h);

/// (X, h^{-1} o d). With require_metric, a failing triangle is returned instead.
std::variant<FiniteMetric, TriangleViolation> desnowflake(const FiniteMetric& m,
                                                          const SnowflakeFunction& h,
                                                          bool require_metric,
                                                          double tol_metric = kTolMetric);

FiniteMetric metric_from_points(const PointConfig& p);

}  // namespace snowlab
