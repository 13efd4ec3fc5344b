#pragma once

// Euclidean embeddability of finite metrics (Gram criterion), the Newton
// solver around the simplex base point, alpha profiles and a distortion probe.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "snowlab/metric.hpp"
#include "snowlab/types.hpp"

namespace snowlab {

struct GramDecomposition {
  int base_index = 0;
  Matrix gram;                  // (n-1) x (n-1)
  Vector eigenvalues;           // ascending
  double tol_psd = 0.0;         // absolute thresholds actually applied
  double tol_rank = 0.0;
  std::optional<int> min_dim;   // empty when the Gram matrix is not PSD
  std::optional<Matrix> coords; // n x min_dim, base point at the origin
  double residual = 0.0;        // max | |q_i - q_j| - d_ij |

  bool embeddable() const { return min_dim.has_value(); }
  /// Smallest eigenvalue counted towards the rank, or 0 when the rank is 0.
  double smallest_retained() const;
};

inline constexpr double kTolPsd = 1e-10;
inline constexpr double kTolRank = 1e-8;

/// Gram matrix g_ij = (d_0i^2 + d_0j^2 - d_ij^2) / 2 about the base point.
/// Embeddable iff every eigenvalue >= -tol_psd * max|lambda|; the dimension is
/// the number of eigenvalues above tol_rank * max|lambda|.
GramDecomposition euclidean_embed(const FiniteMetric& m, double tol_psd = kTolPsd,
                                  double tol_rank = kTolRank, int base_index = 0);

std::optional<int> min_embedding_dimension(const FiniteMetric& m);

/// Entrywise d^alpha.
FiniteMetric power_snowflake(const FiniteMetric& m, double alpha);

// --- Newton solver ---------------------------------------------------------

/// F(q) = (|q_i - q_j|^2)_{i<j}, listed row by row over the upper triangle.
/// Points are the rows of q.
Vector distance_map(const Matrix& q);

/// Simplex base point p, rows e_j / sqrt(2).
Matrix simplex_base(int n);

/// dF/dq at q: rows index pairs (i<j), columns index q_l^k as l * n + k.
Matrix distance_map_jacobian(const Matrix& q);
/// Central differences with the given step.
Matrix distance_map_jacobian_numeric(const Matrix& q, double step);

struct NewtonOptions {
  int max_iter = 50;
  double tol = 1e-12;
  double box = 0.05;
};

struct NewtonState {
  Matrix points;               // n x n
  Matrix target;               // rho, upper triangle used
  double residual_sq = 0.0;    // max | |q_i - q_j|^2 - rho_ij^2 |
  int iterations = 0;
  std::vector<double> history; // residual_sq before each step and after the last
  int non_monotone_steps = 0;  // increases after the first step
};

/// Solve |q_i - q_j| = rho_ij from p. The unknowns are the coordinates q_l^k
/// with l < k; the others stay at their values in p, which fixes the rigid
/// motions and makes the Jacobian at p equal to -sqrt(2) I.
NewtonState newton_embed(const Matrix& rho, const NewtonOptions& opt = {});

// --- alpha profile ---------------------------------------------------------

struct AlphaSample {
  double alpha;
  bool embeddable;
  double min_eigenvalue;
};

struct AlphaProfile {
  std::vector<AlphaSample> samples;                  // the grid
  std::vector<double> boundaries;                    // refined verdict flips
  std::vector<std::pair<double, double>> intervals;  // embeddable alpha ranges
  std::optional<double> largest_embeddable;
};

/// Default grid k / 100, k = 1..100.
std::vector<double> default_alpha_grid();

/// Evaluates embeddability of (X, d^alpha) on the grid and bisects every flip
/// between neighbouring grid values down to tol_alpha. Monotonicity in alpha
/// is not assumed.
AlphaProfile alpha_star(const FiniteMetric& m, const std::vector<double>& grid = default_alpha_grid(),
                        double tol_alpha = 1e-9);

// --- distortion ------------------------------------------------------------

struct DistortionResult {
  double distortion = 1.0;     // (max ratio) * (max inverse ratio)
  Matrix coords;
  int best_run = 0;            // 0 is the MDS start, r >= 1 the random restarts
  std::vector<double> per_run;
};

/// Upper bound on the least bilipschitz distortion into R^target_dim.
DistortionResult distortion_probe(const FiniteMetric& m, int target_dim, int restarts,
                                  std::uint64_t seed);

double distortion_of(const FiniteMetric& m, const Matrix& coords);

}  // namespace snowlab
