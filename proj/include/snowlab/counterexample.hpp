#pragma once

// Planar point sequences whose h-preimage is a metric space, for functions h
// whose modulus c(t) = h(t)/t decreases to a positive limit c.
//
// The points form a spiral x_0 = 0, x_n = x_{n-1} + g_n (cos a_n, sin a_n) with
// a_n = alpha_1 + ... + alpha_{n-1}. Apex j sees its neighbours under an angle
// of at most pi - alpha_j, and every chord at x_j has h-preimage >= t_j, so
// the triangle at apex j holds once t_j satisfies the condition below for all
// s, t >= t_j.

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "snowlab/metric.hpp"
#include "snowlab/snowflake.hpp"
#include "snowlab/types.hpp"

namespace snowlab {

/// alpha_i = pi / 2^{i+2}, i = 1..N (sum pi/4).
std::vector<double> geometric_angles(int N);
/// alpha_i = pi / (4 i^2), i = 1..N (sum < pi^3 / 24).
std::vector<double> inverse_square_angles(int N);

/// Margin of (c_s + c_t + 2 c_st)(c_st - c) <= 2 (c_s c_t cos(pi - alpha) + c_st^2),
/// RHS - LHS, written in e(t) = c(t) - c so that no large terms cancel.
/// Here c_s = c(s), c_st = c(s + t) and c = lim c.
double tichoice_margin(const SnowflakeFunction& h, double alpha, double s, double t);
/// Same for the weaker form with (c_s + c_t) on the left.
double tichoice_margin_weak(const SnowflakeFunction& h, double alpha, double s, double t);

/// Sufficient test that the margin is >= 0 for all s, t >= t0:
/// (2 c(t0) + 2 c(2 t0)) e(2 t0) <= 2 (2 c^2 sin^2(alpha/2) - (2 c e(t0) + e(t0)^2) cos alpha).
bool tail_test(const SnowflakeFunction& h, double alpha, double t0);

struct TiSearch {
  int per_decade = 16;         // candidate grid 10^{k / per_decade}
  double t_cap = 1e300;
  double grid_decades = 8.0;   // square grid check on [t, t 10^grid_decades]^2
  int grid_points = 33;        // per axis
};

/// Smallest value >= prev_t (prev_t itself, then the log grid) that passes the
/// tail test and the grid check.
double solve_ti(const SnowflakeFunction& h, double alpha, double prev_t, const TiSearch& search = {});

using Point2W = std::array<Wide, 2>;

/// x_0 = (0,0), x_1 = (g_1, 0), x_n = x_{n-1} + g_n (cos a_n, sin a_n).
std::vector<Point2W> spiral_points(const std::vector<Wide>& gaps, const std::vector<double>& alphas);

struct ConstructionParams {
  SnowflakeFunction h;
  std::vector<double> alphas;  // alpha_1..alpha_N
  double t_start = 1.0;        // lower bound for t_1
  TiSearch search;
};

struct Spiral {
  std::vector<double> alphas;
  std::vector<double> thresholds;  // t_i
  std::vector<Wide> gaps;          // g_i = h(t_i)
  std::vector<Point2W> points;     // x_0..x_N
  double limit_c = 0.0;

  Matrix coords() const;  // rounded to double, one point per row
};

Spiral build_spiral(const ConstructionParams& params);

struct PreimageReport {
  std::int64_t checks = 0;
  int violations = 0;
  double min_slack = 0.0;      // min h(s + t) - d_E over all checks
  double min_rel_slack = 0.0;  // same divided by d_E
  std::array<int, 3> worst{0, 0, 0};  // (i, j, k): side ik against ij, jk
};

/// For every triangle, each side d against the other two: d <= h(h^{-1}(a) + h^{-1}(b)) + tol.
PreimageReport verify_snowflake_preimage(const std::vector<Point2W>& points, const SnowflakeFunction& h,
                                         double tol = 1e-9);
PreimageReport verify_snowflake_preimage(const Matrix& points, const SnowflakeFunction& h,
                                         double tol = 1e-9);

struct TailRecheck {
  int samples = 0;
  int violations = 0;       // corrected form
  int weak_violations = 0;  // printed weaker form
  double min_margin = 0.0;
};

/// Random (s, t), log-uniform on [t0, t0 10^decades]^2.
TailRecheck recheck_tichoice(const SnowflakeFunction& h, double alpha, double t0, int samples,
                             std::uint64_t seed, double decades = 12.0);

struct RemarkConstruction {
  SnowflakeFunction h;
  Matrix points;                  // n x 2
  std::vector<double> breakpoints;
  std::vector<double> slopes;
  int host_segment = 0;           // 1-based index of the linear piece hosting the points
  double required_length = 0.0;   // minimal length of the host segment
  PreimageReport verification;
};

/// h = c_1 T_1 (t/T_1)^{1/2} on [0, T_1), slope c_k on [T_{k-1}, T_k], then a
/// power tail; n points placed on the last linear piece by the spiral for
/// c_m t + b_m. seg_lengths gives T_k - T_{k-1}; the last entry may be omitted
/// and is then chosen as required.
RemarkConstruction remark_construction(int n, const std::vector<double>& slopes,
                                       const std::vector<double>& seg_lengths = {},
                                       std::optional<std::vector<double>> alphas = std::nullopt);

}  // namespace snowlab
