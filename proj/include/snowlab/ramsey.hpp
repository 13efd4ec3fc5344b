#pragma once

// Large-angle triples in finite point sets.

#include <cstdint>
#include <optional>

#include "snowlab/norm.hpp"
#include "snowlab/types.hpp"

namespace snowlab {

/// Angle at apex j between x_i and x_k, with i < k.
struct AngleTriple {
  int i = 0;
  int j = 0;
  int k = 0;
  double angle = 0.0;
};

/// Points are the rows of `points`. Exhaustive scan; ties go to the
/// lexicographically smallest (i, j, k). The result does not depend on the
/// thread count (0 = hardware concurrency).
AngleTriple max_angle_triple(const Matrix& points, const Ellipsoid& e, int threads = 1);

/// First triple in apex-major order with angle >= beta.
std::optional<AngleTriple> find_angle_above(const Matrix& points, const Ellipsoid& e, double beta);

inline constexpr int kExhaustiveLimit = 600;

struct SampledMaxAngle {
  AngleTriple best;
  std::int64_t samples = 0;
  /// Chance that the true maximizing triple was never drawn: (1 - 1/T)^samples
  /// with T the number of apex triples.
  double miss_probability = 1.0;
};

SampledMaxAngle sampled_max_angle_triple(const Matrix& points, const Ellipsoid& e,
                                         std::int64_t samples, std::uint64_t seed);

struct RamseyFloor {
  int floor = 0;          // size of the largest set found with every angle < beta
  Matrix points;          // that set
  double max_angle = 0.0; // its largest angle
  int proposals = 0;
};

/// Lower bound for N(n, beta) - 1 by random insertion and perturbation moves
/// in [0,1]^n. Not a value of N(n, beta).
RamseyFloor empirical_ramsey_floor(int n, double beta, int budget, std::uint64_t seed);

}  // namespace snowlab
