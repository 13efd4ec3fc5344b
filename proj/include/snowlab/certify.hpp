#pragma once

// Refutation of claimed isometric snowflake embeddings into normed spaces.
// A certificate is a concrete triple whose pulled-back distances violate the
// triangle inequality; the estimates of the refutation argument are attached
// as an evaluated chain, but only the direct arithmetic decides.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "snowlab/metric.hpp"
#include "snowlab/norm.hpp"
#include "snowlab/ramsey.hpp"
#include "snowlab/snowflake.hpp"

namespace snowlab {

inline constexpr double kStrictMargin = 1e-9;

/// 0.99 min{eps, pi/4, (2 - 2^alpha) / (3 C (2K + 2^alpha))}.
double theta_threshold(const LemmaConstants& k, double alpha);
double theta_threshold(int n, double alpha);

/// min{eps, pi/4, 1 / (2 C (1 + K))}.
double delta_threshold(const LemmaConstants& k);
double delta_threshold(int n);

struct RamseyBound {
  int N = 0;
  bool certified = false;
  std::string source;
};

/// Returns N(n, beta) or nothing when the provider has no value for (n, beta).
using RamseyProvider = std::function<std::optional<RamseyBound>(int n, double beta)>;

/// User table: an entry (n, beta') = N is used for every beta <= beta'.
RamseyProvider table_provider(std::map<std::pair<int, double>, int> table);

/// floor + 1 from empirical_ramsey_floor; a lower bound only.
RamseyProvider empirical_provider(int budget, std::uint64_t seed);

/// N(n, pi - theta_threshold(n, alpha)) from the provider. Throws
/// UnavailableBoundError without a provider or value.
RamseyBound cardinality_bound(int n, double alpha, const RamseyProvider& provider);

struct ChainEntry {
  std::string label;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // rhs - lhs; the chain requires slack >= 0 (> 0 for strict steps)
  bool strict = false;
};

enum class CertMode { alpha, h_unbounded, h_accumulation };
std::string to_string(CertMode m);

struct ViolationCertificate {
  CertMode mode = CertMode::alpha;
  // Apex z at index `apex`; x and y the other two points.
  int x = 0;
  int apex = 0;
  int y = 0;
  double apex_angle = 0.0;
  std::vector<ChainEntry> chain;
  // Pulled-back distances: d(x,y) > d(x,z) + d(z,y).
  double d_xy = 0.0;
  double d_xz = 0.0;
  double d_zy = 0.0;
  double slack = 0.0;  // d_xz + d_zy - d_xy, negative
  std::string threshold_name;  // "theta" or "delta"
  double threshold = 0.0;
  LemmaConstants constants;
  std::optional<double> alpha;
  std::string h_name;

  /// Recompute the three distances from the points and confirm the violation.
  bool reverify(const PointConfig& points, const std::function<double(double)>& pull_back) const;
};

enum class RefutationStatus { certificate, no_qualifying_triple, direct_test_passed, witness_unavailable };
std::string to_string(RefutationStatus s);

struct RefutationResult {
  RefutationStatus status = RefutationStatus::no_qualifying_triple;
  std::optional<ViolationCertificate> certificate;
  std::optional<AngleTriple> best_triple;  // in the index space of the input
  double threshold = 0.0;
  std::vector<int> witnesses;              // h modes: selected subsequence
  std::string note;
};

/// Points are read as the image of (X, d^alpha); d = ||.||^{1/alpha}.
RefutationResult refute_alpha_embedding(const PointConfig& points, double alpha, int threads = 1);

enum class WitnessMode { unbounded, accumulation };

/// Points are read as the image of (X, h o d); d = h^{-1}(||.||).
RefutationResult refute_h_embedding(const PointConfig& points, const SnowflakeFunction& h,
                                    WitnessMode mode, int threads = 1);

}  // namespace snowlab
