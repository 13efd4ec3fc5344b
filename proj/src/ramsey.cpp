#include "snowlab/ramsey.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>
#include <tuple>
#include <vector>

#include "snowlab/errors.hpp"

namespace snowlab {

namespace {

// Keys within this of the best are re-evaluated with the exact angle routine.
constexpr double kKeySlack = 1e-12;

bool better(const AngleTriple& a, const AngleTriple& b) {
  if (a.angle != b.angle) return a.angle > b.angle;
  return std::tie(a.i, a.j, a.k) < std::tie(b.i, b.j, b.k);
}

void check_points(const Matrix& points, const Ellipsoid& e) {
  if (points.rows() < 3) throw StructuralError("angle search needs at least 3 points");
  if (points.cols() != e.dim()) throw StructuralError("point dimension does not match the inner product");
  if (!points.allFinite()) throw StructuralError("point coordinates must be finite");
}

struct ApexScanner {
  const Matrix& points;
  const Ellipsoid& e;
  Matrix W;  // whitened points, one per row

  ApexScanner(const Matrix& p, const Ellipsoid& el) : points(p), e(el) {
    W = (p * el.matrix().llt().matrixL().toDenseMatrix());
  }

  // Unit directions from apex j, in whitened coordinates, flattened.
  void directions(int j, std::vector<double>& u) const {
    const int n = static_cast<int>(W.rows());
    const int d = static_cast<int>(W.cols());
    u.assign(static_cast<std::size_t>(n) * d, 0.0);
    for (int i = 0; i < n; ++i) {
      if (i == j) continue;
      double s = 0.0;
      for (int c = 0; c < d; ++c) {
        const double v = W(i, c) - W(j, c);
        u[i * d + c] = v;
        s += v * v;
      }
      if (!(s > 0.0)) throw DegenerateInputError("duplicate points in angle search");
      const double inv = 1.0 / std::sqrt(s);
      for (int c = 0; c < d; ++c) u[i * d + c] *= inv;
    }
  }

  double exact(int i, int j, int k) const {
    return angle_at(e, points.row(j).transpose(), points.row(i).transpose(), points.row(k).transpose());
  }

  // Best triple with apex in [j0, j1).
  std::optional<AngleTriple> scan(int j0, int j1) const {
    const int n = static_cast<int>(W.rows());
    const int d = static_cast<int>(W.cols());
    std::vector<double> u;
    std::optional<AngleTriple> best;
    double best_key = -std::numeric_limits<double>::infinity();
    for (int j = j0; j < j1; ++j) {
      directions(j, u);
      for (int i = 0; i < n; ++i) {
        if (i == j) continue;
        const double* ui = &u[i * d];
        for (int k = i + 1; k < n; ++k) {
          if (k == j) continue;
          const double* uk = &u[k * d];
          double dot = 0.0;
          for (int c = 0; c < d; ++c) dot += ui[c] * uk[c];
          const double key = -dot;
          if (key < best_key - kKeySlack) continue;
          best_key = std::max(best_key, key);
          AngleTriple t{i, j, k, exact(i, j, k)};
          if (!best || better(t, *best)) best = t;
        }
      }
    }
    return best;
  }
};

}  // namespace

AngleTriple max_angle_triple(const Matrix& points, const Ellipsoid& e, int threads) {
  check_points(points, e);
  const int n = static_cast<int>(points.rows());
  if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::min(threads, n);
  ApexScanner sc(points, e);
  std::vector<std::optional<AngleTriple>> part(threads);
  std::vector<std::exception_ptr> errs(threads);
  auto work = [&](int t) {
    try {
      part[t] = sc.scan(n * t / threads, n * (t + 1) / threads);
    } catch (...) {
      errs[t] = std::current_exception();
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }
  for (auto& ep : errs) {
    if (ep) std::rethrow_exception(ep);
  }
  std::optional<AngleTriple> best;
  for (const auto& p : part) {
    if (p && (!best || better(*p, *best))) best = p;
  }
  return *best;
}

std::optional<AngleTriple> find_angle_above(const Matrix& points, const Ellipsoid& e, double beta) {
  check_points(points, e);
  const int n = static_cast<int>(points.rows());
  const int d = static_cast<int>(points.cols());
  ApexScanner sc(points, e);
  const double key_min = -std::cos(std::min(beta, kPi)) - kKeySlack;
  std::vector<double> u;
  for (int j = 0; j < n; ++j) {
    sc.directions(j, u);
    for (int i = 0; i < n; ++i) {
      if (i == j) continue;
      for (int k = i + 1; k < n; ++k) {
        if (k == j) continue;
        double dot = 0.0;
        for (int c = 0; c < d; ++c) dot += u[i * d + c] * u[k * d + c];
        if (-dot < key_min) continue;
        const double a = sc.exact(i, j, k);
        if (a >= beta) return AngleTriple{i, j, k, a};
      }
    }
  }
  return std::nullopt;
}

SampledMaxAngle sampled_max_angle_triple(const Matrix& points, const Ellipsoid& e,
                                         std::int64_t samples, std::uint64_t seed) {
  check_points(points, e);
  const int n = static_cast<int>(points.rows());
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, n - 1);
  SampledMaxAngle out;
  bool have = false;
  for (std::int64_t s = 0; s < samples; ++s) {
    const int j = pick(rng);
    int i = pick(rng);
    int k = pick(rng);
    if (i == j || k == j || i == k) {
      --s;
      continue;
    }
    if (i > k) std::swap(i, k);
    const Vector y = points.row(j).transpose();
    const Vector x = points.row(i).transpose();
    const Vector z = points.row(k).transpose();
    if ((x - y).cwiseAbs().maxCoeff() == 0.0 || (z - y).cwiseAbs().maxCoeff() == 0.0) {
      throw DegenerateInputError("duplicate points in angle search");
    }
    AngleTriple t{i, j, k, angle_at(e, y, x, z)};
    if (!have || better(t, out.best)) out.best = t;
    have = true;
  }
  out.samples = samples;
  const double T = static_cast<double>(n) * (n - 1) * (n - 2) / 2.0;
  out.miss_probability = std::exp(static_cast<double>(samples) * std::log1p(-1.0 / T));
  return out;
}

namespace {

double max_angle_involving(const std::vector<Vector>& pts, int idx, const Ellipsoid& e) {
  const int n = static_cast<int>(pts.size());
  double best = 0.0;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (a == b) continue;
      for (int c = b + 1; c < n; ++c) {
        if (c == a) continue;
        if (a != idx && b != idx && c != idx) continue;
        best = std::max(best, angle_at(e, pts[a], pts[b], pts[c]));
      }
    }
  }
  return best;
}

double max_angle_all(const std::vector<Vector>& pts, const Ellipsoid& e) {
  if (pts.size() < 3) return 0.0;
  Matrix m(static_cast<Eigen::Index>(pts.size()), pts[0].size());
  for (std::size_t i = 0; i < pts.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = pts[i].transpose();
  return max_angle_triple(m, e).angle;
}

}  // namespace

RamseyFloor empirical_ramsey_floor(int n, double beta, int budget, std::uint64_t seed) {
  if (n < 1 || n > 4) throw StructuralError("ramsey floor search supports 1 <= n <= 4");
  if (!(beta > 0.0 && beta <= kPi)) throw DomainError("beta must lie in (0, pi]");
  if (budget < 0) throw StructuralError("budget must be >= 0");
  const Ellipsoid e = Ellipsoid::identity(n);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> gauss;
  auto random_point = [&]() {
    Vector v(n);
    for (int c = 0; c < n; ++c) v(c) = unif(rng);
    return v;
  };
  auto distinct = [](const std::vector<Vector>& pts, const Vector& v) {
    for (const auto& p : pts) {
      if ((p - v).cwiseAbs().maxCoeff() == 0.0) return false;
    }
    return true;
  };

  std::vector<Vector> pts{random_point()};
  Vector second = random_point();
  while (!distinct(pts, second)) second = random_point();
  pts.push_back(second);
  std::vector<Vector> best = pts;
  double current_max = 0.0;
  int proposals = 0;
  double sigma = 0.1;
  while (proposals < budget) {
    ++proposals;
    Vector cand = random_point();
    if (distinct(pts, cand)) {
      pts.push_back(cand);
      const double a = max_angle_involving(pts, static_cast<int>(pts.size()) - 1, e);
      if (a < beta) {
        current_max = std::max(current_max, a);
        if (pts.size() > best.size()) best = pts;
        continue;
      }
      pts.pop_back();
    }
    if (pts.size() < 3) continue;
    // Perturbation move: keep it only if the largest angle does not grow.
    std::uniform_int_distribution<int> pick(0, static_cast<int>(pts.size()) - 1);
    const int idx = pick(rng);
    const Vector old = pts[idx];
    Vector moved = old;
    for (int c = 0; c < n; ++c) moved(c) += sigma * gauss(rng);
    pts[idx] = moved;
    if (!distinct(std::vector<Vector>(pts.begin(), pts.begin() + idx), moved) ||
        !distinct(std::vector<Vector>(pts.begin() + idx + 1, pts.end()), moved)) {
      pts[idx] = old;
      continue;
    }
    const double a = max_angle_all(pts, e);
    if (a <= current_max) {
      current_max = a;
    } else {
      pts[idx] = old;
      sigma = std::max(1e-3, sigma * 0.99);
    }
  }
  RamseyFloor out;
  out.floor = static_cast<int>(best.size());
  out.points.resize(out.floor, n);
  for (int i = 0; i < out.floor; ++i) out.points.row(i) = best[i].transpose();
  out.max_angle = max_angle_all(best, e);
  out.proposals = proposals;
  return out;
}

}  // namespace snowlab
