#include <cmath>
#include <random>

#include "snowlab/errors.hpp"
#include "snowlab/norm.hpp"

namespace snowlab {

namespace {

bool epsilon_ok(double theta, double eps) {
  return std::sin(theta) * std::cos(eps) - 2.0 * std::cos(theta) * std::sin(eps) > std::sin(theta) / 2.0;
}

}  // namespace

LemmaConstants lemma_constants(int n) {
  if (n < 1) throw StructuralError("lemma constants need n >= 1");
  LemmaConstants k;
  k.n = n;
  const double root_n = std::sqrt(static_cast<double>(n));
  k.theta_cone = std::asin(1.0 / (2.0 * root_n));
  k.ell_cone = 1.0 / (2.0 * root_n);
  k.K = 2.0 * root_n;
  k.C = (4.0 * std::cos(k.theta_cone) + 2.0) / std::sin(k.theta_cone);

  // sin(th) cos(e) - 2 cos(th) sin(e) = R cos(e + phi) is decreasing in e on [0, pi/2).
  const double st = std::sin(k.theta_cone);
  const double ct = std::cos(k.theta_cone);
  const double R = std::hypot(st, 2.0 * ct);
  const double phi = std::atan2(2.0 * ct, st);
  const double eps_star = std::acos(st / (2.0 * R)) - phi;
  constexpr double grid = 1e-6;
  double eps = std::floor(std::min(eps_star, kPi / 4.0) / grid) * grid;
  while (eps > 0.0 && !epsilon_ok(k.theta_cone, eps)) eps -= grid;
  k.epsilon = eps;
  return k;
}

ConeValidation validate_cone_constants(const Norm& norm, const Ellipsoid& e,
                                       const LemmaConstants& k, int samples, std::uint64_t seed) {
  const int n = norm.dim();
  if (e.dim() != n) throw StructuralError("cone validation: dimension mismatch");
  ConeValidation out;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  constexpr double tol = 1e-9;
  auto random_vec = [&]() {
    Vector g(n);
    for (int i = 0; i < n; ++i) g(i) = gauss(rng);
    return g;
  };
  for (int s = 0; s < samples; ++s) {
    Vector p = e.unwhiten(random_vec());
    p /= norm(p);
    const Vector P = e.whiten(p);
    const Vector axis = P.normalized();
    // Direction within theta of the axis, in whitened coordinates.
    const double phi = k.theta_cone * unif(rng);
    Vector b = Vector::Zero(n);
    if (n > 1) {
      Vector r = random_vec();
      r -= r.dot(axis) * axis;
      if (r.norm() > 0.0) b = r.normalized();
    }
    const double depth = k.ell_cone * (1.0 - unif(rng));
    for (int side = 0; side < 2; ++side) {
      const Vector dir = (side == 0 ? -axis : axis) * std::cos(phi) + b * std::sin(phi);
      const Vector q = e.unwhiten(P + depth * dir);
      const double nq = norm(q);
      const double excursion = side == 0 ? nq - 1.0 : 1.0 - nq;
      out.worst = std::max(out.worst, excursion);
      if (excursion > tol) ++out.violations;
      ++out.samples;
    }
  }
  return out;
}

NormGeometry make_geometry(const Norm& norm) {
  return NormGeometry{norm, john_ellipsoid(norm), lemma_constants(norm.dim())};
}

LemmaSlack check_lemma_close_to_euclidean(const NormGeometry& g, const Vector& x, const Vector& y,
                                          const Vector& z) {
  LemmaSlack out;
  if ((y - x).cwiseAbs().maxCoeff() == 0.0 || (z - x).cwiseAbs().maxCoeff() == 0.0) return out;
  const double ang = angle_at(g.john, x, y, z);
  if (!(ang < g.constants.epsilon)) return out;
  const Vector zp = project_to_line(g.john, x, y, z);
  const double dz = g.norm(x - z);
  const double dzp = g.norm(x - zp);
  out.applicable = true;
  out.lhs = std::abs(dz - dzp);
  out.rhs = g.constants.C * dzp * ang;
  out.slack = out.rhs - out.lhs;
  return out;
}

AngleComparisonSlack check_lemma_angle_comparison(const NormGeometry& g, const Vector& x,
                                                  const Vector& y, const Vector& z) {
  AngleComparisonSlack out;
  if ((y - x).cwiseAbs().maxCoeff() == 0.0 || (z - x).cwiseAbs().maxCoeff() == 0.0 ||
      (z - y).cwiseAbs().maxCoeff() == 0.0) {
    return out;
  }
  const double ax = angle_at(g.john, x, y, z);
  const double ay = angle_at(g.john, y, x, z);
  const double quarter = kPi / 4.0;
  if (!(ax > 0.0 && ax < quarter && ay > 0.0 && ay < quarter)) return out;
  const Vector zp = project_to_line(g.john, x, y, z);
  const double K = g.constants.K;
  out.applicable = true;
  out.angle_ratio = ax / ay;
  out.norm_ratio = g.norm(zp - y) / g.norm(zp - x);
  out.lower_slack = out.angle_ratio - out.norm_ratio / K;
  out.upper_slack = K * out.norm_ratio - out.angle_ratio;
  return out;
}

}  // namespace snowlab
