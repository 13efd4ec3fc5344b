#include "snowlab/certify.hpp"

#include <cmath>
#include <limits>

#include "snowlab/errors.hpp"

namespace snowlab {

double theta_threshold(const LemmaConstants& k, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("theta threshold needs alpha in (0, 1)");
  const double p = std::pow(2.0, alpha);
  const double third = (2.0 - p) / (3.0 * k.C * (2.0 * k.K + p));
  return 0.99 * std::min({k.epsilon, kPi / 4.0, third});
}

double theta_threshold(int n, double alpha) { return theta_threshold(lemma_constants(n), alpha); }

double delta_threshold(const LemmaConstants& k) {
  return std::min({k.epsilon, kPi / 4.0, 1.0 / (2.0 * k.C * (1.0 + k.K))});
}

double delta_threshold(int n) { return delta_threshold(lemma_constants(n)); }

RamseyProvider table_provider(std::map<std::pair<int, double>, int> table) {
  return [table = std::move(table)](int n, double beta) -> std::optional<RamseyBound> {
    // Smallest tabulated beta' >= beta gives the smallest valid N.
    std::optional<RamseyBound> best;
    for (const auto& [key, N] : table) {
      if (key.first != n || key.second < beta) continue;
      if (!best || N < best->N) best = RamseyBound{N, true, "table"};
    }
    return best;
  };
}

RamseyProvider empirical_provider(int budget, std::uint64_t seed) {
  return [budget, seed](int n, double beta) -> std::optional<RamseyBound> {
    if (n > 4) return std::nullopt;
    const auto f = empirical_ramsey_floor(n, beta, budget, seed);
    return RamseyBound{f.floor + 1, false, "empirical search: lower bound, not a certificate"};
  };
}

RamseyBound cardinality_bound(int n, double alpha, const RamseyProvider& provider) {
  if (!provider) throw UnavailableBoundError("no Ramsey bound provider; refutation is search-based only");
  const double beta = kPi - theta_threshold(n, alpha);
  auto v = provider(n, beta);
  if (!v) throw UnavailableBoundError("provider has no value for this (n, beta); refutation is search-based only");
  return *v;
}

std::string to_string(CertMode m) {
  switch (m) {
    case CertMode::alpha: return "alpha";
    case CertMode::h_unbounded: return "general-h(case i)";
    case CertMode::h_accumulation: return "general-h(case ii)";
  }
  return "?";
}

std::string to_string(RefutationStatus s) {
  switch (s) {
    case RefutationStatus::certificate: return "certificate";
    case RefutationStatus::no_qualifying_triple: return "no-qualifying-triple";
    case RefutationStatus::direct_test_passed: return "direct-test-passed";
    case RefutationStatus::witness_unavailable: return "witness-unavailable";
  }
  return "?";
}

bool ViolationCertificate::reverify(const PointConfig& p, const std::function<double(double)>& pull) const {
  const double xy = pull(p.norm(p.point(x) - p.point(y)));
  const double xz = pull(p.norm(p.point(x) - p.point(apex)));
  const double zy = pull(p.norm(p.point(apex) - p.point(y)));
  return xz + zy - xy < -kStrictMargin;
}

namespace {

ChainEntry entry(std::string label, double lhs, double rhs, bool strict) {
  return ChainEntry{std::move(label), lhs, rhs, rhs - lhs, strict};
}

std::vector<ChainEntry> alpha_chain(const NormGeometry& g, double alpha, double theta, const Vector& x,
                                    const Vector& y, const Vector& z, double apex_angle) {
  const double C = g.constants.C;
  const double K = g.constants.K;
  const Ellipsoid& e = g.john;
  const double dx = angle_at(e, x, y, z);
  const double dy = angle_at(e, y, x, z);
  const Vector zp = project_to_line(e, x, y, z);
  const double yz = g.norm(y - z);
  const double zx = g.norm(z - x);
  const double yzp = g.norm(y - zp);
  const double xzp = g.norm(x - zp);
  const double p = std::pow(2.0, alpha);
  std::vector<ChainEntry> c;
  c.push_back(entry("apex angle > pi - theta", kPi - theta, apex_angle, true));
  c.push_back(entry("angle_x(y,z) < theta", dx, theta, true));
  c.push_back(entry("angle_y(x,z) < theta", dy, theta, true));
  c.push_back(entry("C angle_x(y,z) < 1", C * dx, 1.0, true));
  c.push_back(entry("C angle_y(x,z) < 1", C * dy, 1.0, true));
  c.push_back(entry("| ||x-z|| - ||x-z'|| | <= C ||x-z'|| angle_x", std::abs(zx - xzp), C * xzp * dx, false));
  c.push_back(entry("| ||y-z|| - ||y-z'|| | <= C ||y-z'|| angle_y", std::abs(yz - yzp), C * yzp * dy, false));
  const double sub_l = std::pow(std::pow(yz, 1.0 / alpha) + std::pow(zx, 1.0 / alpha), 2.0 * alpha);
  const double sub_r = yz * yz + zx * zx + p * yz * zx;
  c.push_back(entry("subadditivity: (||y-z||^(1/a) + ||z-x||^(1/a))^(2a) <= ||y-z||^2 + ||z-x||^2 + 2^a ||y-z|| ||z-x||",
                    sub_l, sub_r, false));
  const double proj = yzp * yzp * (1 + C * dy) * (1 + C * dy) + xzp * xzp * (1 + C * dx) * (1 + C * dx) +
                      p * yzp * xzp * (1 + C * dx) * (1 + C * dy);
  c.push_back(entry("projection estimate with the close-to-Euclidean bounds", sub_r, proj, false));
  const double factor = 6 * C * K * theta + p * (1 + 3 * C * theta);
  const double collected = yzp * yzp + xzp * xzp + factor * yzp * xzp;
  c.push_back(entry("collected estimate with the angle comparison", proj, collected, false));
  c.push_back(entry("6 C K theta + 2^a (1 + 3 C theta) < 2", factor, 2.0, true));
  const double xy = g.norm(x - y);
  c.push_back(entry("collected estimate < ||x-y||^2", collected, xy * xy, true));
  return c;
}

RefutationResult no_triple(double threshold, std::string note) {
  RefutationResult r;
  r.status = RefutationStatus::no_qualifying_triple;
  r.threshold = threshold;
  r.note = std::move(note);
  return r;
}

}  // namespace

RefutationResult refute_alpha_embedding(const PointConfig& pts, double alpha, int threads) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
  const NormGeometry g = make_geometry(pts.norm);
  const double theta = theta_threshold(g.constants, alpha);
  if (pts.size() < 3) return no_triple(theta, "fewer than 3 points");
  const AngleTriple best = max_angle_triple(pts.coords, g.john, threads);
  RefutationResult r;
  r.threshold = theta;
  r.best_triple = best;
  if (!(best.angle > kPi - theta)) {
    r.status = RefutationStatus::no_qualifying_triple;
    r.note = "no apex angle exceeds pi - theta; this is not a proof of embeddability";
    return r;
  }
  const Vector x = pts.point(best.i);
  const Vector z = pts.point(best.j);
  const Vector y = pts.point(best.k);
  auto pull = [alpha](double v) { return std::pow(v, 1.0 / alpha); };
  ViolationCertificate cert;
  cert.mode = CertMode::alpha;
  cert.x = best.i;
  cert.apex = best.j;
  cert.y = best.k;
  cert.apex_angle = best.angle;
  cert.chain = alpha_chain(g, alpha, theta, x, y, z, best.angle);
  cert.d_xy = pull(g.norm(x - y));
  cert.d_xz = pull(g.norm(x - z));
  cert.d_zy = pull(g.norm(z - y));
  cert.slack = cert.d_xz + cert.d_zy - cert.d_xy;
  cert.threshold_name = "theta";
  cert.threshold = theta;
  cert.constants = g.constants;
  cert.alpha = alpha;
  cert.h_name = "t^" + std::to_string(alpha);
  if (cert.slack < -kStrictMargin) {
    r.status = RefutationStatus::certificate;
    r.certificate = std::move(cert);
  } else {
    r.status = RefutationStatus::direct_test_passed;
    r.note = "qualifying triple found but the pulled-back triangle inequality holds";
  }
  return r;
}

RefutationResult refute_h_embedding(const PointConfig& pts, const SnowflakeFunction& h, WitnessMode mode,
                                    int threads) {
  if (!h.strictly_increasing()) throw InvalidSnowflakeError("refutation needs a strictly increasing h");
  const NormGeometry g = make_geometry(pts.norm);
  const double delta = delta_threshold(g.constants);
  const int n = pts.size();
  if (n < 3) return no_triple(delta, "fewer than 3 points");

  Matrix D = Matrix::Zero(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      const double v = g.norm(pts.point(a) - pts.point(b));
      if (!(v > 0.0)) throw DegenerateInputError("duplicate points");
      D(a, b) = D(b, a) = h.inverse(v);
    }
  }
  std::map<std::pair<int, int>, std::optional<double>> T_cache;
  auto T = [&](int a, int b) -> std::optional<double> {
    const auto key = std::make_pair(std::min(a, b), std::max(a, b));
    auto it = T_cache.find(key);
    if (it != T_cache.end()) return it->second;
    std::optional<double> v;
    try {
      v = threshold_T(h, D(a, b));
    } catch (const UnboundedThresholdError&) {
    }
    T_cache[key] = v;
    return v;
  };
  std::map<std::pair<int, int>, std::optional<double>> Tt_cache;
  auto T_tilde = [&](int a, int b) -> std::optional<double> {
    const auto key = std::make_pair(std::min(a, b), std::max(a, b));
    auto it = Tt_cache.find(key);
    if (it != Tt_cache.end()) return it->second;
    std::optional<double> v;
    try {
      v = threshold_T_tilde(h, D(a, b));
    } catch (const ZeroThresholdError&) {
    }
    Tt_cache[key] = v;
    return v;
  };
  auto angle_ok = [&](int apex, int a, int b) {
    return angle_at(g.john, pts.point(apex), pts.point(a), pts.point(b)) <= kPi / 4.0;
  };

  std::vector<int> sel;
  if (mode == WitnessMode::unbounded) {
    sel = {0, 1};
    for (int c = 2; c < n; ++c) {
      bool ok = true;
      for (std::size_t a = 0; a < sel.size() && ok; ++a) {
        for (std::size_t b = 0; b < sel.size() && ok; ++b) {
          if (a == b) continue;
          const int i = sel[a];
          const int j = sel[b];
          const auto t = T(i, j);
          ok = t && D(i, c) > *t && angle_ok(c, i, j);
        }
      }
      if (ok) sel.push_back(c);
    }
  } else {
    sel = {0};
    for (int c = 1; c < n; ++c) {
      bool ok = true;
      for (std::size_t ia = 0; ia < sel.size() && ok; ++ia) {
        for (std::size_t aa = ia + 1; aa < sel.size() && ok; ++aa) {
          const int i = sel[ia];
          const int a = sel[aa];
          const auto t1 = T_tilde(i, a);
          const auto t2 = T_tilde(i, c);
          ok = t1 && t2 && D(a, c) < *t1 && D(a, c) < *t2 && angle_ok(i, a, c);
        }
      }
      if (ok) sel.push_back(c);
    }
  }

  RefutationResult r;
  r.threshold = delta;
  r.witnesses = sel;
  if (sel.size() < 3) {
    r.status = RefutationStatus::witness_unavailable;
    r.note = "the spacing condition selects fewer than 3 points; not a refutation";
    return r;
  }
  Matrix sub(static_cast<Eigen::Index>(sel.size()), pts.coords.cols());
  for (std::size_t a = 0; a < sel.size(); ++a) sub.row(static_cast<Eigen::Index>(a)) = pts.coords.row(sel[a]);
  const AngleTriple local = max_angle_triple(sub, g.john, threads);
  r.best_triple = AngleTriple{sel[local.i], sel[local.j], sel[local.k], local.angle};
  if (!(local.angle > kPi - delta)) {
    r.status = RefutationStatus::no_qualifying_triple;
    r.note = "no witness apex angle exceeds pi - delta; this is not a proof of embeddability";
    return r;
  }
  // y is the latest witness (unbounded) or the earliest (accumulation).
  const bool late = mode == WitnessMode::unbounded;
  const int py = late ? std::max(local.i, local.k) : std::min(local.i, local.k);
  const int px = py == local.i ? local.k : local.i;
  const int ix = sel[px];
  const int iz = sel[local.j];
  const int iy = sel[py];
  const Vector x = pts.point(ix);
  const Vector y = pts.point(iy);
  const Vector z = pts.point(iz);
  const double C = g.constants.C;
  const double K = g.constants.K;
  const double ax = angle_at(g.john, x, z, y);
  const double d_ij = D(iz, ix);
  const double d_ik = D(iz, iy);
  const double nxz = g.norm(x - z);
  const double nzy = g.norm(z - y);
  const double nxy = g.norm(x - y);

  ViolationCertificate cert;
  cert.mode = late ? CertMode::h_unbounded : CertMode::h_accumulation;
  cert.x = ix;
  cert.apex = iz;
  cert.y = iy;
  cert.apex_angle = local.angle;
  cert.chain.push_back(entry("apex angle > pi - delta", kPi - delta, local.angle, true));
  cert.chain.push_back(entry("angle_x(z,y) < delta", ax, delta, true));
  cert.chain.push_back(entry("C (1 + K) angle_x(z,y) < 1/2", C * (1 + K) * ax, 0.5, true));
  if (late) {
    cert.chain.push_back(entry("spacing d(z,y) > T(d(z,x))", *T(iz, ix), d_ik, true));
  } else {
    cert.chain.push_back(entry("spacing d(z,x) < T~(d(z,y))", d_ij, *T_tilde(iz, iy), true));
  }
  const double lower = nxz + nzy - C * (1 + K) * nxz * ax;
  cert.chain.push_back(entry("||x-z|| + ||z-y|| - C(1+K) ||x-z|| angle_x > h(d(z,y)) + h(d(z,x))/2",
                             nzy + 0.5 * nxz, lower, true));
  cert.chain.push_back(entry("lemma estimate ||x-y|| >= ||x-z|| + ||z-y|| - C(1+K) ||x-z|| angle_x", lower,
                             nxy, false));
  cert.chain.push_back(entry("halving h(d(z,y) + d(z,x)) <= h(d(z,y)) + h(d(z,x))/2", h(d_ik + d_ij),
                             h(d_ik) + 0.5 * h(d_ij), false));
  cert.d_xy = D(ix, iy);
  cert.d_xz = d_ij;
  cert.d_zy = d_ik;
  cert.slack = cert.d_xz + cert.d_zy - cert.d_xy;
  cert.threshold_name = "delta";
  cert.threshold = delta;
  cert.constants = g.constants;
  cert.h_name = h.name();
  if (cert.slack < -kStrictMargin) {
    r.status = RefutationStatus::certificate;
    r.certificate = std::move(cert);
  } else {
    r.status = RefutationStatus::direct_test_passed;
    r.note = "qualifying triple found but the pulled-back triangle inequality holds";
  }
  return r;
}

}  // namespace snowlab
