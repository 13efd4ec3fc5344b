#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>

#include "cli.hpp"
#include "snowlab/certify.hpp"
#include "snowlab/counterexample.hpp"
#include "snowlab/embed.hpp"
#include "snowlab/errors.hpp"
#include "snowlab/metric.hpp"
#include "snowlab/norm.hpp"
#include "snowlab/ramsey.hpp"
#include "snowlab/snowflake.hpp"

namespace snowlab::cli {

void RunConfig::emit(const std::string& name, const std::string& text) const {
  const auto dot = name.rfind('.');
  const std::string ext = dot == std::string::npos ? "" : name.substr(dot + 1);
  if (!formats.count(ext)) return;
  std::filesystem::create_directories(out_dir);
  const std::string path = (std::filesystem::path(out_dir) / name).string();
  write_file(path, text);
  if (!quiet) std::cout << "wrote " << path << "\n";
}

void RunConfig::emit_json(const std::string& name, const Json& j) const { emit(name, dump_json(j)); }

namespace {

struct Options {
  bool selftest = false;
  std::string in;
  std::string points;
  std::string norm = "l2";
  std::string h;
  std::string mode = "unbounded";
  std::string angles = "geometric";
  std::string slopes;
  std::string lengths;
  std::string ramsey_table;
  double tol_metric = kTolMetric;
  double tol_psd = kTolPsd;
  double tol_rank = kTolRank;
  double tol_alpha = 1e-9;
  double grid_step = 0.01;
  double alpha = -1.0;
  double beta = 0.0;
  double t_start = 1.0;
  double at = -1.0;
  double box = 0.05;
  double newton_tol = 1e-12;
  int base = 0;
  int dim = 2;
  int n = 40;
  int remark_n = 3;
  int max_iter = 50;
  int samples = 10000;
  int budget = 2000;
  int restarts = 8;
  int recheck = 10000;
  int ramsey_empirical = 0;
  bool inverse = false;
  bool require_metric = false;
};

void require(const std::string& value, const char* flag) {
  if (value.empty()) throw UsageError(std::string(flag) + " is required");
}

std::string num(double v) { return format_number(v); }

Json header(const RunConfig& cfg, const char* command) {
  Json j;
  j["schema"] = kSchema;
  j["command"] = command;
  j["seed"] = cfg.seed;
  return j;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (item.empty() || *end != '\0') throw UsageError("not a number in list: '" + item + "'");
    out.push_back(v);
  }
  return out;
}

FiniteMetric load_metric_arg(const Options& o) {
  require(o.in, "--in");
  return load_metric(o.in);
}

PointConfig load_point_config(const Options& o) {
  require(o.points, "--points");
  auto t = load_points(o.points);
  const int dim = static_cast<int>(t.coords.cols());
  return PointConfig{std::move(t.coords), parse_norm(o.norm, dim), std::move(t.labels)};
}

std::string label_of(const PointConfig& p, int i) {
  return p.labels.empty() ? std::to_string(i) : p.labels[static_cast<std::size_t>(i)];
}

// --- individual commands ---------------------------------------------------

int cmd_validate(const RunConfig& cfg, const Options& o) {
  const auto m = load_metric_arg(o);
  const auto r = validate_metric(m.dist, o.tol_metric);
  Json j = header(cfg, "validate");
  j["points"] = m.size();
  j["tol_metric"] = o.tol_metric;
  j["report"] = validation_to_json(r);
  cfg.emit_json("validate.json", j);
  std::cout << "is_metric: " << (r.is_metric ? "true" : "false") << "\n";
  if (r.worst_triangle) {
    const auto& t = *r.worst_triangle;
    std::cout << "worst triangle (" << m.labels[t.i] << ", " << m.labels[t.j] << ", " << m.labels[t.k]
              << ") slack " << num(t.slack) << "\n";
  }
  return kExitOk;
}

int cmd_snowflake(const RunConfig& cfg, const Options& o) {
  require(o.h, "--h");
  const auto h = parse_snowflake(o.h);
  const auto flags = check_axioms(h);
  Json j = header(cfg, "snowflake");
  j["h"] = snowflake_to_json(h);
  j["name"] = h.name();
  j["axioms"] = axioms_to_json(flags);
  j["modulus_at_zero"] = h.modulus_at_zero();
  j["modulus_at_infinity"] = h.modulus_at_infinity();
  std::cout << "h = " << h.name() << "\n";
  std::cout << "S1 " << to_string(flags.s1) << ", S2 " << to_string(flags.s2) << ", S3 " << to_string(flags.s3)
            << ", S4 " << to_string(flags.s4) << "\n";
  if (o.at > 0.0) {
    Json at;
    at["t"] = o.at;
    at["h"] = h(o.at);
    at["modulus"] = h.modulus(o.at);
    try {
      at["T"] = threshold_T(h, o.at);
    } catch (const UnboundedThresholdError& e) {
      at["T"] = nullptr;
      at["T_note"] = e.what();
    }
    try {
      at["T_tilde"] = threshold_T_tilde(h, o.at);
    } catch (const ZeroThresholdError& e) {
      at["T_tilde"] = nullptr;
      at["T_tilde_note"] = e.what();
    }
    j["at"] = at;
    std::cout << "h(" << num(o.at) << ") = " << num(h(o.at)) << ", c = " << num(h.modulus(o.at)) << "\n";
  }
  if (!o.in.empty()) {
    const auto m = load_metric(o.in);
    if (o.inverse) {
      const auto r = desnowflake(m, h, o.require_metric, o.tol_metric);
      if (const auto* v = std::get_if<TriangleViolation>(&r)) {
        j["violation"] = {{"i", v->i}, {"j", v->j}, {"k", v->k}, {"d_ij", v->d_ij},
                          {"d_jk", v->d_jk}, {"d_ik", v->d_ik}, {"slack", v->slack}};
        std::cout << "pulled-back triangle fails at (" << m.labels[v->i] << ", " << m.labels[v->j] << ", "
                  << m.labels[v->k] << "): " << num(v->d_ik) << " > " << num(v->d_ij) << " + " << num(v->d_jk)
                  << "\n";
      } else {
        const auto& out = std::get<FiniteMetric>(r);
        j["metric"] = metric_to_json(out);
        cfg.emit("snowflake.csv", metric_to_csv(out));
      }
    } else {
      const auto out = apply_snowflake(m, h);
      j["metric"] = metric_to_json(out);
      cfg.emit("snowflake.csv", metric_to_csv(out));
    }
  }
  cfg.emit_json("snowflake.json", j);
  return kExitOk;
}

int cmd_embed(const RunConfig& cfg, const Options& o) {
  auto m = load_metric_arg(o);
  if (o.alpha > 0.0) m = power_snowflake(m, o.alpha);
  const auto g = euclidean_embed(m, o.tol_psd, o.tol_rank, o.base);
  Json j = header(cfg, "embed");
  if (o.alpha > 0.0) j["alpha"] = o.alpha;
  j["gram"] = gram_to_json(g);
  cfg.emit_json("embed.json", j);
  if (g.coords) cfg.emit("embed.csv", points_to_csv(*g.coords, m.labels));
  if (g.min_dim) {
    std::cout << "embeddable in R^" << *g.min_dim << ", residual " << num(g.residual) << "\n";
  } else {
    std::cout << "not embeddable: smallest gram eigenvalue " << num(g.eigenvalues(0)) << "\n";
  }
  return kExitOk;
}

int cmd_min_dim(const RunConfig& cfg, const Options& o) {
  auto m = load_metric_arg(o);
  if (o.alpha > 0.0) m = power_snowflake(m, o.alpha);
  const auto d = min_embedding_dimension(m);
  Json j = header(cfg, "min-dim");
  if (o.alpha > 0.0) j["alpha"] = o.alpha;
  if (d) {
    j["min_dim"] = *d;
  } else {
    j["min_dim"] = nullptr;
  }
  cfg.emit_json("min-dim.json", j);
  std::cout << "min_dim: " << (d ? std::to_string(*d) : std::string("none")) << "\n";
  return kExitOk;
}

int cmd_alpha_star(const RunConfig& cfg, const Options& o) {
  const auto m = load_metric_arg(o);
  if (!(o.grid_step > 0.0 && o.grid_step <= 1.0)) throw UsageError("--grid-step must lie in (0, 1]");
  std::vector<double> grid;
  const int steps = static_cast<int>(std::floor(1.0 / o.grid_step + 1e-9));
  for (int k = 1; k <= steps; ++k) grid.push_back(k * o.grid_step);
  if (grid.back() < 1.0 - 1e-12) grid.push_back(1.0);
  const auto p = alpha_star(m, grid, o.tol_alpha);
  Json j = header(cfg, "alpha-star");
  j["profile"] = alpha_profile_to_json(p);
  cfg.emit_json("alpha-star.json", j);
  for (double b : p.boundaries) std::cout << "boundary " << num(b) << "\n";
  std::cout << "largest embeddable alpha: "
            << (p.largest_embeddable ? num(*p.largest_embeddable) : std::string("none")) << "\n";
  return kExitOk;
}

int cmd_newton(const RunConfig& cfg, const Options& o) {
  const auto m = load_metric_arg(o);
  NewtonOptions opt;
  opt.max_iter = o.max_iter;
  opt.tol = o.newton_tol;
  opt.box = o.box;
  const auto s = newton_embed(m.dist, opt);
  Json j = header(cfg, "newton");
  j["result"] = newton_to_json(s);
  cfg.emit_json("newton.json", j);
  cfg.emit("newton.csv", points_to_csv(s.points, m.labels));
  std::cout << "converged in " << s.iterations << " iterations, residual_sq " << num(s.residual_sq) << "\n";
  return kExitOk;
}

int cmd_john(const RunConfig& cfg, const Options& o) {
  const auto norm = parse_norm(o.norm, o.dim);
  const auto e = john_ellipsoid(norm);
  const auto k = lemma_constants(norm.dim());
  const auto sw = check_sandwich(norm, e, o.samples, cfg.seed);
  const auto cone = validate_cone_constants(norm, e, k, o.samples, cfg.seed);
  Json j = header(cfg, "john");
  j["norm"] = norm_to_json(norm);
  j["A"] = to_json(e.matrix());
  j["sandwich"] = {{"samples", sw.samples}, {"worst_inner", sw.worst_inner}, {"worst_outer", sw.worst_outer},
                   {"holds", sw.holds(1e-8)}};
  j["constants"] = lemma_constants_to_json(k);
  j["cone_validation"] = {{"samples", cone.samples}, {"violations", cone.violations}, {"worst", cone.worst}};
  cfg.emit_json("john.json", j);
  std::cout << norm.describe() << "\n";
  std::cout << "sandwich " << (sw.holds(1e-8) ? "holds" : "FAILS") << " on " << sw.samples << " directions\n";
  std::cout << "C = " << num(k.C) << ", K = " << num(k.K) << ", epsilon = " << num(k.epsilon) << "\n";
  return kExitOk;
}

int cmd_angles(const RunConfig& cfg, const Options& o) {
  const auto p = load_point_config(o);
  const auto e = john_ellipsoid(p.norm);
  Json j = header(cfg, "angles");
  AngleTriple t;
  if (o.samples > 0 && p.size() > kExhaustiveLimit) {
    const auto s = sampled_max_angle_triple(p.coords, e, o.samples, cfg.seed);
    t = s.best;
    j["method"] = "sampled";
    j["samples"] = s.samples;
    j["miss_probability"] = s.miss_probability;
  } else {
    t = max_angle_triple(p.coords, e, cfg.threads);
    j["method"] = "exhaustive";
  }
  j["triple"] = {{"i", t.i}, {"apex", t.j}, {"k", t.k}, {"angle", t.angle}};
  j["pi_minus_angle"] = kPi - t.angle;
  cfg.emit_json("angles.json", j);
  std::cout << "max angle " << num(t.angle) << " at apex " << label_of(p, t.j) << " between " << label_of(p, t.i)
            << " and " << label_of(p, t.k) << "\n";
  return kExitOk;
}

int cmd_ramsey_floor(const RunConfig& cfg, const Options& o) {
  if (!(o.beta > 0.0 && o.beta < kPi)) throw UsageError("--beta must lie in (0, pi)");
  const auto f = empirical_ramsey_floor(o.dim, o.beta, o.budget, cfg.seed);
  Json j = header(cfg, "ramsey-floor");
  j["dim"] = o.dim;
  j["beta"] = o.beta;
  j["floor"] = f.floor;
  j["max_angle"] = f.max_angle;
  j["proposals"] = f.proposals;
  j["note"] = "lower bound for N(n, beta) - 1, not a value of N";
  j["points"] = to_json(f.points);
  cfg.emit_json("ramsey-floor.json", j);
  cfg.emit("ramsey-floor.csv", points_to_csv(f.points));
  if (o.dim == 2) cfg.emit("ramsey-floor.svg", points_svg(f.points, {"empirical Ramsey floor", false, false}));
  std::cout << "floor " << f.floor << " (max angle " << num(f.max_angle) << ")\n";
  return kExitOk;
}

int cmd_spiral(const RunConfig& cfg, const Options& o) {
  require(o.h, "--h");
  if (o.n < 1) throw UsageError("--n must be >= 1");
  const auto h = parse_snowflake(o.h);
  std::vector<double> alphas;
  if (o.angles == "geometric") {
    alphas = geometric_angles(o.n);
  } else if (o.angles == "inverse-square") {
    alphas = inverse_square_angles(o.n);
  } else {
    throw UsageError("--angles must be geometric or inverse-square");
  }
  const auto s = build_spiral(ConstructionParams{h, alphas, o.t_start, {}});
  const auto v = verify_snowflake_preimage(s.points, h);
  int recheck_violations = 0;
  int recheck_samples = 0;
  double recheck_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < s.alphas.size() && o.recheck > 0; ++i) {
    const auto r = recheck_tichoice(h, s.alphas[i], s.thresholds[i], o.recheck, cfg.seed + i);
    recheck_violations += r.violations;
    recheck_samples += r.samples;
    recheck_min = std::min(recheck_min, r.min_margin);
  }
  Json j = header(cfg, "spiral");
  j["angles"] = o.angles;
  j["spiral"] = spiral_to_json(s, h);
  j["verification"] = preimage_report_to_json(v);
  j["tail_recheck"] = {{"samples", recheck_samples}, {"violations", recheck_violations},
                       {"min_margin", recheck_samples ? recheck_min : 0.0}};
  cfg.emit_json("spiral.json", j);
  const Matrix pts = s.coords();
  cfg.emit("spiral.csv", points_to_csv(pts));
  cfg.emit("spiral.svg", points_svg(pts, {"spiral for h = " + h.name() + ", N = " + std::to_string(o.n) +
                                              " (radius drawn as log(1 + r))",
                                          true, true}));
  std::cout << "points " << pts.rows() << ", triangle checks " << v.checks << ", violations " << v.violations
            << ", min slack " << num(v.min_slack) << "\n";
  std::cout << "tail recheck: " << recheck_samples << " samples, " << recheck_violations << " violations\n";
  return kExitOk;
}

int cmd_remark(const RunConfig& cfg, const Options& o) {
  std::vector<double> slopes = {0.5, 0.25, 0.125, 0.0625};
  if (!o.slopes.empty()) slopes = parse_list(o.slopes);
  std::vector<double> lengths;
  if (!o.lengths.empty()) lengths = parse_list(o.lengths);
  const auto r = remark_construction(o.remark_n, slopes, lengths);
  const auto flags = check_axioms(r.h);
  Json j = header(cfg, "remark");
  j["n"] = o.remark_n;
  j["h"] = snowflake_to_json(r.h);
  j["axioms"] = axioms_to_json(flags);
  j["host_segment"] = r.host_segment;
  j["required_length"] = r.required_length;
  j["verification"] = preimage_report_to_json(r.verification);
  j["points"] = to_json(r.points);
  cfg.emit_json("remark.json", j);
  cfg.emit("remark.csv", points_to_csv(r.points));
  std::cout << "h = " << r.h.name() << "\n";
  std::cout << "axioms " << (flags.all_hold() ? "all hold" : "do not all hold") << ", host segment "
            << r.host_segment << ", violations " << r.verification.violations << "\n";
  return kExitOk;
}

void print_transcript(const RefutationResult& r, const PointConfig& p) {
  std::cout << "status: " << to_string(r.status) << "\n";
  if (r.best_triple) {
    const auto& t = *r.best_triple;
    std::cout << "largest angle " << num(t.angle) << " at apex " << label_of(p, t.j) << " (threshold pi - "
              << num(r.threshold) << ")\n";
  }
  if (!r.witnesses.empty()) std::cout << "witnesses selected: " << r.witnesses.size() << "\n";
  if (!r.note.empty()) std::cout << "note: " << r.note << "\n";
  if (!r.certificate) return;
  const auto& c = *r.certificate;
  std::cout << "\ncertificate (" << to_string(c.mode) << "), x = " << label_of(p, c.x) << ", z = "
            << label_of(p, c.apex) << ", y = " << label_of(p, c.y) << "\n";
  std::cout << "constants: C = " << num(c.constants.C) << ", K = " << num(c.constants.K)
            << ", epsilon = " << num(c.constants.epsilon) << ", " << c.threshold_name << " = "
            << num(c.threshold) << "\n";
  for (const auto& e : c.chain) {
    std::cout << "  " << e.label << "\n      " << num(e.lhs) << (e.strict ? " < " : " <= ") << num(e.rhs)
              << "   slack " << num(e.slack) << "\n";
  }
  std::cout << "pulled-back triangle inequality violated: d(x,y) = " << num(c.d_xy) << " > d(x,z) + d(z,y) = "
            << num(c.d_xz) << " + " << num(c.d_zy) << "   slack " << num(c.slack) << "\n";
}

RamseyProvider provider_from(const Options& o, const RunConfig& cfg) {
  if (!o.ramsey_table.empty()) {
    const Json t = Json::parse(read_file(o.ramsey_table));
    std::map<std::pair<int, double>, int> table;
    for (const auto& e : t) table[{e.at("n").get<int>(), e.at("beta").get<double>()}] = e.at("N").get<int>();
    return table_provider(std::move(table));
  }
  if (o.ramsey_empirical > 0) return empirical_provider(o.ramsey_empirical, cfg.seed);
  return {};
}

int cmd_certify_alpha(const RunConfig& cfg, const Options& o) {
  if (!(o.alpha > 0.0 && o.alpha < 1.0)) throw UsageError("--alpha must lie in (0, 1)");
  const auto p = load_point_config(o);
  const auto r = refute_alpha_embedding(p, o.alpha, cfg.threads);
  Json j = header(cfg, "certify-alpha");
  j.update(refutation_to_json(r));
  try {
    const auto b = cardinality_bound(p.norm.dim(), o.alpha, provider_from(o, cfg));
    j["cardinality_bound"] = {{"N", b.N}, {"certified", b.certified}, {"source", b.source}};
    std::cout << "cardinality bound N = " << b.N << " (" << b.source << ")\n";
  } catch (const UnavailableBoundError& e) {
    j["cardinality_bound"] = nullptr;
    std::cout << "no Ramsey bound available: search-based refutation only\n";
  }
  cfg.emit_json("certify-alpha.json", j);
  print_transcript(r, p);
  return r.certificate ? kExitRefuted : kExitOk;
}

int cmd_certify_h(const RunConfig& cfg, const Options& o) {
  require(o.h, "--h");
  const auto h = parse_snowflake(o.h);
  WitnessMode mode;
  if (o.mode == "unbounded") {
    mode = WitnessMode::unbounded;
  } else if (o.mode == "accumulation") {
    mode = WitnessMode::accumulation;
  } else {
    throw UsageError("--mode must be unbounded or accumulation");
  }
  const auto p = load_point_config(o);
  const auto r = refute_h_embedding(p, h, mode, cfg.threads);
  Json j = header(cfg, "certify-h");
  j.update(refutation_to_json(r));
  j["h"] = snowflake_to_json(h);
  j["mode"] = o.mode;
  cfg.emit_json("certify-h.json", j);
  print_transcript(r, p);
  return r.certificate ? kExitRefuted : kExitOk;
}

int cmd_distortion(const RunConfig& cfg, const Options& o) {
  auto m = load_metric_arg(o);
  if (o.alpha > 0.0) m = power_snowflake(m, o.alpha);
  const auto d = distortion_probe(m, o.dim, o.restarts, cfg.seed);
  Json j = header(cfg, "distortion");
  if (o.alpha > 0.0) j["alpha"] = o.alpha;
  j["target_dim"] = o.dim;
  j["distortion"] = d.distortion;
  j["best_run"] = d.best_run;
  j["per_run"] = d.per_run;
  j["note"] = "upper bound on the least distortion into R^target_dim";
  cfg.emit_json("distortion.json", j);
  cfg.emit("distortion.csv", points_to_csv(d.coords, m.labels));
  std::cout << "distortion <= " << num(d.distortion) << "\n";
  return kExitOk;
}

using Handler = int (*)(const RunConfig&, const Options&);

struct Spec {
  const char* name;
  const char* module;
  const char* help;
  Handler run;
};

}  // namespace

void register_commands(CLI::App& app, RunConfig& cfg, int& exit_code) {
  static Options o;
  static std::string formats = "json,csv,svg";

  app.add_option("--seed", cfg.seed, "Seed for every randomized step")->default_val(0);
  app.add_option("--threads", cfg.threads, "Worker threads (0 = all cores)")
      ->envname("SNOWFLAKE_LAB_THREADS")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--out", cfg.out_dir, "Output directory")->default_val(".");
  app.add_option("--formats", formats, "Comma separated output formats among json, csv, svg")
      ->default_val("json,csv,svg");
  app.add_flag("--quiet", cfg.quiet, "Do not list written files");
  app.fallthrough();
  app.parse_complete_callback([&cfg] {
    cfg.formats.clear();
    std::stringstream ss(formats);
    std::string f;
    while (std::getline(ss, f, ',')) {
      if (f != "json" && f != "csv" && f != "svg") throw CLI::ValidationError("--formats", "unknown format " + f);
      cfg.formats.insert(f);
    }
  });

  static const Spec specs[] = {
      {"validate", "metric-core", "Check the metric axioms of a distance matrix", cmd_validate},
      {"snowflake", "snowflake", "Axioms of h; apply h or h^-1 to a metric", cmd_snowflake},
      {"embed", "embed", "Gram criterion and Euclidean coordinates", cmd_embed},
      {"min-dim", "embed", "Least Euclidean dimension of an isometric embedding", cmd_min_dim},
      {"alpha-star", "embed", "Euclidean embeddability of d^alpha across alpha", cmd_alpha_star},
      {"newton", "embed", "Newton solve around the simplex for near-equilateral targets", cmd_newton},
      {"john", "norm-geometry", "John ellipsoid, sandwich check and comparison constants", cmd_john},
      {"angles", "ramsey-angles", "Largest angle among triples of a point set", cmd_angles},
      {"ramsey-floor", "ramsey-angles", "Search for large sets with every angle below beta", cmd_ramsey_floor},
      {"spiral", "counterexample", "Planar points whose h-preimage is a metric", cmd_spiral},
      {"remark", "counterexample", "Piecewise linear h with an n-point embedding", cmd_remark},
      {"certify-alpha", "certify", "Refute an isometric embedding of (X, d^alpha)", cmd_certify_alpha},
      {"certify-h", "certify", "Refute an isometric embedding of (X, h o d)", cmd_certify_h},
      {"distortion", "embed", "Upper bound on bilipschitz distortion into R^k", cmd_distortion},
  };

  for (const auto& s : specs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    sub->add_flag("--selftest", o.selftest, std::string("Run the ") + s.module + " example table");
    const std::string name = s.name;
    auto has = [&name](std::initializer_list<const char*> names) {
      for (const char* n : names) {
        if (name == n) return true;
      }
      return false;
    };
    if (has({"validate", "snowflake", "embed", "min-dim", "alpha-star", "newton", "distortion"})) {
      sub->add_option("--in", o.in, "Metric file (.json or .csv)");
    }
    if (has({"angles", "certify-alpha", "certify-h"})) {
      sub->add_option("--points", o.points, "Point file (.csv or .json)");
    }
    if (has({"angles", "certify-alpha", "certify-h", "john"})) {
      sub->add_option("--norm", o.norm, "l2, l1, linf, lp:<p>, square, hexagon, or norm JSON")->default_val("l2");
    }
    if (has({"snowflake", "spiral", "certify-h"})) {
      sub->add_option("--h", o.h, "Snowflake function, e.g. \"t^0.5\", \"t+sqrt(t)\", \"2*log(1+t)\"");
    }
    if (has({"validate", "snowflake"})) sub->add_option("--tol-metric", o.tol_metric)->default_val(kTolMetric);
    if (name == "snowflake") {
      sub->add_flag("--inverse", o.inverse, "Apply h^-1 instead of h");
      sub->add_flag("--require-metric", o.require_metric, "With --inverse, report a failing triangle");
      sub->add_option("--at", o.at, "Report h, c(t), T(t) and T~(t) at this t");
    }
    if (has({"embed", "min-dim", "distortion"})) sub->add_option("--alpha", o.alpha, "Snowflake d^alpha first");
    if (name == "embed") {
      sub->add_option("--tol-psd", o.tol_psd)->default_val(kTolPsd);
      sub->add_option("--tol-rank", o.tol_rank)->default_val(kTolRank);
      sub->add_option("--base", o.base, "Base point index")->default_val(0);
    }
    if (name == "alpha-star") {
      sub->add_option("--grid-step", o.grid_step)->default_val(0.01);
      sub->add_option("--tol", o.tol_alpha, "Bisection tolerance in alpha")->default_val(1e-9);
    }
    if (name == "newton") {
      sub->add_option("--max-iter", o.max_iter)->default_val(50);
      sub->add_option("--tol", o.newton_tol, "Target for max | |q_i - q_j|^2 - rho_ij^2 |")->default_val(1e-12);
      sub->add_option("--box", o.box, "Accepted max |rho_ij - 1|")->default_val(0.05);
    }
    if (has({"john", "ramsey-floor", "distortion"})) sub->add_option("--dim", o.dim)->default_val(2);
    if (has({"john", "angles"})) {
      sub->add_option("--samples", o.samples, "Monte-Carlo samples")->default_val(10000);
    }
    if (name == "ramsey-floor") {
      sub->add_option("--beta", o.beta, "Angle bound in radians");
      sub->add_option("--budget", o.budget, "Proposal budget")->default_val(2000);
    }
    if (name == "spiral") {
      sub->add_option("--n", o.n, "Number of angles N (N + 1 points)")->default_val(40);
      sub->add_option("--angles", o.angles, "geometric or inverse-square")->default_val("geometric");
      sub->add_option("--t-start", o.t_start)->default_val(1.0);
      sub->add_option("--recheck", o.recheck, "Random (s, t) pairs per threshold")->default_val(10000);
    }
    if (name == "remark") {
      sub->add_option("--n", o.remark_n, "Number of points")->default_val(3);
      sub->add_option("--slopes", o.slopes, "Comma separated decreasing slopes")->default_str("0.5,0.25,0.125,0.0625");
      sub->add_option("--lengths", o.lengths, "Comma separated segment lengths");
    }
    if (name == "certify-alpha") {
      sub->add_option("--alpha", o.alpha, "Snowflake exponent in (0, 1)");
      sub->add_option("--ramsey-table", o.ramsey_table, "JSON list of {n, beta, N} entries");
      sub->add_option("--ramsey-empirical", o.ramsey_empirical, "Budget for an empirical lower bound on N");
    }
    if (name == "certify-h") {
      sub->add_option("--mode", o.mode, "unbounded or accumulation")->default_val("unbounded");
    }
    if (name == "distortion") sub->add_option("--restarts", o.restarts)->default_val(8);

    const Handler run = s.run;
    const std::string module = s.module;
    sub->callback([&cfg, &exit_code, run, module] {
      if (o.selftest) {
        exit_code = run_selftest(module) == 0 ? kExitOk : kExitError;
        return;
      }
      exit_code = run(cfg, o);
    });
  }
}

}  // namespace snowlab::cli
