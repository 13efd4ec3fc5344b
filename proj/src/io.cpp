#include "snowlab/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <regex>
#include <sstream>

#include "snowlab/errors.hpp"

namespace snowlab {

namespace {

void dump_string(std::string& out, const std::string& s) {
  out += '"';
  for (const char ch : s) {
    const auto c = static_cast<unsigned char>(ch);
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  out += '"';
}

void dump_rec(std::string& out, const Json& j, int indent, int depth) {
  const auto newline = [&](int d) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        dump_string(out, it.key());
        out += indent < 0 ? ":" : ": ";
        dump_rec(out, it.value(), indent, depth + 1);
      }
      newline(depth);
      out += '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      bool flat = true;
      for (const auto& e : j) flat = flat && !e.is_structured();
      out += '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += flat && indent >= 0 ? ", " : ",";
        first = false;
        if (!flat) newline(depth + 1);
        dump_rec(out, e, indent, depth + 1);
      }
      if (!flat) newline(depth);
      out += ']';
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      if (std::isfinite(v)) {
        out += format_number(v);
      } else {
        dump_string(out, format_number(v));
      }
      return;
    }
    case Json::value_t::string:
      dump_string(out, j.get<std::string>());
      return;
    default:
      out += j.dump();
  }
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  for (const char ch : line) {
    if (ch == ',') {
      out.push_back(cell);
      cell.clear();
    } else if (ch != '\r') {
      cell += ch;
    }
  }
  out.push_back(cell);
  for (auto& c : out) {
    const auto b = c.find_first_not_of(" \t");
    const auto e = c.find_last_not_of(" \t");
    c = b == std::string::npos ? std::string() : c.substr(b, e - b + 1);
  }
  return out;
}

std::vector<std::vector<std::string>> read_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    rows.push_back(split_csv_line(line));
  }
  return rows;
}

double parse_double(const std::string& s) {
  if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) throw StructuralError("not a number: '" + s + "'");
  return v;
}

double json_number(const Json& j, const char* what) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return parse_double(j.get<std::string>());
  throw StructuralError(std::string("expected a number for ") + what);
}

void check_label(const std::string& s) {
  if (s.find_first_of(",\n\r") != std::string::npos) {
    throw StructuralError("CSV labels may not contain commas or line breaks: '" + s + "'");
  }
}

Json parse_json_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw StructuralError(std::string("malformed JSON: ") + e.what());
  }
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

template <class F>
auto guard(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    throw StructuralError(std::string("malformed ") + what + ": " + e.what());
  }
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string dump_json(const Json& j, int indent) {
  std::string out;
  dump_rec(out, j, indent, 0);
  if (indent >= 0) out += '\n';
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StructuralError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw StructuralError("cannot write " + path);
  out << text;
  if (!out) throw StructuralError("write failed: " + path);
}

Json to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json r = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) r.push_back(m(i, j));
    rows.push_back(std::move(r));
  }
  return rows;
}

Json to_json(const Vector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Matrix matrix_from_json(const Json& j) {
  if (!j.is_array()) throw StructuralError("matrix must be an array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (rows == 0) return Matrix(0, 0);
  if (!j[0].is_array()) throw StructuralError("matrix must be an array of rows");
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& r = j[static_cast<std::size_t>(i)];
    if (!r.is_array() || static_cast<Eigen::Index>(r.size()) != cols) {
      throw StructuralError("matrix rows have different lengths");
    }
    for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = json_number(r[static_cast<std::size_t>(c)], "matrix entry");
  }
  return m;
}

// --- metrics ---------------------------------------------------------------

Json metric_to_json(const FiniteMetric& m) {
  Json j;
  j["schema"] = kSchema;
  j["labels"] = m.labels;
  j["dist"] = to_json(m.dist);
  return j;
}

FiniteMetric metric_from_json(const Json& j) {
  return guard("metric JSON", [&] {
    if (!j.is_object() || !j.contains("dist")) throw StructuralError("metric JSON needs a \"dist\" matrix");
    Matrix d = matrix_from_json(j.at("dist"));
    std::vector<std::string> labels;
    if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
    return make_metric(std::move(d), std::move(labels));
  });
}

std::string metric_to_csv(const FiniteMetric& m) {
  std::string out;
  for (std::size_t i = 0; i < m.labels.size(); ++i) {
    check_label(m.labels[i]);
    if (i) out += ',';
    out += m.labels[i];
  }
  out += '\n';
  for (Eigen::Index i = 0; i < m.dist.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.dist.cols(); ++j) {
      if (j) out += ',';
      out += format_number(m.dist(i, j));
    }
    out += '\n';
  }
  return out;
}

FiniteMetric metric_from_csv(const std::string& text) {
  const auto rows = read_csv(text);
  if (rows.empty()) throw StructuralError("empty metric CSV");
  const auto& header = rows[0];
  const std::size_t n = header.size();
  if (rows.size() != n + 1) throw StructuralError("metric CSV must have one row per label");
  Matrix d(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i + 1].size() != n) throw StructuralError("metric CSV row has the wrong length");
    for (std::size_t j = 0; j < n; ++j) {
      d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = parse_double(rows[i + 1][j]);
    }
  }
  return make_metric(std::move(d), header);
}

FiniteMetric load_metric(const std::string& path) {
  const std::string text = read_file(path);
  if (ends_with(path, ".csv")) return metric_from_csv(text);
  return metric_from_json(parse_json_text(text));
}

// --- points ----------------------------------------------------------------

std::string points_to_csv(const Matrix& coords, const std::vector<std::string>& labels) {
  const bool labeled = !labels.empty();
  if (labeled && static_cast<Eigen::Index>(labels.size()) != coords.rows()) {
    throw StructuralError("label count does not match the point count");
  }
  std::string out;
  if (labeled) out += "label";
  for (Eigen::Index k = 0; k < coords.cols(); ++k) {
    if (labeled || k) out += ',';
    out += "x" + std::to_string(k);
  }
  out += '\n';
  for (Eigen::Index i = 0; i < coords.rows(); ++i) {
    if (labeled) {
      check_label(labels[static_cast<std::size_t>(i)]);
      out += labels[static_cast<std::size_t>(i)];
    }
    for (Eigen::Index k = 0; k < coords.cols(); ++k) {
      if (labeled || k) out += ',';
      out += format_number(coords(i, k));
    }
    out += '\n';
  }
  return out;
}

PointTable points_from_csv(const std::string& text) {
  const auto rows = read_csv(text);
  if (rows.empty()) throw StructuralError("empty point CSV");
  const bool labeled = rows[0][0] == "label";
  const std::size_t dim = rows[0].size() - (labeled ? 1 : 0);
  if (dim == 0) throw StructuralError("point CSV has no coordinate columns");
  PointTable t;
  t.coords.resize(static_cast<Eigen::Index>(rows.size() - 1), static_cast<Eigen::Index>(dim));
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].size() != rows[0].size()) throw StructuralError("point CSV row has the wrong length");
    if (labeled) t.labels.push_back(rows[i][0]);
    for (std::size_t k = 0; k < dim; ++k) {
      t.coords(static_cast<Eigen::Index>(i - 1), static_cast<Eigen::Index>(k)) =
          parse_double(rows[i][k + (labeled ? 1 : 0)]);
    }
  }
  if (!t.coords.allFinite()) throw StructuralError("point CSV has non-finite coordinates");
  return t;
}

PointTable load_points(const std::string& path) {
  const std::string text = read_file(path);
  if (ends_with(path, ".csv")) return points_from_csv(text);
  const Json j = parse_json_text(text);
  return guard("point JSON", [&] {
    PointTable t;
    t.coords = matrix_from_json(j.at("points"));
    if (j.contains("labels")) t.labels = j.at("labels").get<std::vector<std::string>>();
    if (!t.labels.empty() && static_cast<Eigen::Index>(t.labels.size()) != t.coords.rows()) {
      throw StructuralError("label count does not match the point count");
    }
    return t;
  });
}

// --- norms -----------------------------------------------------------------

Json norm_to_json(const Norm& n) {
  Json j;
  j["schema"] = kSchema;
  std::visit(
      [&](const auto& f) {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, LpNorm>) {
          j["type"] = "lp";
          if (std::isinf(f.p)) {
            j["p"] = "inf";
          } else {
            j["p"] = f.p;
          }
          j["dim"] = f.dim;
        } else if constexpr (std::is_same_v<F, PolytopeNorm>) {
          j["type"] = "polytope_facets";
          j["facets"] = to_json(f.facets);
          j["vertices"] = to_json(f.vertices);
        } else {
          j["type"] = "ellipsoid";
          j["A"] = to_json(f.A);
        }
      },
      n.variant());
  return j;
}

Norm norm_from_json(const Json& j) {
  return guard("norm JSON", [&] {
    const std::string type = j.at("type").get<std::string>();
    if (type == "lp") return Norm::lp(json_number(j.at("p"), "p"), j.at("dim").get<int>());
    if (type == "polytope_vertices") return Norm::polytope_from_vertices(matrix_from_json(j.at("vertices")));
    if (type == "polytope_facets") return Norm::polytope_from_facets(matrix_from_json(j.at("facets")));
    if (type == "ellipsoid") return Norm::ellipsoidal(matrix_from_json(j.at("A")));
    throw StructuralError("unknown norm type '" + type + "'");
  });
}

Norm parse_norm(const std::string& spec, int dim) {
  if (spec == "l2") return Norm::l2(dim);
  if (spec == "l1") return Norm::l1(dim);
  if (spec == "linf") return Norm::linf(dim);
  if (spec.rfind("lp:", 0) == 0) return Norm::lp(parse_double(spec.substr(3)), dim);
  if (spec == "square" || spec == "hexagon") {
    if (dim != 2) throw StructuralError(spec + " is a norm on R^2");
    if (spec == "hexagon") return Norm::regular_polygon(6);
    Matrix sq(4, 2);
    sq << 1, 1, 1, -1, -1, 1, -1, -1;
    return Norm::polytope_from_vertices(sq);
  }
  const bool inline_json = !spec.empty() && spec[0] == '{';
  Norm n = norm_from_json(parse_json_text(inline_json ? spec : read_file(spec)));
  if (n.dim() != dim) throw StructuralError("norm dimension does not match the points");
  return n;
}

// --- snowflake functions ---------------------------------------------------

Json snowflake_to_json(const SnowflakeFunction& h) {
  Json j;
  std::visit(
      [&](const auto& f) {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, PowerLaw>) {
          j["type"] = "power";
          j["alpha"] = f.alpha;
        } else if constexpr (std::is_same_v<F, PiecewiseLinear>) {
          j["type"] = "piecewise";
          j["breakpoints"] = f.breakpoints;
          j["slopes"] = f.slopes;
          if (f.lead_gamma) j["lead_gamma"] = *f.lead_gamma;
          if (f.tail_gamma) j["tail_gamma"] = *f.tail_gamma;
        } else {
          std::visit(
              [&](const auto& g) {
                using G = std::decay_t<decltype(g)>;
                if constexpr (std::is_same_v<G, LinearPlusSqrt>) {
                  j["type"] = "linear_plus_sqrt";
                  j["a"] = g.a;
                  j["b"] = g.b;
                } else if constexpr (std::is_same_v<G, LinearPlusConstant>) {
                  j["type"] = "linear_plus_constant";
                  j["c"] = g.c;
                  j["b"] = g.b;
                } else {
                  j["type"] = "scaled_log1p";
                  j["a"] = g.a;
                }
              },
              f);
        }
      },
      h.variant());
  return j;
}

SnowflakeFunction snowflake_from_json(const Json& j) {
  return guard("snowflake JSON", [&] {
    const std::string type = j.at("type").get<std::string>();
    if (type == "power") return SnowflakeFunction::power(json_number(j.at("alpha"), "alpha"));
    if (type == "piecewise") {
      std::optional<double> lead;
      std::optional<double> tail;
      if (j.contains("lead_gamma")) lead = json_number(j.at("lead_gamma"), "lead_gamma");
      if (j.contains("tail_gamma")) tail = json_number(j.at("tail_gamma"), "tail_gamma");
      return SnowflakeFunction::piecewise(j.at("breakpoints").get<std::vector<double>>(),
                                          j.at("slopes").get<std::vector<double>>(), lead, tail);
    }
    if (type == "linear_plus_sqrt") {
      return SnowflakeFunction::linear_plus_sqrt(json_number(j.at("a"), "a"), json_number(j.at("b"), "b"));
    }
    if (type == "linear_plus_constant") {
      return SnowflakeFunction::linear_plus_constant(json_number(j.at("c"), "c"), json_number(j.at("b"), "b"));
    }
    if (type == "scaled_log1p") return SnowflakeFunction::scaled_log1p(json_number(j.at("a"), "a"));
    throw StructuralError("unknown snowflake type '" + type + "'");
  });
}

SnowflakeFunction parse_snowflake(const std::string& text) {
  std::string s;
  for (const char ch : text) {
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  }
  if (!s.empty() && s[0] == '{') return snowflake_from_json(parse_json_text(s));

  static const std::string num = R"((\d+(?:\.\d*)?(?:[eE][-+]?\d+)?|\.\d+(?:[eE][-+]?\d+)?))";
  static const std::regex power("^t\\^" + num + "$");
  static const std::regex lin_sqrt("^(?:" + num + "\\*)?t\\+(?:" + num + "\\*)?sqrt\\(t\\)$");
  static const std::regex log1p("^(?:" + num + "\\*)?log\\(1\\+t\\)$");
  static const std::regex lin_const("^(?:" + num + "\\*)?t\\+" + num + "$");
  const auto coef = [](const std::ssub_match& m) { return m.matched ? parse_double(m.str()) : 1.0; };

  std::smatch m;
  if (s == "t") return SnowflakeFunction::power(1.0);
  if (s == "sqrt(t)") return SnowflakeFunction::power(0.5);
  if (std::regex_match(s, m, power)) return SnowflakeFunction::power(parse_double(m[1].str()));
  if (std::regex_match(s, m, lin_sqrt)) return SnowflakeFunction::linear_plus_sqrt(coef(m[1]), coef(m[2]));
  if (std::regex_match(s, m, log1p)) return SnowflakeFunction::scaled_log1p(coef(m[1]));
  if (std::regex_match(s, m, lin_const)) return SnowflakeFunction::linear_plus_constant(coef(m[1]), coef(m[2]));
  throw StructuralError("cannot parse snowflake function '" + text + "'");
}

// --- reports ---------------------------------------------------------------

Json axioms_to_json(const AxiomFlags& f) {
  Json j;
  j["S1"] = to_string(f.s1);
  j["S2"] = to_string(f.s2);
  j["S3"] = to_string(f.s3);
  j["S4"] = to_string(f.s4);
  j["all_hold"] = f.all_hold();
  return j;
}

Json validation_to_json(const ValidationReport& r) {
  Json j;
  j["is_metric"] = r.is_metric;
  if (r.worst_triangle) {
    const auto& t = *r.worst_triangle;
    j["worst_triangle"] = {{"i", t.i}, {"j", t.j}, {"k", t.k}, {"slack", t.slack}};
  } else {
    j["worst_triangle"] = nullptr;
  }
  j["worst_symmetry_gap"] = r.worst_symmetry_gap;
  j["worst_diagonal"] = r.worst_diagonal;
  j["min_off_diagonal"] = r.min_off_diagonal;
  return j;
}

Json gram_to_json(const GramDecomposition& g) {
  Json j;
  j["base_index"] = g.base_index;
  j["eigenvalues"] = to_json(g.eigenvalues);
  j["tol_psd"] = g.tol_psd;
  j["tol_rank"] = g.tol_rank;
  j["embeddable"] = g.embeddable();
  if (g.min_dim) {
    j["min_dim"] = *g.min_dim;
    j["residual"] = g.residual;
  } else {
    j["min_dim"] = nullptr;
  }
  return j;
}

Json alpha_profile_to_json(const AlphaProfile& p) {
  Json j;
  Json samples = Json::array();
  for (const auto& s : p.samples) {
    samples.push_back({{"alpha", s.alpha}, {"embeddable", s.embeddable}, {"min_eigenvalue", s.min_eigenvalue}});
  }
  j["samples"] = std::move(samples);
  j["boundaries"] = p.boundaries;
  Json iv = Json::array();
  for (const auto& [a, b] : p.intervals) iv.push_back(Json::array({a, b}));
  j["intervals"] = std::move(iv);
  if (p.largest_embeddable) {
    j["largest_embeddable"] = *p.largest_embeddable;
  } else {
    j["largest_embeddable"] = nullptr;
  }
  return j;
}

Json newton_to_json(const NewtonState& s) {
  Json j;
  j["iterations"] = s.iterations;
  j["residual_sq"] = s.residual_sq;
  j["history"] = s.history;
  j["non_monotone_steps"] = s.non_monotone_steps;
  j["points"] = to_json(s.points);
  return j;
}

Json lemma_constants_to_json(const LemmaConstants& k) {
  Json j;
  j["n"] = k.n;
  j["theta_cone"] = k.theta_cone;
  j["ell_cone"] = k.ell_cone;
  j["epsilon"] = k.epsilon;
  j["C"] = k.C;
  j["K"] = k.K;
  return j;
}

Json certificate_to_json(const ViolationCertificate& c) {
  Json j;
  j["mode"] = to_string(c.mode);
  j["x"] = c.x;
  j["apex"] = c.apex;
  j["y"] = c.y;
  j["apex_angle"] = c.apex_angle;
  if (c.alpha) j["alpha"] = *c.alpha;
  if (!c.h_name.empty()) j["h"] = c.h_name;
  j["threshold_name"] = c.threshold_name;
  j["threshold"] = c.threshold;
  j["constants"] = lemma_constants_to_json(c.constants);
  j["d_xy"] = c.d_xy;
  j["d_xz"] = c.d_xz;
  j["d_zy"] = c.d_zy;
  j["slack"] = c.slack;
  Json chain = Json::array();
  for (const auto& e : c.chain) {
    chain.push_back({{"label", e.label}, {"lhs", e.lhs}, {"rhs", e.rhs}, {"slack", e.slack}, {"strict", e.strict}});
  }
  j["chain"] = std::move(chain);
  return j;
}

Json refutation_to_json(const RefutationResult& r) {
  Json j;
  j["schema"] = kSchema;
  j["status"] = to_string(r.status);
  j["refuted"] = r.certificate.has_value();
  j["threshold"] = r.threshold;
  if (r.best_triple) {
    const auto& t = *r.best_triple;
    j["best_triple"] = {{"i", t.i}, {"apex", t.j}, {"k", t.k}, {"angle", t.angle}};
  } else {
    j["best_triple"] = nullptr;
  }
  if (!r.witnesses.empty()) j["witnesses"] = r.witnesses;
  if (!r.note.empty()) j["note"] = r.note;
  if (r.certificate) {
    j["certificate"] = certificate_to_json(*r.certificate);
  } else {
    j["certificate"] = nullptr;
  }
  return j;
}

Json preimage_report_to_json(const PreimageReport& r) {
  Json j;
  j["checks"] = r.checks;
  j["violations"] = r.violations;
  j["min_slack"] = r.min_slack;
  j["min_rel_slack"] = r.min_rel_slack;
  j["worst"] = Json::array({r.worst[0], r.worst[1], r.worst[2]});
  return j;
}

Json spiral_to_json(const Spiral& s, const SnowflakeFunction& h) {
  Json j;
  j["h"] = snowflake_to_json(h);
  j["limit_c"] = s.limit_c;
  j["alphas"] = s.alphas;
  j["thresholds"] = s.thresholds;
  Json gaps = Json::array();
  for (const auto& g : s.gaps) gaps.push_back(static_cast<double>(g));
  j["gaps"] = std::move(gaps);
  return j;
}

}  // namespace snowlab
