#pragma once

// File formats: metric JSON/CSV, point CSV, norm and snowflake JSON, reports.
// Numbers are written with 17 significant digits.

#include <string>

#include <json.hpp>

#include "snowlab/certify.hpp"
#include "snowlab/counterexample.hpp"
#include "snowlab/embed.hpp"
#include "snowlab/metric.hpp"
#include "snowlab/norm.hpp"
#include "snowlab/snowflake.hpp"

namespace snowlab {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "snowflake-lab/1";

std::string format_number(double v);
/// JSON text with numbers at 17 significant digits; non-finite values as strings.
std::string dump_json(const Json& j, int indent = 2);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

Json to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);
Json to_json(const Vector& v);

// metric: {"schema", "labels": [...], "dist": [[...], ...]}
Json metric_to_json(const FiniteMetric& m);
FiniteMetric metric_from_json(const Json& j);
std::string metric_to_csv(const FiniteMetric& m);
FiniteMetric metric_from_csv(const std::string& text);
/// By extension: .csv or JSON.
FiniteMetric load_metric(const std::string& path);

// points: header row of coordinate names, optional leading "label" column
std::string points_to_csv(const Matrix& coords, const std::vector<std::string>& labels = {});
struct PointTable {
  Matrix coords;
  std::vector<std::string> labels;
};
PointTable points_from_csv(const std::string& text);
/// CSV or JSON {"points": [[...]], "labels": [...]}.
PointTable load_points(const std::string& path);

// norm: {"type": "lp", "p": 2 | "inf", "dim": n} | {"type": "polytope_vertices", "vertices": [[...]]}
//     | {"type": "polytope_facets", "facets": [[...]]} | {"type": "ellipsoid", "A": [[...]]}
Json norm_to_json(const Norm& n);
Norm norm_from_json(const Json& j);
/// "l2", "l1", "linf", "lp:1.5", "hexagon", "square", or a JSON file path / text.
Norm parse_norm(const std::string& spec, int dim);

// snowflake functions as a tagged union
Json snowflake_to_json(const SnowflakeFunction& h);
SnowflakeFunction snowflake_from_json(const Json& j);
/// "t^0.5", "t+sqrt(t)", "0.5*t+2*sqrt(t)", "log(1+t)", "3*log(1+t)", "2*t+1", "t",
/// or JSON text.
SnowflakeFunction parse_snowflake(const std::string& text);

Json axioms_to_json(const AxiomFlags& f);
Json validation_to_json(const ValidationReport& r);
Json gram_to_json(const GramDecomposition& g);
Json alpha_profile_to_json(const AlphaProfile& p);
Json newton_to_json(const NewtonState& s);
Json lemma_constants_to_json(const LemmaConstants& k);
Json certificate_to_json(const ViolationCertificate& c);
Json refutation_to_json(const RefutationResult& r);
Json preimage_report_to_json(const PreimageReport& r);
Json spiral_to_json(const Spiral& s, const SnowflakeFunction& h);

}  // namespace snowlab
