#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <limits>
#include <random>

#include "snowlab/errors.hpp"
#include "snowlab/io.hpp"

using namespace snowlab;

namespace {

Matrix random_matrix(int r, int c, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  Matrix m(r, c);
  for (int i = 0; i < r; ++i)
    for (int k = 0; k < c; ++k) m(i, k) = u(rng) * std::pow(10.0, (i * c + k) % 7 - 3);
  return m;
}

FiniteMetric random_metric(int n, std::uint64_t seed) {
  Matrix p = random_matrix(n, 3, seed);
  return metric_from_points(PointConfig{p, Norm::l2(3), {}});
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("snowlab_io_" + name);
}

}  // namespace

TEST_CASE("format_number uses 17 significant digits") {
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(1.0) == "1");
  CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int s = 0; s < 1000; ++s) {
    const double v = u(rng) * std::pow(10.0, s % 40 - 20);
    CHECK(std::strtod(format_number(v).c_str(), nullptr) == v);
  }
}

TEST_CASE("dump_json writes numbers exactly and non-finite values as strings") {
  Json j;
  j["third"] = 1.0 / 3.0;
  j["inf"] = std::numeric_limits<double>::infinity();
  j["n"] = 7;
  j["row"] = Json::array({1.5, 2.5});
  const std::string text = dump_json(j);
  CHECK(text.find("0.33333333333333331") != std::string::npos);
  CHECK(text.find("\"inf\"") != std::string::npos);
  CHECK(text.find("[1.5, 2.5]") != std::string::npos);
  const Json back = Json::parse(text);
  CHECK(back["third"].get<double>() == 1.0 / 3.0);
  CHECK(back["n"].get<int>() == 7);
}

TEST_CASE("metric round trips are exact") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto m = random_metric(6, seed);
    m.labels = {"a", "b", "c", "d", "e", "f"};
    const auto j = metric_from_json(Json::parse(dump_json(metric_to_json(m))));
    CHECK(j.labels == m.labels);
    CHECK(j.dist == m.dist);
    const auto c = metric_from_csv(metric_to_csv(m));
    CHECK(c.labels == m.labels);
    CHECK(c.dist == m.dist);
  }
  CHECK(metric_to_json(random_metric(3, 0))["schema"] == kSchema);
}

TEST_CASE("metric files by extension") {
  const auto m = random_metric(4, 9);
  const auto js = temp_path("m.json");
  const auto cs = temp_path("m.csv");
  write_file(js.string(), dump_json(metric_to_json(m)));
  write_file(cs.string(), metric_to_csv(m));
  CHECK(load_metric(js.string()).dist == m.dist);
  CHECK(load_metric(cs.string()).dist == m.dist);
  std::filesystem::remove(js);
  std::filesystem::remove(cs);
  CHECK_THROWS_AS(load_metric(temp_path("missing.json").string()), StructuralError);
}

TEST_CASE("malformed metric input") {
  CHECK_THROWS_AS(metric_from_json(Json::parse(R"({"labels": ["a"]})")), StructuralError);
  CHECK_THROWS_AS(metric_from_json(Json::parse(R"({"dist": [[0, 1], [1]]})")), StructuralError);
  CHECK_THROWS_AS(metric_from_json(Json::parse(R"({"dist": [[0, "x"], [1, 0]]})")), StructuralError);
  CHECK_THROWS_AS(metric_from_csv("a,b\n0,1\n"), StructuralError);
  CHECK_THROWS_AS(metric_from_csv("a,b\n0,1\n1,zz\n"), StructuralError);
  CHECK_THROWS_AS(metric_from_csv(""), StructuralError);
  auto m = random_metric(2, 0);
  m.labels = {"a,b", "c"};
  CHECK_THROWS_AS(metric_to_csv(m), StructuralError);
}

TEST_CASE("point CSV round trip") {
  const Matrix p = random_matrix(10, 3, 4);
  const auto plain = points_from_csv(points_to_csv(p));
  CHECK(plain.coords == p);
  CHECK(plain.labels.empty());
  CHECK(points_to_csv(p).rfind("x0,x1,x2\n", 0) == 0);

  std::vector<std::string> labels;
  for (int i = 0; i < 10; ++i) labels.push_back("p" + std::to_string(i));
  const auto lab = points_from_csv(points_to_csv(p, labels));
  CHECK(lab.coords == p);
  CHECK(lab.labels == labels);

  CHECK_THROWS_AS(points_to_csv(p, {"only"}), StructuralError);
  CHECK_THROWS_AS(points_from_csv("x0,x1\n1,2\n3\n"), StructuralError);
  CHECK_THROWS_AS(points_from_csv("x0\nnan\n"), StructuralError);

  const auto js = temp_path("p.json");
  write_file(js.string(), R"({"points": [[0, 1], [2, 3]], "labels": ["u", "v"]})");
  const auto t = load_points(js.string());
  CHECK(t.coords(1, 0) == 2.0);
  CHECK(t.labels[1] == "v");
  std::filesystem::remove(js);
}

TEST_CASE("norm parsing and JSON") {
  CHECK(parse_norm("l2", 3)(Vector::Ones(3)) == doctest::Approx(std::sqrt(3.0)));
  CHECK(parse_norm("l1", 2)(Vector::Ones(2)) == 2.0);
  CHECK(parse_norm("linf", 4)(Vector::Ones(4)) == 1.0);
  CHECK(parse_norm("lp:3", 2)(Vector::Ones(2)) == doctest::Approx(std::cbrt(2.0)));
  Vector e0 = Vector::Unit(2, 0);
  CHECK(parse_norm("square", 2)(e0) == doctest::Approx(1.0));
  CHECK(parse_norm("square", 2)(Vector::Constant(2, 0.5)) == doctest::Approx(0.5));
  CHECK(parse_norm("square", 2)(Vector::Constant(2, -3.0)) == doctest::Approx(3.0));
  CHECK(parse_norm("hexagon", 2)(e0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(parse_norm("hexagon", 3), StructuralError);
  CHECK_THROWS_AS(parse_norm(R"({"type": "lp", "p": 2, "dim": 3})", 2), StructuralError);
  CHECK_THROWS_AS(parse_norm(R"({"type": "banana"})", 2), StructuralError);
  CHECK(parse_norm(R"({"type": "lp", "p": "inf", "dim": 2})", 2)(Vector::Ones(2)) == 1.0);

  Matrix A(2, 2);
  A << 2, 0.5, 0.5, 1;
  const std::vector<Norm> norms = {Norm::lp(1.5, 3), Norm::linf(2), Norm::regular_polygon(6),
                                   Norm::ellipsoidal(A)};
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  for (const auto& n : norms) {
    const auto back = norm_from_json(Json::parse(dump_json(norm_to_json(n))));
    CHECK(back.dim() == n.dim());
    for (int s = 0; s < 20; ++s) {
      Vector v(n.dim());
      for (int i = 0; i < n.dim(); ++i) v(i) = g(rng);
      CHECK(back(v) == doctest::Approx(n(v)).epsilon(1e-14));
    }
  }
}

TEST_CASE("snowflake parsing") {
  CHECK(parse_snowflake("t^0.5")(4.0) == doctest::Approx(2.0));
  CHECK(parse_snowflake("sqrt(t)")(9.0) == doctest::Approx(3.0));
  CHECK(parse_snowflake("t")(7.0) == 7.0);
  CHECK(parse_snowflake("t+sqrt(t)")(4.0) == doctest::Approx(6.0));
  CHECK(parse_snowflake("0.5*t + 2*sqrt(t)")(4.0) == doctest::Approx(6.0));
  CHECK(parse_snowflake("log(1+t)")(std::exp(1.0) - 1.0) == doctest::Approx(1.0));
  CHECK(parse_snowflake("3*log(1+t)")(std::exp(2.0) - 1.0) == doctest::Approx(6.0));
  CHECK(parse_snowflake("2*t+1")(3.0) == doctest::Approx(7.0));
  CHECK(parse_snowflake("t+1e-3")(1.0) == doctest::Approx(1.001));
  CHECK(parse_snowflake(R"({"type": "power", "alpha": 0.25})")(16.0) == doctest::Approx(2.0));
  CHECK_THROWS_AS(parse_snowflake("t^"), StructuralError);
  CHECK_THROWS_AS(parse_snowflake("sin(t)"), StructuralError);
  CHECK_THROWS_AS(parse_snowflake("{\"type\": 3"), StructuralError);
}

TEST_CASE("snowflake JSON round trip") {
  const std::vector<SnowflakeFunction> hs = {
      SnowflakeFunction::power(0.3),
      SnowflakeFunction::piecewise({0.0, 1.0, 3.0}, {2.0, 1.0}, 0.5, 0.5),
      SnowflakeFunction::piecewise({0.0, 2.0, 5.0}, {1.0, 0.25}),
      SnowflakeFunction::linear_plus_sqrt(0.5, 2.0),
      SnowflakeFunction::linear_plus_constant(1.0, 0.1),
      SnowflakeFunction::scaled_log1p(3.0),
  };
  for (const auto& h : hs) {
    CAPTURE(h.name());
    const auto back = snowflake_from_json(Json::parse(dump_json(snowflake_to_json(h))));
    CHECK(back.name() == h.name());
    for (double t : {1e-6, 0.3, 1.0, 2.5, 10.0, 1e5}) CHECK(back(t) == h(t));
  }
}

TEST_CASE("reports carry the schema tag") {
  Matrix p(3, 2);
  p << 0, 0, 1, 0, 2, 1e-6;
  const auto r = refute_alpha_embedding(PointConfig{p, Norm::l2(2), {}}, 0.5);
  const Json j = Json::parse(dump_json(refutation_to_json(r)));
  CHECK(j["schema"] == kSchema);
  CHECK(j["status"] == "certificate");
  CHECK(j["refuted"] == true);
  CHECK(j["certificate"]["mode"] == "alpha");
  CHECK(j["certificate"]["d_xy"].get<double>() == r.certificate->d_xy);
  CHECK(j["certificate"]["chain"].size() == r.certificate->chain.size());
  CHECK(norm_to_json(Norm::l2(2))["schema"] == kSchema);
}
