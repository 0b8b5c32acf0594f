#include <doctest.h>

#include <string>

#include "infoot/error.hpp"
#include "infoot/experiment_spec.hpp"
#include "infoot/io.hpp"
#include "test_support.hpp"

using namespace infoot;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_experiment_spec(text, "spec.json");
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("format_double round-trips and marks integers") {
  CHECK(io::format_double(1.0) == "1.0");
  CHECK(io::format_double(-3.0) == "-3.0");
  CHECK(io::format_double(0.1) == "0.1");
  for (const double v : {1.0 / 3.0, 2.5e-300, 123456.789, -7e22}) {
    CHECK(std::stod(io::format_double(v)) == v);
  }
}

TEST_CASE("point set CSV") {
  const PointSet s = io::parse_point_set_csv("x0,x1,label\n1,2,0\n3.5,-4,1\n");
  CHECK(s.size() == 2);
  CHECK(s.dim() == 2);
  CHECK(s.labels() == std::vector<int>{0, 1});
  CHECK(s.points()(1, 0) == 3.5);

  const PointSet u = io::parse_point_set_csv("a,b,c\n1,2,3\n");
  CHECK_FALSE(u.has_labels());
  CHECK(u.dim() == 3);

  auto message = [](const std::string& text) {
    try {
      io::parse_point_set_csv(text, "pts.csv");
    } catch (const ValidationError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message("x0,x1\n1,2\n3\n").rfind("pts.csv:3:", 0) == 0);
  CHECK(message("x0,x1\n1,abc\n").rfind("pts.csv:2:", 0) == 0);
  CHECK(message("x0,label\n1,0.5\n").find("integer") != std::string::npos);
  CHECK(message("").rfind("pts.csv:1:", 0) == 0);

  const auto dir = testing::scratch("csv");
  io::write_point_set_csv(dir / "p.csv", s);
  const PointSet back = io::read_point_set_csv(dir / "p.csv");
  CHECK(back.points() == s.points());
  CHECK(back.labels() == s.labels());
}

TEST_CASE("matrix CSV round trip keeps coupling invariants") {
  const Matrix c = testing::random_points(7, 5, 3).cwiseAbs();
  const SinkhornResult r = sinkhorn(c, testing::uniform(7), testing::uniform(5));
  const auto dir = testing::scratch("matrix");
  io::write_matrix_csv(dir / "g.csv", r.coupling.values());
  const Matrix back = io::read_matrix_csv(dir / "g.csv");
  CHECK(back == r.coupling.values());
  CHECK(CouplingMatrix(back, testing::uniform(7), testing::uniform(5)).is_feasible());

  const Matrix with_header = io::parse_matrix_csv("a,b\n1,2\n3,4\n");
  CHECK(with_header.rows() == 2);
  CHECK(with_header(1, 1) == 4.0);
}

TEST_CASE("experiment spec parsing") {
  const ExperimentSpec s = parse_experiment_spec(R"({"scenario": "adaptation", "seed": 4})");
  CHECK(s.scenario == Scenario::Adaptation);
  CHECK(s.seed == 4);
  CHECK(s.data.clusters.seed == 4);
  CHECK(s.solver.lambda == 100.0);
  CHECK(s.projection.mode == ProjectionMode::Conditional);
  CHECK(s.ks == std::vector<int>{1, 5, 15});
  CHECK(s.class_penalty == 5000.0);

  const ExperimentSpec full = parse_experiment_spec(R"({
    "scenario": "retrieval", "seed": 1,
    "generator": {"source_sizes": [3, 4], "target_sizes": [5, 6], "rotation": 0.5},
    "solver": {"method": "infoot", "lambda": 5, "epsilon": 0.5, "bandwidth": 0.3},
    "projection": {"mode": "barycentric", "bandwidth": 0.1},
    "retrieval": {"ks": [1, 2]},
    "out": "elsewhere"})");
  CHECK(full.method == Method::InfoOT);
  CHECK(full.data.clusters.target_sizes == std::vector<int>{5, 6});
  CHECK(full.solver.bandwidth == 0.3);
  CHECK(full.projection.bandwidth == 0.1);
  CHECK(full.out == "elsewhere");

  SUBCASE("echo re-parses to the same spec") {
    const ExperimentSpec again = parse_experiment_spec(full.to_json().dump(2));
    CHECK(again.to_json() == full.to_json());
  }
}

TEST_CASE("experiment spec errors carry line numbers") {
  CHECK(error_of("{\n  \"scenario\": \"adaptation\",\n  \"seed\": 1,\n  oops\n}").rfind("spec.json:4:", 0) == 0);
  CHECK(error_of("{\n\"scenario\": \"adaptation\"\n}").find("seed") != std::string::npos);
  CHECK(error_of("{\"scenario\": \"adaptation\",\n\"seed\": 1,\n\"bogus\": 2}").rfind("spec.json:3:", 0) == 0);
  CHECK(error_of("{\"scenario\": \"nope\", \"seed\": 1}").find("unknown scenario") != std::string::npos);
  CHECK(error_of("{\"scenario\": \"adaptation\", \"seed\": 1,\n\"solver\": {\"lambda\": -1}}").rfind("spec.json:2:", 0) == 0);
  CHECK(error_of("{\"scenario\": \"adaptation\", \"seed\": 1,\n\"generator\": {\"source_sizes\": [0]}}").rfind("spec.json:2:", 0) == 0);
  CHECK(error_of("{\"scenario\": \"adaptation\", \"seed\": -2}").find("seed") != std::string::npos);
  CHECK(error_of("[1, 2]").find("object") != std::string::npos);
}

TEST_CASE("overrides") {
  ExperimentSpec s = parse_experiment_spec(R"({"scenario": "point_cloud", "seed": 1})");
  SpecOverrides o;
  o.lambda = 3.0;
  o.seed = 77;
  o.mode = "barycentric";
  o.out = "x";
  apply_overrides(s, o);
  CHECK(s.solver.lambda == 3.0);
  CHECK(s.seed == 77);
  CHECK(s.data.clusters.seed == 77);
  CHECK(s.projection.mode == ProjectionMode::Barycentric);
  CHECK(s.out == "x");
  SpecOverrides bad;
  bad.epsilon = 0.0;
  CHECK_THROWS_AS(apply_overrides(s, bad), ValidationError);
}
