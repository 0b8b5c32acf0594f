#include <doctest.h>

#include <cmath>
#include <numbers>

#include "golden_support.hpp"
#include "infoot/error.hpp"
#include "infoot/synthetic.hpp"
#include "test_support.hpp"

using namespace infoot;

TEST_CASE("one point per domain sits at the mode") {
  ClusterParams p;
  p.source_sizes = {1};
  p.target_sizes = {1};
  p.cluster_std = 0.0;
  const SyntheticPair d = gen_two_cluster(p);
  CHECK(d.source.size() == 1);
  CHECK(d.target.size() == 1);
  CHECK(d.source.points().isZero(0));
  CHECK(d.target.points().isZero(0));
  CHECK(d.source_clusters == std::vector<int>{0});
  CHECK_FALSE(d.source.has_labels());
}

TEST_CASE("zero spread places points on the rotated modes") {
  ClusterParams p;
  p.source_sizes = {1, 1};
  p.target_sizes = {1, 1};
  p.cluster_std = 0.0;
  p.rotation = std::numbers::pi / 2;
  const SyntheticPair d = gen_two_cluster(p);
  CHECK(d.source.points()(0, 0) == doctest::Approx(2.0));
  CHECK(d.source.points()(1, 0) == doctest::Approx(-2.0));
  CHECK(std::abs(d.target.points()(0, 0)) < 1e-12);
  CHECK(d.target.points()(0, 1) == doctest::Approx(2.0));
}

TEST_CASE("generator is deterministic") {
  ClusterParams p;
  p.outliers = 3;
  p.seed = 99;
  const SyntheticPair a = gen_two_cluster(p);
  const SyntheticPair b = gen_two_cluster(p);
  CHECK(a.source.points() == b.source.points());
  CHECK(a.target.points() == b.target.points());
  CHECK(a.target_clusters == b.target_clusters);
  p.seed = 100;
  CHECK_FALSE(gen_two_cluster(p).source.points() == a.source.points());
}

TEST_CASE("outliers are appended far from their mode") {
  ClusterParams p;
  p.outliers = 2;
  p.outlier_magnitude = 10.0;
  p.cluster_std = 0.5;
  const SyntheticPair d = gen_two_cluster(p);
  CHECK(d.target.size() == 102);
  CHECK(d.target_clusters[100] == -1);
  CHECK(d.target_clusters[101] == -1);
  for (int j = 0; j < 2; ++j) {
    const double reach = (d.target.points().row(100 + j) - d.target_modes.row(j)).norm();
    CHECK(reach == doctest::Approx(5.0));
  }
}

TEST_CASE("generator validation") {
  ClusterParams p;
  p.source_sizes = {3, 0};
  CHECK_THROWS_AS(gen_two_cluster(p), ValidationError);
  p = ClusterParams{};
  p.target_sizes = {3};
  CHECK_THROWS_AS(gen_two_cluster(p), ValidationError);
  p = ClusterParams{};
  p.cluster_std = -1;
  CHECK_THROWS_AS(gen_two_cluster(p), ValidationError);
}

TEST_CASE("golden: per-cluster means of the rotated outlier instance") {
  ClusterParams p;
  p.source_sizes = {50, 50};
  p.target_sizes = {50, 50};
  p.rotation = std::numbers::pi / 4;
  p.outliers = 2;
  p.outlier_magnitude = 10.0;
  p.seed = 2024;
  const SyntheticPair d = gen_two_cluster(p);
  nlohmann::json summary;
  for (const auto* side : {"source", "target"}) {
    const bool src = std::string(side) == "source";
    const PointSet& s = src ? d.source : d.target;
    const std::vector<int>& ids = src ? d.source_clusters : d.target_clusters;
    nlohmann::json means = nlohmann::json::array();
    for (int c = -1; c < 2; ++c) {
      Vector sum = Vector::Zero(2);
      int count = 0;
      for (Index i = 0; i < s.size(); ++i)
        if (ids[static_cast<std::size_t>(i)] == c) {
          sum += s.points().row(i).transpose();
          ++count;
        }
      if (count == 0) continue;
      means.push_back({{"cluster", c}, {"count", count}, {"mean", {sum(0) / count, sum(1) / count}}});
    }
    summary[side] = means;
  }
  testing::check_golden("generator_summary", summary);
}

TEST_CASE("hold-out split") {
  const auto [kept, held] = holdout_split(100, 0.1, 7);
  CHECK(held.size() == 10);
  CHECK(kept.size() == 90);
  std::vector<Index> all(kept);
  all.insert(all.end(), held.begin(), held.end());
  std::sort(all.begin(), all.end());
  for (Index i = 0; i < 100; ++i) CHECK(all[static_cast<std::size_t>(i)] == i);
  CHECK(holdout_split(100, 0.1, 7).second == held);
  CHECK(holdout_split(5, 0.0, 1).second.empty());
  CHECK(holdout_split(3, 0.01, 1).second.size() == 1);
  CHECK_THROWS_AS(holdout_split(5, 1.0, 1), ValidationError);
}
