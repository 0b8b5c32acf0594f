#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "infoot/kernels.hpp"

namespace infoot {

/// Gaussian-mixture generator for paired source/target domains. Mode k of the
/// source sits on a circle of diameter `separation` (the origin for a single
/// mode); target modes are the source modes rotated by `rotation` radians in
/// the first two coordinates. Outliers are appended to the target at
/// `outlier_magnitude * cluster_std` radially beyond a target mode.
struct ClusterParams {
  std::vector<int> source_sizes{50, 50};
  std::vector<int> target_sizes{50, 50};
  int dim = 2;
  double separation = 4.0;
  double cluster_std = 0.5;
  double rotation = 0.0;
  int outliers = 0;
  double outlier_magnitude = 10.0;
  std::uint64_t seed = 0;

  void validate() const;
  int clusters() const { return static_cast<int>(source_sizes.size()); }
};

/// Generated domains plus ground-truth cluster ids (target outliers get -1).
/// The point sets carry no labels; callers attach them explicitly.
struct SyntheticPair {
  PointSet source;
  PointSet target;
  std::vector<int> source_clusters;
  std::vector<int> target_clusters;
  Matrix source_modes;  // clusters x dim
  Matrix target_modes;
};

SyntheticPair gen_two_cluster(const ClusterParams& params);

/// Deterministic split of [0, n) into (kept, held_out); held_out has
/// round(fraction * n) entries (at least one when fraction > 0 and n >= 2),
/// both lists ascending.
std::pair<std::vector<Index>, std::vector<Index>> holdout_split(Index n, double fraction,
                                                                std::uint64_t seed);

}  // namespace infoot
