#include "infoot/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "infoot/error.hpp"

namespace infoot {

void ClusterParams::validate() const {
  if (source_sizes.empty()) throw ValidationError("generator needs at least one cluster");
  if (source_sizes.size() != target_sizes.size()) {
    throw ValidationError("source and target must have the same number of clusters");
  }
  for (const auto* sizes : {&source_sizes, &target_sizes}) {
    for (const int s : *sizes) {
      if (s < 1) throw ValidationError("cluster sizes must be >= 1");
    }
  }
  if (dim < 2) throw ValidationError("generator dimension must be >= 2");
  if (!(cluster_std >= 0.0) || !std::isfinite(cluster_std)) {
    throw ValidationError("cluster_std must be finite and >= 0");
  }
  if (!(separation >= 0.0) || !std::isfinite(separation)) {
    throw ValidationError("separation must be finite and >= 0");
  }
  if (!std::isfinite(rotation)) throw ValidationError("rotation must be finite");
  if (outliers < 0) throw ValidationError("outlier count must be >= 0");
  if (!std::isfinite(outlier_magnitude)) throw ValidationError("outlier magnitude must be finite");
}

namespace {

Matrix mode_centers(int clusters, int dim, double separation) {
  Matrix centers = Matrix::Zero(clusters, dim);
  if (clusters == 1) return centers;
  const double radius = separation / 2.0;
  for (int k = 0; k < clusters; ++k) {
    const double angle = 2.0 * std::numbers::pi * k / clusters;
    centers(k, 0) = radius * std::cos(angle);
    centers(k, 1) = radius * std::sin(angle);
  }
  return centers;
}

Matrix rotate_plane(const Matrix& points, double angle) {
  Matrix out = points;
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  for (Index i = 0; i < points.rows(); ++i) {
    out(i, 0) = c * points(i, 0) - s * points(i, 1);
    out(i, 1) = s * points(i, 0) + c * points(i, 1);
  }
  return out;
}

}  // namespace

SyntheticPair gen_two_cluster(const ClusterParams& params) {
  params.validate();
  const int clusters = params.clusters();
  const Matrix source_modes = mode_centers(clusters, params.dim, params.separation);
  const Matrix target_modes = rotate_plane(source_modes, params.rotation);

  std::mt19937_64 rng(params.seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  auto sample = [&](const Matrix& modes, const std::vector<int>& sizes, std::vector<int>& ids,
                    Index extra_rows) {
    const Index total = std::accumulate(sizes.begin(), sizes.end(), Index{0});
    Matrix points(total + extra_rows, params.dim);
    Index row = 0;
    for (int k = 0; k < clusters; ++k) {
      for (int s = 0; s < sizes[static_cast<std::size_t>(k)]; ++s, ++row) {
        for (int c = 0; c < params.dim; ++c) {
          points(row, c) = modes(k, c) + params.cluster_std * normal(rng);
        }
        ids.push_back(k);
      }
    }
    return points;
  };

  std::vector<int> source_ids;
  std::vector<int> target_ids;
  Matrix source = sample(source_modes, params.source_sizes, source_ids, 0);
  Matrix target = sample(target_modes, params.target_sizes, target_ids, params.outliers);

  // Outlier j sits radially beyond target mode (j mod K); repeated visits to
  // the same mode are fanned out by pi/8.
  Index row = target.rows() - params.outliers;
  for (int j = 0; j < params.outliers; ++j, ++row) {
    const int k = j % clusters;
    double angle = (clusters == 1) ? params.rotation
                                   : std::atan2(target_modes(k, 1), target_modes(k, 0));
    angle += (j / clusters) * std::numbers::pi / 8.0;
    target.row(row) = target_modes.row(k);
    const double reach = params.outlier_magnitude * params.cluster_std;
    target(row, 0) += reach * std::cos(angle);
    target(row, 1) += reach * std::sin(angle);
    target_ids.push_back(-1);
  }

  return SyntheticPair{PointSet(std::move(source)), PointSet(std::move(target)),
                       std::move(source_ids), std::move(target_ids), source_modes,
                       target_modes};
}

std::pair<std::vector<Index>, std::vector<Index>> holdout_split(Index n, double fraction,
                                                                std::uint64_t seed) {
  if (!(fraction >= 0.0 && fraction < 1.0)) {
    throw ValidationError("hold-out fraction must be in [0, 1)");
  }
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  Index held = static_cast<Index>(std::llround(fraction * static_cast<double>(n)));
  if (fraction > 0.0 && n >= 2) held = std::max<Index>(held, 1);
  held = std::min(held, n - 1);
  if (held <= 0) return {order, {}};

  // Fisher-Yates driven by raw engine output, so the split does not depend on
  // the standard library's distribution implementations.
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  for (Index i = n - 1; i > 0; --i) {
    const auto j = static_cast<Index>(rng() % static_cast<std::uint64_t>(i + 1));
    std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
  }
  std::vector<Index> held_out(order.begin(), order.begin() + held);
  std::vector<Index> kept(order.begin() + held, order.end());
  std::sort(held_out.begin(), held_out.end());
  std::sort(kept.begin(), kept.end());
  return {std::move(kept), std::move(held_out)};
}

}  // namespace infoot
