#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "infoot/kernels.hpp"
#include "infoot/sinkhorn.hpp"

namespace infoot {

enum class ProjectionMode { Barycentric, Conditional };

/// Queries given as indices of training source points.
struct InSampleQueries {
  std::vector<Index> indices;
};
/// New source points in the training coordinate system (euclidean domains only).
struct OutOfSampleQueries {
  Matrix coordinates;
};
/// New source points given by their distances to every training source point
/// (one row per query), for domains known only through a distance matrix.
struct QueryDistances {
  Matrix distances;
};
using Queries = std::variant<InSampleQueries, OutOfSampleQueries, QueryDistances>;

Index query_count(const Queries& queries);

/// Importance weights f_G(x, y_j) / (f_X(x) f_Y(y_j)), one row per query.
struct ScoreMatrix {
  Matrix values;
  bool normalized = false;
};

/// Gamma-weighted average of the targets for every source row:
/// row i = sum_j G_ij y_j / sum_j G_ij.
Matrix barycentric_project(const CouplingMatrix& plan, const Matrix& targets);

/// Scores and projects queries through the KDE joint density of a fitted
/// coupling. The model's bandwidth is the projection bandwidth; its kernel
/// scales are the training scales and are reused for query kernels.
class ConditionalMap {
 public:
  ConditionalMap(KdeModel model, CouplingMatrix plan, Matrix targets,
                 std::optional<Matrix> source_points = std::nullopt);

  /// Rows are strictly positive for moderate bandwidths; with `normalize`
  /// each row sums to 1.
  ScoreMatrix importance_weights(const Queries& queries, bool normalize = true) const;
  /// Sum_j w_j y_j with the normalized weights.
  Matrix project(const Queries& queries) const;

  const KdeModel& model() const { return model_; }
  const CouplingMatrix& plan() const { return plan_; }
  const Matrix& targets() const { return targets_; }

 private:
  // Weights for one query given its log-kernel values against the training
  // sources (any additive shift cancels in the ratio).
  void weights_from_log_kernel(const Vector& log_kernel, Eigen::Ref<Vector> out) const;

  KdeModel model_;
  CouplingMatrix plan_;
  Matrix targets_;
  std::optional<Matrix> source_points_;
  Matrix plan_times_gram_y_;  // G K_Y, n x m
};

/// Free-function forms of ConditionalMap.
ScoreMatrix importance_weights(const KdeModel& model, const CouplingMatrix& plan,
                               const Queries& queries, const Matrix& targets,
                               const std::optional<Matrix>& source_points = std::nullopt,
                               bool normalize = true);
Matrix conditional_project(const KdeModel& model, const CouplingMatrix& plan,
                           const Queries& queries, const Matrix& targets,
                           const std::optional<Matrix>& source_points = std::nullopt);

/// KDE model at the projection bandwidth, keeping the scales of `fitted`.
KdeModel rebandwidth(const KdeModel& fitted, const DistanceMatrix& dx, const DistanceMatrix& dy,
                     double bandwidth);

struct ProjectionRequest {
  ProjectionMode mode = ProjectionMode::Conditional;
  /// Conditional only; defaults to the solver bandwidth.
  std::optional<double> bandwidth;
  Queries queries = InSampleQueries{};

  /// Out-of-sample queries are only meaningful in conditional mode.
  void validate() const;
};

/// Runs a projection request against a fitted coupling. An empty in-sample
/// index list means "every training source point".
Matrix project(const ProjectionRequest& request, const KdeModel& fitted, const DistanceMatrix& dx,
               const DistanceMatrix& dy, const CouplingMatrix& plan, const Matrix& targets,
               const std::optional<Matrix>& source_points = std::nullopt);

}  // namespace infoot
