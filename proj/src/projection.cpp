#include "infoot/projection.hpp"

#include <cmath>
#include <numeric>

#include "infoot/error.hpp"
#include "infoot/parallel.hpp"

namespace infoot {

Index query_count(const Queries& queries) {
  return std::visit(
      [](const auto& q) -> Index {
        using T = std::decay_t<decltype(q)>;
        if constexpr (std::is_same_v<T, InSampleQueries>) {
          return static_cast<Index>(q.indices.size());
        } else if constexpr (std::is_same_v<T, OutOfSampleQueries>) {
          return q.coordinates.rows();
        } else {
          return q.distances.rows();
        }
      },
      queries);
}

Matrix barycentric_project(const CouplingMatrix& plan, const Matrix& targets) {
  if (targets.rows() != plan.cols()) {
    throw ValidationError("target count does not match the coupling columns");
  }
  const Vector mass = plan.values().rowwise().sum();
  if ((mass.array() <= 0.0).any()) {
    throw ValidationError("coupling has a zero-mass row; barycentric projection is undefined");
  }
  Matrix projected = plan.values() * targets;
  projected.array().colwise() /= mass.array();
  return projected;
}

ConditionalMap::ConditionalMap(KdeModel model, CouplingMatrix plan, Matrix targets,
                               std::optional<Matrix> source_points)
    : model_(std::move(model)),
      plan_(std::move(plan)),
      targets_(std::move(targets)),
      source_points_(std::move(source_points)) {
  if (plan_.rows() != model_.source_size() || plan_.cols() != model_.target_size()) {
    throw ValidationError("coupling shape does not match the KDE model");
  }
  if (targets_.rows() != plan_.cols()) {
    throw ValidationError("target count does not match the coupling columns");
  }
  if (source_points_ && source_points_->rows() != plan_.rows()) {
    throw ValidationError("source point count does not match the coupling rows");
  }
  plan_times_gram_y_ = plan_.values() * model_.gram_y.values();
}

void ConditionalMap::weights_from_log_kernel(const Vector& log_kernel,
                                             Eigen::Ref<Vector> out) const {
  const double peak = log_kernel.maxCoeff();
  // Left-to-right sum, matching the marginal densities of the model, so a
  // query that duplicates a training point reproduces its in-sample row.
  Vector kernel(log_kernel.size());
  double source_density = 0.0;
  for (Index k = 0; k < log_kernel.size(); ++k) {
    kernel(k) = std::exp(log_kernel(k) - peak);
    source_density += kernel(k);
  }
  const Vector joint = plan_times_gram_y_.transpose() * kernel;
  out = joint.cwiseQuotient(model_.marginal_y) / source_density;
}

ScoreMatrix ConditionalMap::importance_weights(const Queries& queries, bool normalize) const {
  const Index n = plan_.rows();
  const Index count = query_count(queries);
  Matrix weights(count, plan_.cols());
  const double width = model_.gram_x.bandwidth() * model_.gram_x.scale();

  auto log_kernel_of_distances = [&](auto&& distance_row) {
    Vector log_k(n);
    for (Index k = 0; k < n; ++k) {
      const double d = distance_row(k);
      log_k(k) = -(d * d) / (2.0 * width * width);  // same expression as gaussian_kernel
    }
    return log_k;
  };

  if (const auto* in = std::get_if<InSampleQueries>(&queries)) {
    const Matrix& gram = model_.gram_x.values();
    for (const Index i : in->indices) {
      if (i < 0 || i >= n) throw ValidationError("in-sample query index out of range");
    }
    // Gram rows peak at 1 on the diagonal, so no shift is needed.
    parallel_for(in->indices.size(), [&](std::size_t r) {
      const Index i = in->indices[r];
      const Vector kernel = gram.row(i).transpose();
      const Vector joint = plan_times_gram_y_.transpose() * kernel;
      weights.row(static_cast<Index>(r)) =
          (joint.cwiseQuotient(model_.marginal_y) / model_.marginal_x(i)).transpose();
    });
  } else if (const auto* out = std::get_if<OutOfSampleQueries>(&queries)) {
    if (!source_points_) {
      throw ValidationError(
          "out-of-sample queries need source coordinates; this domain is known only through "
          "distances, so pass the query-to-training distances instead");
    }
    const Matrix& train = *source_points_;
    if (out->coordinates.cols() != train.cols()) {
      throw ValidationError("query dimension does not match the source points");
    }
    if (!out->coordinates.allFinite()) throw ValidationError("query coordinates must be finite");
    parallel_for(static_cast<std::size_t>(count), [&](std::size_t r) {
      const auto q = static_cast<Index>(r);
      // Same accumulation order as pairwise_distances.
      const Vector log_k = log_kernel_of_distances([&](Index k) {
        double sq = 0.0;
        for (Index c = 0; c < train.cols(); ++c) {
          const double diff = out->coordinates(q, c) - train(k, c);
          sq += diff * diff;
        }
        return std::sqrt(sq);
      });
      Vector row(plan_.cols());
      weights_from_log_kernel(log_k, row);
      weights.row(q) = row.transpose();
    });
  } else {
    const Matrix& d = std::get<QueryDistances>(queries).distances;
    if (d.cols() != n) throw ValidationError("query distance rows must cover every training source");
    if (!d.allFinite() || (d.array() < 0.0).any()) {
      throw ValidationError("query distances must be finite and nonnegative");
    }
    parallel_for(static_cast<std::size_t>(count), [&](std::size_t r) {
      const auto q = static_cast<Index>(r);
      const Vector log_k = log_kernel_of_distances([&](Index k) { return d(q, k); });
      Vector row(plan_.cols());
      weights_from_log_kernel(log_k, row);
      weights.row(q) = row.transpose();
    });
  }

  if (normalize) {
    for (Index q = 0; q < count; ++q) weights.row(q) /= weights.row(q).sum();
  }
  return ScoreMatrix{std::move(weights), normalize};
}

Matrix ConditionalMap::project(const Queries& queries) const {
  return importance_weights(queries, true).values * targets_;
}

ScoreMatrix importance_weights(const KdeModel& model, const CouplingMatrix& plan,
                               const Queries& queries, const Matrix& targets,
                               const std::optional<Matrix>& source_points, bool normalize) {
  return ConditionalMap(model, plan, targets, source_points).importance_weights(queries, normalize);
}

Matrix conditional_project(const KdeModel& model, const CouplingMatrix& plan,
                           const Queries& queries, const Matrix& targets,
                           const std::optional<Matrix>& source_points) {
  return ConditionalMap(model, plan, targets, source_points).project(queries);
}

KdeModel rebandwidth(const KdeModel& fitted, const DistanceMatrix& dx, const DistanceMatrix& dy,
                     double bandwidth) {
  return build_kde_model(dx, dy, bandwidth,
                         KernelScales{fitted.gram_x.scale(), fitted.gram_y.scale()});
}

void ProjectionRequest::validate() const {
  if (bandwidth && !(*bandwidth > 0.0)) throw ValidationError("projection bandwidth must be > 0");
  if (mode == ProjectionMode::Barycentric && !std::holds_alternative<InSampleQueries>(queries)) {
    throw ValidationError(
        "barycentric projection is defined only for training points; use conditional mode for "
        "new queries");
  }
}

Matrix project(const ProjectionRequest& request, const KdeModel& fitted, const DistanceMatrix& dx,
               const DistanceMatrix& dy, const CouplingMatrix& plan, const Matrix& targets,
               const std::optional<Matrix>& source_points) {
  request.validate();
  Queries queries = request.queries;
  if (auto* in = std::get_if<InSampleQueries>(&queries); in != nullptr && in->indices.empty()) {
    in->indices.resize(static_cast<std::size_t>(plan.rows()));
    std::iota(in->indices.begin(), in->indices.end(), Index{0});
  }

  if (request.mode == ProjectionMode::Barycentric) {
    const Matrix all = barycentric_project(plan, targets);
    const auto& indices = std::get<InSampleQueries>(queries).indices;
    Matrix picked(static_cast<Index>(indices.size()), all.cols());
    for (std::size_t r = 0; r < indices.size(); ++r) {
      if (indices[r] < 0 || indices[r] >= all.rows()) {
        throw ValidationError("in-sample query index out of range");
      }
      picked.row(static_cast<Index>(r)) = all.row(indices[r]);
    }
    return picked;
  }

  const double h = request.bandwidth.value_or(fitted.bandwidth());
  KdeModel model = h == fitted.bandwidth() ? fitted : rebandwidth(fitted, dx, dy, h);
  return ConditionalMap(std::move(model), plan, targets, source_points).project(queries);
}

}  // namespace infoot
