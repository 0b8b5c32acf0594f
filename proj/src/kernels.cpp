#include "infoot/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "infoot/error.hpp"
#include "infoot/parallel.hpp"

namespace infoot {

namespace {

constexpr double kWeightSumTol = 1e-12;
constexpr double kSymmetryTol = 1e-12;

}  // namespace

PointSet::PointSet(Matrix points, std::optional<std::vector<int>> labels,
                   std::optional<Vector> weights)
    : points_(std::move(points)), labels_(std::move(labels)) {
  if (points_.rows() < 1 || points_.cols() < 1) {
    throw ValidationError("point set needs at least one sample and one feature");
  }
  if (!points_.allFinite()) throw ValidationError("point coordinates must be finite");
  if (labels_ && static_cast<Index>(labels_->size()) != points_.rows()) {
    throw ValidationError("label count does not match sample count");
  }
  if (weights) {
    if (weights->size() != points_.rows()) {
      throw ValidationError("weight count does not match sample count");
    }
    if ((weights->array() < 0.0).any() || !weights->allFinite()) {
      throw ValidationError("sample weights must be finite and nonnegative");
    }
    if (std::abs(weights->sum() - 1.0) > kWeightSumTol) {
      throw ValidationError("sample weights must sum to 1");
    }
    weights_ = std::move(*weights);
  } else {
    weights_ = Vector::Constant(points_.rows(), 1.0 / static_cast<double>(points_.rows()));
  }
}

const std::vector<int>& PointSet::labels() const {
  if (!labels_) throw ValidationError("point set has no labels");
  return *labels_;
}

PointSet PointSet::subset(std::span<const Index> indices) const {
  Matrix rows(static_cast<Index>(indices.size()), dim());
  std::optional<std::vector<int>> picked;
  if (labels_) picked.emplace();
  for (std::size_t r = 0; r < indices.size(); ++r) {
    const Index i = indices[r];
    if (i < 0 || i >= size()) throw ValidationError("subset index out of range");
    rows.row(static_cast<Index>(r)) = points_.row(i);
    if (picked) picked->push_back((*labels_)[static_cast<std::size_t>(i)]);
  }
  return PointSet(std::move(rows), std::move(picked));
}

PointSet PointSet::without_labels() const { return PointSet(points_, std::nullopt, weights_); }

DistanceMatrix::DistanceMatrix(Matrix values, DistanceKind kind)
    : values_(std::move(values)), kind_(kind) {
  if (values_.rows() < 1 || values_.cols() < 1) throw ValidationError("empty distance matrix");
  if (!values_.allFinite()) throw ValidationError("distance entries must be finite");
  if ((values_.array() < 0.0).any()) throw ValidationError("distance entries must be nonnegative");
  if (is_intra()) {
    if (values_.rows() != values_.cols()) {
      throw ValidationError("intra-domain distance matrix must be square");
    }
    for (Index i = 0; i < values_.rows(); ++i) {
      if (values_(i, i) != 0.0) {
        throw ValidationError("intra-domain distance matrix must have a zero diagonal");
      }
      for (Index j = i + 1; j < values_.cols(); ++j) {
        if (std::abs(values_(i, j) - values_(j, i)) > kSymmetryTol) {
          throw ValidationError("intra-domain distance matrix must be symmetric");
        }
      }
    }
  }
}

DistanceMatrix pairwise_distances(const Matrix& a, const Matrix& b, DistanceKind kind) {
  if (a.cols() != b.cols()) {
    std::ostringstream msg;
    msg << "dimension mismatch: " << a.cols() << " vs " << b.cols() << " features";
    throw ValidationError(msg.str());
  }
  Matrix values(a.rows(), b.rows());
  parallel_for(static_cast<std::size_t>(a.rows()), [&](std::size_t r) {
    const auto i = static_cast<Index>(r);
    for (Index j = 0; j < b.rows(); ++j) {
      double sq = 0.0;
      for (Index k = 0; k < a.cols(); ++k) {
        const double diff = a(i, k) - b(j, k);
        sq += diff * diff;
      }
      values(i, j) = std::sqrt(sq);
    }
  });
  return DistanceMatrix(std::move(values), kind);
}

DistanceMatrix pairwise_distances(const PointSet& a, const PointSet& b, DistanceKind kind) {
  return pairwise_distances(a.points(), b.points(), kind);
}

double estimate_scale(const DistanceMatrix& d) {
  if (!d.is_intra()) throw ValidationError("scale estimation needs an intra-domain matrix");
  std::vector<double> positive;
  const Matrix& v = d.values();
  for (Index i = 0; i < v.rows(); ++i) {
    for (Index j = i + 1; j < v.cols(); ++j) {
      if (v(i, j) > 0.0) positive.push_back(v(i, j));
    }
  }
  if (positive.empty()) {
    throw DegenerateDomainError("all points in the domain coincide; kernel scale is undefined");
  }
  const std::size_t mid = positive.size() / 2;
  std::nth_element(positive.begin(), positive.begin() + static_cast<std::ptrdiff_t>(mid),
                   positive.end());
  const double upper = positive[mid];
  if (positive.size() % 2 == 1) return upper;
  const double lower = *std::max_element(positive.begin(),
                                         positive.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

KernelGram::KernelGram(Matrix values, double bandwidth, double scale)
    : values_(std::move(values)), bandwidth_(bandwidth), scale_(scale) {}

Matrix gaussian_kernel_matrix(const Matrix& distances, double bandwidth, double scale) {
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
    throw ValidationError("kernel bandwidth must be positive");
  }
  if (!(scale > 0.0) || !std::isfinite(scale)) throw ValidationError("kernel scale must be positive");
  Matrix values(distances.rows(), distances.cols());
  parallel_for(static_cast<std::size_t>(distances.rows()), [&](std::size_t r) {
    const auto i = static_cast<Index>(r);
    for (Index j = 0; j < distances.cols(); ++j) {
      values(i, j) = gaussian_kernel(distances(i, j), bandwidth, scale);
    }
  });
  return values;
}

KernelGram gaussian_gram(const DistanceMatrix& d, double bandwidth, double scale) {
  if (!d.is_intra()) throw ValidationError("Gram matrices need an intra-domain matrix");
  return KernelGram(gaussian_kernel_matrix(d.values(), bandwidth, scale), bandwidth, scale);
}

double resolve_scale(const DistanceMatrix& d, std::optional<double> override_scale) {
  if (override_scale) return *override_scale;
  if (d.rows() == 1) return 1.0;
  return estimate_scale(d);
}

namespace {

// Left-to-right row sums, fixed order.
Vector row_sums(const Matrix& m) {
  Vector sums(m.rows());
  for (Index i = 0; i < m.rows(); ++i) {
    double acc = 0.0;
    for (Index j = 0; j < m.cols(); ++j) acc += m(i, j);
    sums(i) = acc;
  }
  return sums;
}

}  // namespace

KdeModel build_kde_model(const DistanceMatrix& dx, const DistanceMatrix& dy, double bandwidth,
                         const KernelScales& scales) {
  if (!dx.is_intra() || !dy.is_intra()) {
    throw ValidationError("KDE model needs intra-domain distance matrices");
  }
  KernelGram gx = gaussian_gram(dx, bandwidth, resolve_scale(dx, scales.source));
  KernelGram gy = gaussian_gram(dy, bandwidth, resolve_scale(dy, scales.target));
  Vector mx = row_sums(gx.values());
  Vector my = row_sums(gy.values());
  return KdeModel{std::move(gx), std::move(gy), std::move(mx), std::move(my)};
}

Matrix joint_density(const KdeModel& model, const Matrix& plan) {
  if (plan.rows() != model.source_size() || plan.cols() != model.target_size()) {
    std::ostringstream msg;
    msg << "plan shape " << plan.rows() << "x" << plan.cols() << " does not match KDE model "
        << model.source_size() << "x" << model.target_size();
    throw ValidationError(msg.str());
  }
  // Both Gram matrices are symmetric, so K_Y^T == K_Y.
  Matrix left = model.gram_x.values() * plan;
  return left * model.gram_y.values();
}

}  // namespace infoot
