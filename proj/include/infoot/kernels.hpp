#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <optional>
#include <span>
#include <vector>

namespace infoot {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Samples of one domain: an n x d coordinate matrix, optional integer class
/// labels, and a probability vector of per-sample masses (uniform by default).
class PointSet {
 public:
  explicit PointSet(Matrix points, std::optional<std::vector<int>> labels = std::nullopt,
                    std::optional<Vector> weights = std::nullopt);

  const Matrix& points() const { return points_; }
  const Vector& weights() const { return weights_; }
  Index size() const { return points_.rows(); }
  Index dim() const { return points_.cols(); }

  bool has_labels() const { return labels_.has_value(); }
  /// Throws ValidationError when the set is unlabeled.
  const std::vector<int>& labels() const;

  /// Rows `indices` in the given order, with uniform weights.
  PointSet subset(std::span<const Index> indices) const;
  PointSet without_labels() const;

 private:
  Matrix points_;
  std::optional<std::vector<int>> labels_;
  Vector weights_;
};

enum class DistanceKind { IntraSource, IntraTarget, Cross };

/// Nonnegative distance matrix tagged with the pair of domains it relates.
/// Intra-domain matrices are square, symmetric and zero on the diagonal.
class DistanceMatrix {
 public:
  /// Validates and wraps user-supplied distances (the "precomputed" metric).
  DistanceMatrix(Matrix values, DistanceKind kind);

  const Matrix& values() const { return values_; }
  DistanceKind kind() const { return kind_; }
  Index rows() const { return values_.rows(); }
  Index cols() const { return values_.cols(); }
  bool is_intra() const { return kind_ != DistanceKind::Cross; }

 private:
  Matrix values_;
  DistanceKind kind_;
};

/// Euclidean distances between the rows of a and b.
DistanceMatrix pairwise_distances(const PointSet& a, const PointSet& b, DistanceKind kind);
DistanceMatrix pairwise_distances(const Matrix& a, const Matrix& b, DistanceKind kind);

/// Median of the strictly positive upper-triangular entries of an intra-domain
/// matrix. Throws DegenerateDomainError when every entry is zero.
double estimate_scale(const DistanceMatrix& d);

/// Unnormalized Gaussian kernel exp(-d^2 / (2 h^2 sigma^2)).
inline double gaussian_kernel(double distance, double bandwidth, double scale) {
  const double width = bandwidth * scale;
  return std::exp(-(distance * distance) / (2.0 * width * width));
}

/// Gram matrix of an intra-domain distance matrix, with the bandwidth and
/// scale it was built from.
class KernelGram {
 public:
  KernelGram(Matrix values, double bandwidth, double scale);

  const Matrix& values() const { return values_; }
  double bandwidth() const { return bandwidth_; }
  double scale() const { return scale_; }
  Index size() const { return values_.rows(); }

 private:
  Matrix values_;
  double bandwidth_;
  double scale_;
};

/// Entrywise Gaussian kernel of an arbitrary (possibly rectangular) distance
/// matrix. Rows are evaluated in parallel; each entry is independent.
Matrix gaussian_kernel_matrix(const Matrix& distances, double bandwidth, double scale);

/// Throws ValidationError unless h > 0, sigma > 0 and d is intra-domain.
KernelGram gaussian_gram(const DistanceMatrix& d, double bandwidth, double scale);

/// Per-domain kernel scales. Unset entries fall back to estimate_scale.
struct KernelScales {
  std::optional<double> source;
  std::optional<double> target;
};

/// Gram matrices of both domains plus their unnormalized marginal densities
/// (row sums of the Gram matrices).
struct KdeModel {
  KernelGram gram_x;
  KernelGram gram_y;
  Vector marginal_x;
  Vector marginal_y;

  Index source_size() const { return gram_x.size(); }
  Index target_size() const { return gram_y.size(); }
  double bandwidth() const { return gram_x.bandwidth(); }
};

/// Scale used for one domain: explicit override, else the median heuristic.
/// A single-point domain has no pairwise distance, so its scale is 1 (the
/// Gram matrix is [[1]] for any scale).
double resolve_scale(const DistanceMatrix& d, std::optional<double> override_scale);

KdeModel build_kde_model(const DistanceMatrix& dx, const DistanceMatrix& dy, double bandwidth,
                         const KernelScales& scales = {});

/// Kernel-smoothed joint density K_X * plan * K_Y^T (n x m). The plan is
/// passed as a dense matrix so that the same routine serves couplings and
/// perturbed iterates.
Matrix joint_density(const KdeModel& model, const Matrix& plan);

}  // namespace infoot
