#pragma once

#include <optional>
#include <vector>

#include "infoot/kernels.hpp"

namespace infoot {

/// Throws ValidationError unless `marginal` is finite, strictly positive and
/// sums to 1 within 1e-12. Zero-mass entries are rejected.
void validate_marginal(const Vector& marginal, const char* name);

/// Transport plan with its prescribed row and column marginals. Construction
/// checks shape, finiteness and nonnegativity only; marginal feasibility is a
/// separate query because unconverged solver output is still a valid object.
class CouplingMatrix {
 public:
  static constexpr double kFeasibilityTol = 1e-8;
  static constexpr double kMassTol = 1e-10;

  CouplingMatrix(Matrix values, Vector row_marginal, Vector col_marginal);

  /// Independent plan p q^T.
  static CouplingMatrix product(const Vector& row_marginal, const Vector& col_marginal);

  const Matrix& values() const { return values_; }
  const Vector& row_marginal() const { return row_marginal_; }
  const Vector& col_marginal() const { return col_marginal_; }
  Index rows() const { return values_.rows(); }
  Index cols() const { return values_.cols(); }

  /// L1 distance of both marginals from their targets.
  double marginal_violation() const;
  /// Every row/column sum within `tol` of its target and total mass 1 within 1e-10.
  bool is_feasible(double tol = kFeasibilityTol) const;
  void check_feasible(double tol = kFeasibilityTol) const;

 private:
  Matrix values_;
  Vector row_marginal_;
  Vector col_marginal_;
};

struct SinkhornOptions {
  double epsilon = 1.0;
  int max_iter = 1000;
  double tol = 1e-9;
  /// Divide the cost by its largest absolute entry before solving.
  bool normalize_cost = false;
};

/// Dual potentials (f, g) of the log-domain iteration; the plan is
/// exp((f_i + g_j - C_ij) / epsilon).
struct DualPotentials {
  Vector f;
  Vector g;
};

struct SinkhornReport {
  int iterations = 0;
  double violation = 0.0;
  bool converged = false;
  DualPotentials potentials;
};

struct SinkhornResult {
  CouplingMatrix coupling;
  SinkhornReport report;
};

/// Entropic OT: argmin <G, C> - epsilon * H(G) over couplings of (p, q), by
/// alternating log-sum-exp updates of the dual potentials. Stops when the L1
/// marginal violation drops to `tol` or after `max_iter` sweeps; hitting the
/// limit is reported through `converged`, not thrown. `warm_start` seeds the
/// potentials (the fixed point does not depend on it).
SinkhornResult sinkhorn(const Matrix& cost, const Vector& p, const Vector& q,
                        const SinkhornOptions& options = {},
                        const DualPotentials* warm_start = nullptr);

/// -sum G_ij log G_ij with 0 log 0 = 0.
double entropy(const Matrix& plan);
inline double entropy(const CouplingMatrix& plan) { return entropy(plan.values()); }

/// Frobenius inner product <G, C>.
double transport_cost(const Matrix& plan, const Matrix& cost);

struct Assignment {
  /// permutation[i] is the column assigned to row i.
  std::vector<Index> permutation;
  /// Mean of the selected entries (uniform weights 1/n), summed in row order.
  double value = 0.0;
};

/// Minimum-cost perfect matching on a square matrix via the O(n^3) Hungarian
/// method with row/column potentials. Limited to n <= 64.
Assignment exact_assignment(const Matrix& cost);

}  // namespace infoot
