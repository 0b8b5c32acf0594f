#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "infoot/kernels.hpp"
#include "infoot/sinkhorn.hpp"

namespace infoot {

/// Hyperparameters of the InfoOT / fused InfoOT solvers.
struct SolverConfig {
  double lambda = 100.0;    ///< weight of the mutual-information term
  double epsilon = 1.0;     ///< entropic strength of every inner Sinkhorn step
  double bandwidth = 0.5;   ///< KDE bandwidth h (relative to the per-domain scale)
  int outer_iters = 50;
  double tol = 1e-6;        ///< stop once ||G_{t+1} - G_t||_1 < tol
  int sinkhorn_max_iter = 1000;
  double sinkhorn_tol = 1e-9;
  bool normalize_cost = false;
  std::uint64_t seed = 0;   ///< echoed in reports; the solver itself is deterministic

  SinkhornOptions sinkhorn_options() const {
    return SinkhornOptions{epsilon, sinkhorn_max_iter, sinkhorn_tol, normalize_cost};
  }
  /// Throws ValidationError on out-of-range fields.
  void validate() const;
};

struct AlignmentResult {
  CouplingMatrix coupling;
  /// <G_t, C> - lambda * I(G_t) after each outer iteration.
  std::vector<double> objective_trace;
  /// I(G_t) after each outer iteration (log(nm) constant included).
  std::vector<double> mi_trace;
  /// <G_t, C> - lambda * I(G_t) - epsilon * H(G_t): the entropy-augmented
  /// objective each Sinkhorn step majorizes, nonincreasing when I is convex.
  std::vector<double> entropic_objective_trace;
  /// ||G_t - G_{t-1}||_1 after each outer iteration.
  std::vector<double> change_trace;
  /// Outer stopping rule met before the iteration limit.
  bool converged = false;
  /// Inner Sinkhorn solves that hit their iteration limit.
  int sinkhorn_failures = 0;
  double wall_seconds = 0.0;

  int iterations() const { return static_cast<int>(mi_trace.size()); }
  bool fully_converged() const { return converged && sinkhorn_failures == 0; }
};

/// Kernelized mutual information
///   sum_ij G_ij log( nm (K_X G K_Y)_ij / (M_X[i] M_Y[j]) ),  0 log 0 = 0.
double mutual_information(const KdeModel& model, const Matrix& plan);
inline double mutual_information(const KdeModel& model, const CouplingMatrix& plan) {
  return mutual_information(model, plan.values());
}

/// Gradient of mutual_information with respect to the plan, in matrix form
///   log(J ./ M_X M_Y^T) + K_X (G ./ J) K_Y,   J = K_X G K_Y,
/// without the constant log(nm); a constant shift of the Sinkhorn cost leaves
/// its minimizer unchanged. J is clamped below at 1e-300 before dividing.
/// Two products per term, O(n^2 m + n m^2).
Matrix mi_gradient(const KdeModel& model, const Matrix& plan);
inline Matrix mi_gradient(const KdeModel& model, const CouplingMatrix& plan) {
  return mi_gradient(model, plan.values());
}

/// Fused InfoOT: minimize <G, C> - lambda * I(G) over couplings of (p, q) by
/// repeatedly solving Sinkhorn with the linearized cost C - lambda * grad I(G_t),
/// starting from G_0 = p q^T.
AlignmentResult solve_fused_infoot(const Matrix& cost, const KdeModel& model, const Vector& p,
                                   const Vector& q, const SolverConfig& config);
AlignmentResult solve_fused_infoot(const Matrix& cost, const DistanceMatrix& dx,
                                   const DistanceMatrix& dy, const Vector& p, const Vector& q,
                                   const SolverConfig& config);

/// Plain InfoOT: maximize I(G) using intra-domain geometry only. Runs the
/// fused solver with C = 0 and lambda = 1 (config.lambda is ignored).
AlignmentResult solve_infoot(const KdeModel& model, const Vector& p, const Vector& q,
                             const SolverConfig& config);
AlignmentResult solve_infoot(const DistanceMatrix& dx, const DistanceMatrix& dy, const Vector& p,
                             const Vector& q, const SolverConfig& config);

/// Both sides of the small-bandwidth limit I(G) -> -H(G) + log(nm):
/// first = I(G) at bandwidth h, second = -H(G) + log(nm). Requires pairwise
/// distinct points in each domain.
std::pair<double, double> limit_check(const DistanceMatrix& dx, const DistanceMatrix& dy,
                                      const Matrix& plan, double bandwidth);

}  // namespace infoot
