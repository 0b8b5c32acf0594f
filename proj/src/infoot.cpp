#include "infoot/infoot.hpp"

#include <chrono>
#include <cmath>

#include "infoot/error.hpp"

namespace infoot {

namespace {

constexpr double kDensityFloor = 1e-300;

Matrix clamped_joint(const KdeModel& model, const Matrix& plan) {
  return joint_density(model, plan).cwiseMax(kDensityFloor);
}

}  // namespace

void SolverConfig::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ValidationError("lambda must be >= 0");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw ValidationError("epsilon must be > 0");
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
    throw ValidationError("bandwidth must be > 0");
  }
  if (outer_iters < 1) throw ValidationError("outer_iters must be >= 1");
  if (!(tol > 0.0)) throw ValidationError("outer tolerance must be > 0");
  if (sinkhorn_max_iter < 1) throw ValidationError("sinkhorn_max_iter must be >= 1");
  if (!(sinkhorn_tol > 0.0)) throw ValidationError("sinkhorn_tol must be > 0");
}

double mutual_information(const KdeModel& model, const Matrix& plan) {
  const Matrix joint = clamped_joint(model, plan);
  const double log_nm = std::log(static_cast<double>(plan.rows()) *
                                 static_cast<double>(plan.cols()));
  double acc = 0.0;
  for (Index j = 0; j < plan.cols(); ++j) {
    for (Index i = 0; i < plan.rows(); ++i) {
      const double g = plan(i, j);
      if (g == 0.0) continue;
      acc += g * (log_nm + std::log(joint(i, j)) - std::log(model.marginal_x(i)) -
                  std::log(model.marginal_y(j)));
    }
  }
  return acc;
}

Matrix mi_gradient(const KdeModel& model, const Matrix& plan) {
  const Matrix joint = clamped_joint(model, plan);
  const Vector log_mx = model.marginal_x.array().log().matrix();
  const Vector log_my = model.marginal_y.array().log().matrix();

  Matrix ratio = plan.cwiseQuotient(joint);
  Matrix grad = model.gram_x.values() * ratio * model.gram_y.values();
  for (Index j = 0; j < grad.cols(); ++j) {
    for (Index i = 0; i < grad.rows(); ++i) {
      grad(i, j) += std::log(joint(i, j)) - log_mx(i) - log_my(j);
    }
  }
  return grad;
}

AlignmentResult solve_fused_infoot(const Matrix& cost, const KdeModel& model, const Vector& p,
                                   const Vector& q, const SolverConfig& config) {
  config.validate();
  validate_marginal(p, "row");
  validate_marginal(q, "column");
  if (cost.rows() != p.size() || cost.cols() != q.size() || model.source_size() != p.size() ||
      model.target_size() != q.size()) {
    throw ValidationError("cost, KDE model and marginals have inconsistent shapes");
  }
  if (!cost.allFinite()) throw ValidationError("cost entries must be finite");

  const auto start = std::chrono::steady_clock::now();
  const SinkhornOptions inner = config.sinkhorn_options();

  AlignmentResult result{CouplingMatrix::product(p, q), {}, {}, {}, {}, false, 0, 0.0};
  Matrix plan = result.coupling.values();
  DualPotentials potentials;
  bool have_potentials = false;

  for (int t = 0; t < config.outer_iters; ++t) {
    Matrix linearized = cost;
    if (config.lambda != 0.0) linearized -= config.lambda * mi_gradient(model, plan);
    SinkhornResult step =
        sinkhorn(linearized, p, q, inner, have_potentials ? &potentials : nullptr);
    if (!step.report.converged) ++result.sinkhorn_failures;
    potentials = std::move(step.report.potentials);
    have_potentials = true;

    const Matrix& next = step.coupling.values();
    const double change = (next - plan).lpNorm<1>();
    const double info = mutual_information(model, next);
    result.mi_trace.push_back(info);
    result.change_trace.push_back(change);
    const double objective = transport_cost(next, cost) - config.lambda * info;
    result.objective_trace.push_back(objective);
    result.entropic_objective_trace.push_back(objective - config.epsilon * entropy(next));
    plan = next;
    result.coupling = std::move(step.coupling);
    if (change < config.tol) {
      result.converged = true;
      break;
    }
  }

  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

AlignmentResult solve_fused_infoot(const Matrix& cost, const DistanceMatrix& dx,
                                   const DistanceMatrix& dy, const Vector& p, const Vector& q,
                                   const SolverConfig& config) {
  config.validate();
  return solve_fused_infoot(cost, build_kde_model(dx, dy, config.bandwidth), p, q, config);
}

AlignmentResult solve_infoot(const KdeModel& model, const Vector& p, const Vector& q,
                             const SolverConfig& config) {
  SolverConfig plain = config;
  plain.lambda = 1.0;
  return solve_fused_infoot(Matrix::Zero(p.size(), q.size()), model, p, q, plain);
}

AlignmentResult solve_infoot(const DistanceMatrix& dx, const DistanceMatrix& dy, const Vector& p,
                             const Vector& q, const SolverConfig& config) {
  config.validate();
  return solve_infoot(build_kde_model(dx, dy, config.bandwidth), p, q, config);
}

std::pair<double, double> limit_check(const DistanceMatrix& dx, const DistanceMatrix& dy,
                                      const Matrix& plan, double bandwidth) {
  for (const DistanceMatrix* d : {&dx, &dy}) {
    if (!d->is_intra()) throw ValidationError("limit check needs intra-domain matrices");
    const Matrix& v = d->values();
    for (Index i = 0; i < v.rows(); ++i) {
      for (Index j = i + 1; j < v.cols(); ++j) {
        if (v(i, j) == 0.0) {
          throw ValidationError("limit check requires pairwise distinct points");
        }
      }
    }
  }
  const KdeModel model = build_kde_model(dx, dy, bandwidth);
  const double lhs = mutual_information(model, plan);
  const double rhs = -entropy(plan) + std::log(static_cast<double>(plan.rows()) *
                                               static_cast<double>(plan.cols()));
  return {lhs, rhs};
}

}  // namespace infoot
