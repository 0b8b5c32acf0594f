#include "infoot/sinkhorn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "infoot/error.hpp"

namespace infoot {

void validate_marginal(const Vector& marginal, const char* name) {
  if (marginal.size() < 1) throw ValidationError(std::string(name) + " marginal is empty");
  if (!marginal.allFinite() || (marginal.array() <= 0.0).any()) {
    throw ValidationError(std::string(name) + " marginal entries must be finite and positive");
  }
  if (std::abs(marginal.sum() - 1.0) > 1e-12) {
    throw ValidationError(std::string(name) + " marginal must sum to 1");
  }
}

CouplingMatrix::CouplingMatrix(Matrix values, Vector row_marginal, Vector col_marginal)
    : values_(std::move(values)),
      row_marginal_(std::move(row_marginal)),
      col_marginal_(std::move(col_marginal)) {
  if (values_.rows() != row_marginal_.size() || values_.cols() != col_marginal_.size()) {
    throw ValidationError("coupling shape does not match its marginals");
  }
  if (!values_.allFinite() || (values_.array() < 0.0).any()) {
    throw ValidationError("coupling entries must be finite and nonnegative");
  }
}

CouplingMatrix CouplingMatrix::product(const Vector& row_marginal, const Vector& col_marginal) {
  return CouplingMatrix(row_marginal * col_marginal.transpose(), row_marginal, col_marginal);
}

double CouplingMatrix::marginal_violation() const {
  return (values_.rowwise().sum() - row_marginal_).lpNorm<1>() +
         (values_.colwise().sum().transpose() - col_marginal_).lpNorm<1>();
}

bool CouplingMatrix::is_feasible(double tol) const {
  const Vector rows = values_.rowwise().sum();
  const Vector cols = values_.colwise().sum().transpose();
  return (rows - row_marginal_).cwiseAbs().maxCoeff() <= tol &&
         (cols - col_marginal_).cwiseAbs().maxCoeff() <= tol &&
         std::abs(values_.sum() - 1.0) <= kMassTol;
}

void CouplingMatrix::check_feasible(double tol) const {
  if (!is_feasible(tol)) {
    std::ostringstream msg;
    msg << "coupling violates its marginals (L1 violation " << marginal_violation() << ")";
    throw ValidationError(msg.str());
  }
}

namespace {

// Alternating sweeps before Newton refinement starts.
constexpr int kWarmupSweeps = 10;
constexpr int kMaxLineSearchSteps = 40;

// One half-sweep: for each row r of `cost` (rows x cols),
//   out_r = eps * log(target_r) - eps * log sum_c exp((other_c - cost_rc) / eps).
// Also returns sum_r |target_r * exp((current_r - out_r) / eps) - target_r|,
// which is the L1 marginal error of the plan built from (current, other).
double update_potential(const Matrix& cost_rows, const Vector& log_target, const Vector& target,
                        const Vector& other, const Vector& current, double eps, Vector& out) {
  const Index rows = cost_rows.cols();  // column-major: each column holds one row's costs
  const Index cols = cost_rows.rows();
  double error = 0.0;
  for (Index r = 0; r < rows; ++r) {
    const double* c = cost_rows.col(r).data();
    double peak = -std::numeric_limits<double>::infinity();
    for (Index k = 0; k < cols; ++k) peak = std::max(peak, other(k) - c[k]);
    double acc = 0.0;
    for (Index k = 0; k < cols; ++k) acc += std::exp((other(k) - c[k] - peak) / eps);
    out(r) = eps * log_target(r) - peak - eps * std::log(acc);
    error += target(r) * std::abs(std::expm1((current(r) - out(r)) / eps));
  }
  return error;
}

Matrix plan_from_potentials(const Matrix& cost, const Vector& f, const Vector& g, double eps) {
  Matrix plan(f.size(), g.size());
  for (Index j = 0; j < plan.cols(); ++j) {
    for (Index i = 0; i < plan.rows(); ++i) {
      plan(i, j) = std::exp((f(i) + g(j) - cost(i, j)) / eps);
    }
  }
  return plan;
}

// Increase of the concave dual <f, p> + <g, q> - eps * sum exp((f_i + g_j - C_ij) / eps)
// when moving (f, g) by step * (df, dg), evaluated relative to the current plan
// so that tiny gains near the optimum are not lost to cancellation.
double dual_gain(const Matrix& plan, const Vector& p, const Vector& q, const Vector& df,
                 const Vector& dg, double step, double eps) {
  double mass_change = 0.0;
  for (Index j = 0; j < plan.cols(); ++j) {
    for (Index i = 0; i < plan.rows(); ++i) {
      mass_change += plan(i, j) * std::expm1(step * (df(i) + dg(j)) / eps);
    }
  }
  return step * (df.dot(p) + dg.dot(q)) - eps * mass_change;
}

// Newton direction for the dual. The Hessian is -(1/eps) [[diag r, G], [G^T, diag c]]
// with r, c the current row/column sums; it is singular along (1, -1), so the
// system is reduced to the smaller side via a Schur complement and lightly
// regularized. Returns false when the reduced system cannot be solved.
bool newton_direction(const Matrix& plan, const Vector& p, const Vector& q, double eps,
                      Vector& df, Vector& dg) {
  const Vector r = plan.rowwise().sum();
  const Vector c = plan.colwise().sum().transpose();
  if ((r.array() <= 0.0).any() || (c.array() <= 0.0).any()) return false;
  const Vector res_f = eps * (p - r);
  const Vector res_g = eps * (q - c);

  auto solve_reduced = [](Matrix schur, const Vector& rhs, Vector& out) {
    const double ridge = 1e-13 * std::max(schur.diagonal().maxCoeff(), 1e-300);
    schur.diagonal().array() += ridge;
    Eigen::LDLT<Matrix> ldlt(schur);
    if (ldlt.info() != Eigen::Success) return false;
    out = ldlt.solve(rhs);
    return out.allFinite();
  };

  if (q.size() <= p.size()) {
    const Matrix scaled = r.cwiseInverse().asDiagonal() * plan;  // diag(r)^-1 G
    Matrix schur = -plan.transpose() * scaled;
    schur.diagonal() += c;
    const Vector rhs = res_g - scaled.transpose() * res_f;
    if (!solve_reduced(std::move(schur), rhs, dg)) return false;
    df = r.cwiseInverse().cwiseProduct(res_f - plan * dg);
  } else {
    const Matrix scaled = plan * c.cwiseInverse().asDiagonal();  // G diag(c)^-1
    Matrix schur = -scaled * plan.transpose();
    schur.diagonal() += r;
    const Vector rhs = res_f - scaled * res_g;
    if (!solve_reduced(std::move(schur), rhs, df)) return false;
    dg = c.cwiseInverse().cwiseProduct(res_g - plan.transpose() * df);
  }
  return df.allFinite() && dg.allFinite();
}

}  // namespace

SinkhornResult sinkhorn(const Matrix& cost, const Vector& p, const Vector& q,
                        const SinkhornOptions& options, const DualPotentials* warm_start) {
  if (cost.rows() != p.size() || cost.cols() != q.size()) {
    throw ValidationError("cost shape does not match the marginals");
  }
  if (!cost.allFinite()) throw ValidationError("cost entries must be finite");
  if (!(options.epsilon > 0.0)) throw ValidationError("epsilon must be positive");
  if (!(options.tol > 0.0)) throw ValidationError("Sinkhorn tolerance must be positive");
  if (options.max_iter < 1) throw ValidationError("Sinkhorn max_iter must be at least 1");
  validate_marginal(p, "row");
  validate_marginal(q, "column");

  Matrix scaled = cost;
  if (options.normalize_cost) {
    const double peak = cost.cwiseAbs().maxCoeff();
    if (peak > 0.0) scaled /= peak;
  }
  const double eps = options.epsilon;
  // Column r of `by_row` is row r of the cost; column j of `scaled` is column j.
  const Matrix by_row = scaled.transpose();
  const Vector log_p = p.array().log().matrix();
  const Vector log_q = q.array().log().matrix();

  Vector f = Vector::Zero(p.size());
  Vector g = Vector::Zero(q.size());
  if (warm_start != nullptr && warm_start->f.size() == p.size() &&
      warm_start->g.size() == q.size() && warm_start->f.allFinite() &&
      warm_start->g.allFinite()) {
    f = warm_start->f;
    g = warm_start->g;
  }
  Vector f_next(p.size());
  Vector g_next(q.size());
  Vector df;
  Vector dg;

  // Each iteration is one (f, g) sweep, preceded after the warm-up by a damped
  // Newton step on the dual. After every sweep the column marginals are exact
  // and the row error is measured by the next f update.
  SinkhornReport report;
  bool have_plan = false;
  while (true) {
    const double row_error = update_potential(by_row, log_p, p, g, f, eps, f_next);
    if (have_plan && row_error <= options.tol) {
      report.converged = true;
      break;
    }
    if (report.iterations >= options.max_iter) break;

    if (have_plan && report.iterations >= kWarmupSweeps) {
      const Matrix plan = plan_from_potentials(scaled, f, g, eps);
      if (newton_direction(plan, p, q, eps, df, dg)) {
        const double slope = df.dot(p - plan.rowwise().sum()) +
                             dg.dot(q - plan.colwise().sum().transpose());
        double step = 1.0;
        for (int k = 0; k < kMaxLineSearchSteps && slope > 0.0; ++k, step *= 0.5) {
          const double gain = dual_gain(plan, p, q, df, dg, step, eps);
          if (std::isfinite(gain) && gain >= 1e-4 * step * slope) {
            f += step * df;
            g += step * dg;
            update_potential(by_row, log_p, p, g, f, eps, f_next);
            break;
          }
        }
      }
    }

    f.swap(f_next);
    update_potential(scaled, log_q, q, f, g, eps, g_next);
    g.swap(g_next);
    have_plan = true;
    ++report.iterations;
  }

  CouplingMatrix coupling(plan_from_potentials(scaled, f, g, eps), p, q);
  report.violation = coupling.marginal_violation();
  report.converged = report.converged && report.violation <= options.tol;
  report.potentials = DualPotentials{std::move(f), std::move(g)};
  return SinkhornResult{std::move(coupling), std::move(report)};
}

double entropy(const Matrix& plan) {
  double acc = 0.0;
  for (Index j = 0; j < plan.cols(); ++j) {
    for (Index i = 0; i < plan.rows(); ++i) {
      const double v = plan(i, j);
      if (v > 0.0) acc -= v * std::log(v);
    }
  }
  return acc;
}

double transport_cost(const Matrix& plan, const Matrix& cost) {
  if (plan.rows() != cost.rows() || plan.cols() != cost.cols()) {
    throw ValidationError("plan and cost shapes differ");
  }
  return plan.cwiseProduct(cost).sum();
}

Assignment exact_assignment(const Matrix& cost) {
  if (cost.rows() != cost.cols()) throw ValidationError("assignment needs a square cost matrix");
  const Index n = cost.rows();
  if (n < 1 || n > 64) throw ValidationError("assignment oracle supports 1 <= n <= 64");
  if (!cost.allFinite()) throw ValidationError("cost entries must be finite");

  // 1-based shortest augmenting path formulation; column 0 is a sentinel.
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(static_cast<std::size_t>(n + 1), 0.0);
  std::vector<double> v(static_cast<std::size_t>(n + 1), 0.0);
  std::vector<Index> match(static_cast<std::size_t>(n + 1), 0);  // column -> row
  std::vector<Index> way(static_cast<std::size_t>(n + 1), 0);
  for (Index row = 1; row <= n; ++row) {
    match[0] = row;
    Index col0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(n + 1), kInf);
    std::vector<char> used(static_cast<std::size_t>(n + 1), 0);
    do {
      used[static_cast<std::size_t>(col0)] = 1;
      const Index i0 = match[static_cast<std::size_t>(col0)];
      double delta = kInf;
      Index col1 = 0;
      for (Index j = 1; j <= n; ++j) {
        const auto ju = static_cast<std::size_t>(j);
        if (used[ju]) continue;
        const double reduced = cost(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] - v[ju];
        if (reduced < minv[ju]) {
          minv[ju] = reduced;
          way[ju] = col0;
        }
        if (minv[ju] < delta) {
          delta = minv[ju];
          col1 = j;
        }
      }
      for (Index j = 0; j <= n; ++j) {
        const auto ju = static_cast<std::size_t>(j);
        if (used[ju]) {
          u[static_cast<std::size_t>(match[ju])] += delta;
          v[ju] -= delta;
        } else {
          minv[ju] -= delta;
        }
      }
      col0 = col1;
    } while (match[static_cast<std::size_t>(col0)] != 0);
    do {
      const Index col1 = way[static_cast<std::size_t>(col0)];
      match[static_cast<std::size_t>(col0)] = match[static_cast<std::size_t>(col1)];
      col0 = col1;
    } while (col0 != 0);
  }

  Assignment result;
  result.permutation.assign(static_cast<std::size_t>(n), 0);
  for (Index j = 1; j <= n; ++j) {
    result.permutation[static_cast<std::size_t>(match[static_cast<std::size_t>(j)] - 1)] = j - 1;
  }
  double total = 0.0;
  for (Index i = 0; i < n; ++i) total += cost(i, result.permutation[static_cast<std::size_t>(i)]);
  result.value = total / static_cast<double>(n);
  return result;
}

}  // namespace infoot
