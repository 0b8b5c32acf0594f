#include "infoot/pipelines.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <numeric>

#include "infoot/error.hpp"
#include "infoot/io.hpp"
#include "infoot/parallel.hpp"
#include "infoot/version.hpp"

namespace infoot {

using nlohmann::ordered_json;

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::vector<Index> iota_rows(Index n) {
  std::vector<Index> rows(static_cast<std::size_t>(n));
  std::iota(rows.begin(), rows.end(), Index{0});
  return rows;
}

template <typename T>
std::vector<T> pick(const std::vector<T>& values, const std::vector<Index>& rows) {
  std::vector<T> out;
  out.reserve(rows.size());
  for (const Index r : rows) out.push_back(values[static_cast<std::size_t>(r)]);
  return out;
}

Matrix project_source(ProjectionMode mode, std::optional<double> bandwidth, const KdeModel& model,
                      const DistanceMatrix& dx, const DistanceMatrix& dy,
                      const CouplingMatrix& plan, const Matrix& targets, const Matrix& sources) {
  ProjectionRequest request{mode, bandwidth, InSampleQueries{}};
  return project(request, model, dx, dy, plan, targets, sources);
}

std::string precision_key(const std::string& prefix, int k) {
  return prefix + "precision_at_" + std::to_string(k);
}

void check_ks(const std::vector<int>& ks, Index targets) {
  for (const int k : ks) {
    if (k < 1) throw ValidationError("k must be >= 1");
    if (k > targets) {
      throw ValidationError("precision@" + std::to_string(k) + " needs at least " +
                            std::to_string(k) + " targets, have " + std::to_string(targets));
    }
  }
}

}  // namespace

Dataset make_dataset(const ExperimentSpec& spec) {
  if (spec.data.source_csv) {
    PointSet source = io::read_point_set_csv(*spec.data.source_csv);
    PointSet target = io::read_point_set_csv(*spec.data.target_csv);
    if (source.dim() != target.dim()) {
      throw ValidationError("source and target CSV files have different dimensions");
    }
    auto classes = [](const PointSet& s) {
      return s.has_labels() ? s.labels() : std::vector<int>(static_cast<std::size_t>(s.size()), 0);
    };
    std::vector<int> sc = classes(source);
    std::vector<int> tc = classes(target);
    std::vector<Index> outliers;
    for (std::size_t j = 0; j < tc.size(); ++j) {
      if (tc[j] < 0) outliers.push_back(static_cast<Index>(j));
    }
    return Dataset{source.without_labels(), target.without_labels(), std::move(sc), std::move(tc),
                   std::move(outliers), spec.data.clusters.cluster_std};
  }
  SyntheticPair pair = gen_two_cluster(spec.data.clusters);
  std::vector<Index> outliers;
  for (std::size_t j = 0; j < pair.target_clusters.size(); ++j) {
    if (pair.target_clusters[j] < 0) outliers.push_back(static_cast<Index>(j));
  }
  return Dataset{std::move(pair.source), std::move(pair.target), std::move(pair.source_clusters),
                 std::move(pair.target_clusters), std::move(outliers),
                 spec.data.clusters.cluster_std};
}

DistanceMatrix class_conditional_cost(const PointSet& labeled, double penalty) {
  if (!labeled.has_labels()) {
    throw ValidationError("class-conditional cost needs a labeled point set");
  }
  if (!(penalty >= 0.0) || !std::isfinite(penalty)) {
    throw ValidationError("class penalty must be finite and >= 0");
  }
  Matrix d = pairwise_distances(labeled, labeled, DistanceKind::IntraSource).values();
  const auto& labels = labeled.labels();
  for (Index i = 0; i < d.rows(); ++i) {
    for (Index j = 0; j < d.cols(); ++j) {
      if (labels[static_cast<std::size_t>(i)] != labels[static_cast<std::size_t>(j)]) d(i, j) += penalty;
    }
  }
  return DistanceMatrix(std::move(d), DistanceKind::IntraSource);
}

AlignmentResult align(Method method, const Matrix& cost, const KdeModel& model, const Vector& p,
                      const Vector& q, const SolverConfig& config) {
  switch (method) {
    case Method::Fused:
      return solve_fused_infoot(cost, model, p, q, config);
    case Method::InfoOT:
      return solve_infoot(model, p, q, config);
    case Method::Sinkhorn: {
      config.validate();
      const auto start = std::chrono::steady_clock::now();
      SinkhornResult r = sinkhorn(cost, p, q, config.sinkhorn_options());
      const bool ok = r.report.converged;
      AlignmentResult out{std::move(r.coupling), {}, {}, {}, {}, ok, ok ? 0 : 1, 0.0};
      const double c = transport_cost(out.coupling.values(), cost);
      out.objective_trace.push_back(c);
      out.mi_trace.push_back(mutual_information(model, out.coupling));
      out.entropic_objective_trace.push_back(c - config.epsilon * entropy(out.coupling));
      out.wall_seconds = seconds_since(start);
      return out;
    }
  }
  throw ValidationError("unknown method");
}

ordered_json solver_summary(Method method, const AlignmentResult& result) {
  ordered_json s;
  s["method"] = to_string(method);
  s["iterations"] = result.iterations();
  s["converged"] = result.converged;
  s["sinkhorn_failures"] = result.sinkhorn_failures;
  s["marginal_violation"] = result.coupling.marginal_violation();
  s["objective_trace"] = result.objective_trace;
  s["mi_trace"] = result.mi_trace;
  s["entropic_objective_trace"] = result.entropic_objective_trace;
  s["change_trace"] = result.change_trace;
  return s;
}

ordered_json EvalReport::to_json() const {
  ordered_json out;
  out["scenario"] = scenario;
  ordered_json m = ordered_json::object();
  for (const auto& [key, value] : metrics) m[key] = value;
  out["metrics"] = m;
  out["solver"] = solver;
  out["solver_converged"] = solver_converged;
  if (!details.is_null()) out["details"] = details;
  out["config"] = config;
  out["version"] = {{"infoot", kVersion}, {"git", kGitRevision}};
  out["wall_time_seconds"] = wall_seconds;
  return out;
}

// ---- metrics ---------------------------------------------------------------

double cluster_coherence(const Matrix& plan, const std::vector<int>& source_ids,
                         const std::vector<int>& target_ids) {
  if (static_cast<Index>(source_ids.size()) != plan.rows() ||
      static_cast<Index>(target_ids.size()) != plan.cols()) {
    throw ValidationError("cluster ids do not match the coupling shape");
  }
  int clusters = 0;
  for (const int c : source_ids) clusters = std::max(clusters, c + 1);
  for (const int c : target_ids) clusters = std::max(clusters, c + 1);
  if (clusters == 0) return 0.0;
  Matrix mass = Matrix::Zero(clusters, clusters);
  for (Index i = 0; i < plan.rows(); ++i) {
    const int a = source_ids[static_cast<std::size_t>(i)];
    if (a < 0) continue;
    for (Index j = 0; j < plan.cols(); ++j) {
      const int b = target_ids[static_cast<std::size_t>(j)];
      if (b >= 0) mass(a, b) += plan(i, j);
    }
  }
  const Assignment best = exact_assignment(-mass);
  double matched = 0.0;
  for (int k = 0; k < clusters; ++k) matched += mass(k, best.permutation[static_cast<std::size_t>(k)]);
  return matched / plan.sum();
}

int outlier_hits(const Matrix& projected, const Matrix& outliers, double radius) {
  int hits = 0;
  for (Index i = 0; i < projected.rows(); ++i) {
    for (Index o = 0; o < outliers.rows(); ++o) {
      if ((projected.row(i) - outliers.row(o)).norm() <= radius) {
        ++hits;
        break;
      }
    }
  }
  return hits;
}

double centroid_proximity(const Matrix& projected, const std::vector<int>& source_ids,
                          const Matrix& targets, const std::vector<int>& target_ids) {
  int clusters = 0;
  for (const int c : target_ids) clusters = std::max(clusters, c + 1);
  if (clusters == 0 || projected.rows() == 0) return 0.0;
  Matrix centroids = Matrix::Zero(clusters, targets.cols());
  Vector counts = Vector::Zero(clusters);
  for (Index j = 0; j < targets.rows(); ++j) {
    const int c = target_ids[static_cast<std::size_t>(j)];
    if (c < 0) continue;
    centroids.row(c) += targets.row(j);
    counts(c) += 1.0;
  }
  for (int c = 0; c < clusters; ++c) {
    if (counts(c) > 0) centroids.row(c) /= counts(c);
  }
  int good = 0;
  int scored = 0;
  for (Index i = 0; i < projected.rows(); ++i) {
    const int own = source_ids[static_cast<std::size_t>(i)];
    if (own < 0 || own >= clusters || counts(own) == 0) continue;
    ++scored;
    int nearest = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int c = 0; c < clusters; ++c) {
      if (counts(c) == 0) continue;
      const double d = (projected.row(i) - centroids.row(c)).squaredNorm();
      if (d < best) {
        best = d;
        nearest = c;
      }
    }
    if (nearest == own) ++good;
  }
  return scored ? static_cast<double>(good) / scored : 0.0;
}

std::vector<int> nearest_neighbor_labels(const Matrix& train, const std::vector<int>& labels,
                                         const Matrix& queries) {
  if (train.rows() == 0) throw ValidationError("1-NN needs at least one training point");
  if (static_cast<Index>(labels.size()) != train.rows()) {
    throw ValidationError("one label per training point is required");
  }
  if (train.cols() != queries.cols()) throw ValidationError("1-NN dimension mismatch");
  std::vector<int> out(static_cast<std::size_t>(queries.rows()));
  parallel_for(out.size(), [&](std::size_t r) {
    const auto q = static_cast<Index>(r);
    Index best_index = 0;
    double best = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < train.rows(); ++i) {
      double sq = 0.0;
      for (Index c = 0; c < train.cols(); ++c) {
        const double diff = queries(q, c) - train(i, c);
        sq += diff * diff;
      }
      if (sq < best) {
        best = sq;
        best_index = i;
      }
    }
    out[r] = labels[static_cast<std::size_t>(best_index)];
  });
  return out;
}

double accuracy(const std::vector<int>& predicted, const std::vector<int>& truth) {
  if (predicted.size() != truth.size()) throw ValidationError("prediction/truth size mismatch");
  int scored = 0;
  int correct = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] < 0) continue;
    ++scored;
    if (predicted[i] == truth[i]) ++correct;
  }
  return scored ? static_cast<double>(correct) / scored : 0.0;
}

std::vector<Index> rank_targets(const Eigen::Ref<const Vector>& scores) {
  std::vector<Index> order = iota_rows(scores.size());
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return scores(a) > scores(b); });
  return order;
}

std::map<int, double> precision_at_k(const Matrix& scores, const std::vector<int>& query_labels,
                                     const std::vector<int>& target_labels,
                                     const std::vector<int>& ks) {
  if (static_cast<Index>(query_labels.size()) != scores.rows() ||
      static_cast<Index>(target_labels.size()) != scores.cols()) {
    throw ValidationError("label counts do not match the score matrix");
  }
  check_ks(ks, scores.cols());
  std::map<int, double> out;
  for (const int k : ks) out[k] = 0.0;
  if (scores.rows() == 0) return out;
  for (Index q = 0; q < scores.rows(); ++q) {
    const Vector row = scores.row(q).transpose();
    const std::vector<Index> order = rank_targets(row);
    const int label = query_labels[static_cast<std::size_t>(q)];
    for (const int k : ks) {
      int hits = 0;
      for (int t = 0; t < k; ++t) {
        if (target_labels[static_cast<std::size_t>(order[static_cast<std::size_t>(t)])] == label) ++hits;
      }
      out[k] += static_cast<double>(hits) / k;
    }
  }
  for (auto& [k, v] : out) v /= static_cast<double>(scores.rows());
  return out;
}

// ---- experiments -----------------------------------------------------------

RunResult solve_experiment(const ExperimentSpec& spec, bool with_projection) {
  return solve_experiment(spec, make_dataset(spec), with_projection);
}

RunResult solve_experiment(const ExperimentSpec& spec, const Dataset& data, bool with_projection) {
  spec.validate();
  const auto start = std::chrono::steady_clock::now();
  const DistanceMatrix dx = pairwise_distances(data.source, data.source, DistanceKind::IntraSource);
  const DistanceMatrix dy = pairwise_distances(data.target, data.target, DistanceKind::IntraTarget);
  const DistanceMatrix c = pairwise_distances(data.source, data.target, DistanceKind::Cross);
  const KdeModel model = build_kde_model(dx, dy, spec.solver.bandwidth);
  AlignmentResult fit =
      align(spec.method, c.values(), model, data.source.weights(), data.target.weights(), spec.solver);

  RunResult run;
  EvalReport& report = run.report;
  report.scenario = to_string(spec.scenario);
  report.config = spec.to_json();
  report.solver = solver_summary(spec.method, fit);
  report.solver_converged = fit.sinkhorn_failures == 0;
  report.metrics["cluster_coherence"] =
      cluster_coherence(fit.coupling.values(), data.source_classes, data.target_classes);

  if (with_projection) {
    const Matrix& targets = data.target.points();
    const Matrix bary = barycentric_project(fit.coupling, targets);
    const Matrix cond = project_source(ProjectionMode::Conditional, spec.projection.bandwidth, model,
                                       dx, dy, fit.coupling, targets, data.source.points());
    Matrix outliers(static_cast<Index>(data.outlier_rows.size()), targets.cols());
    for (std::size_t o = 0; o < data.outlier_rows.size(); ++o) {
      outliers.row(static_cast<Index>(o)) = targets.row(data.outlier_rows[o]);
    }
    const double radius = data.cluster_std / 2.0;
    report.metrics["outlier_hits_barycentric"] = outlier_hits(bary, outliers, radius);
    report.metrics["outlier_hits_conditional"] = outlier_hits(cond, outliers, radius);
    report.metrics["centroid_proximity_barycentric"] =
        centroid_proximity(bary, data.source_classes, targets, data.target_classes);
    report.metrics["centroid_proximity_conditional"] =
        centroid_proximity(cond, data.source_classes, targets, data.target_classes);
    run.artifacts.projection = spec.projection.mode == ProjectionMode::Barycentric ? bary : cond;
    run.artifacts.projection_ids = iota_rows(data.source.size());
  }

  run.artifacts.coupling = std::move(fit.coupling);
  run.artifacts.data = data;
  run.artifacts.source_rows = iota_rows(data.source.size());
  run.artifacts.target_rows = iota_rows(data.target.size());
  report.wall_seconds = seconds_since(start);
  return run;
}

RunResult adaptation_pipeline(const ExperimentSpec& spec) {
  return adaptation_pipeline(spec, make_dataset(spec));
}

RunResult adaptation_pipeline(const ExperimentSpec& spec, const Dataset& data) {
  spec.validate();
  const auto start = std::chrono::steady_clock::now();
  auto [kept, held] = holdout_split(data.target.size(), spec.data.test_fraction, spec.seed + 1);
  // Without a hold-out the whole target is scored.
  const std::vector<Index> scored = held.empty() ? kept : held;

  const PointSet source(data.source.points(), data.source_classes);
  const PointSet target_train = data.target.subset(kept).without_labels();
  const DistanceMatrix dx = class_conditional_cost(source, spec.class_penalty);
  const DistanceMatrix dy = pairwise_distances(target_train, target_train, DistanceKind::IntraTarget);
  const DistanceMatrix c = pairwise_distances(source, target_train, DistanceKind::Cross);
  const KdeModel model = build_kde_model(dx, dy, spec.solver.bandwidth);
  AlignmentResult fit =
      align(spec.method, c.values(), model, source.weights(), target_train.weights(), spec.solver);

  const Matrix& targets = target_train.points();
  const Matrix bary = barycentric_project(fit.coupling, targets);
  const Matrix cond = project_source(ProjectionMode::Conditional, spec.projection.bandwidth, model,
                                     dx, dy, fit.coupling, targets, source.points());

  const Matrix test_points = data.target.subset(scored).points();
  const std::vector<int> truth = pick(data.target_classes, scored);
  const double acc_b = accuracy(nearest_neighbor_labels(bary, data.source_classes, test_points), truth);
  const double acc_c = accuracy(nearest_neighbor_labels(cond, data.source_classes, test_points), truth);

  RunResult run;
  EvalReport& report = run.report;
  report.scenario = to_string(spec.scenario);
  report.config = spec.to_json();
  report.solver = solver_summary(spec.method, fit);
  report.solver_converged = fit.sinkhorn_failures == 0;
  report.metrics["accuracy"] = spec.projection.mode == ProjectionMode::Barycentric ? acc_b : acc_c;
  report.metrics["accuracy_barycentric"] = acc_b;
  report.metrics["accuracy_conditional"] = acc_c;
  report.metrics["cluster_coherence"] =
      cluster_coherence(fit.coupling.values(), data.source_classes, pick(data.target_classes, kept));
  report.details = {{"test_points", scored.size()}, {"train_targets", kept.size()}};

  run.artifacts.projection = spec.projection.mode == ProjectionMode::Barycentric ? bary : cond;
  run.artifacts.projection_ids = iota_rows(data.source.size());
  run.artifacts.coupling = std::move(fit.coupling);
  run.artifacts.data = data;
  run.artifacts.source_rows = iota_rows(data.source.size());
  run.artifacts.target_rows = kept;
  report.wall_seconds = seconds_since(start);
  return run;
}

RunResult retrieval_pipeline(const ExperimentSpec& spec) {
  return retrieval_pipeline(spec, make_dataset(spec));
}

RunResult retrieval_pipeline(const ExperimentSpec& spec, const Dataset& data) {
  spec.validate();
  check_ks(spec.ks, data.target.size());
  const auto start = std::chrono::steady_clock::now();
  auto [train, queries] = holdout_split(data.source.size(), spec.data.query_fraction, spec.seed + 2);
  if (queries.empty()) throw ValidationError("retrieval needs a nonzero query_fraction");

  const PointSet source_train = data.source.subset(train);
  const DistanceMatrix dx = pairwise_distances(source_train, source_train, DistanceKind::IntraSource);
  const DistanceMatrix dy = pairwise_distances(data.target, data.target, DistanceKind::IntraTarget);
  const DistanceMatrix c = pairwise_distances(source_train, data.target, DistanceKind::Cross);
  const KdeModel fitted = build_kde_model(dx, dy, spec.solver.bandwidth);
  AlignmentResult fit = align(spec.method, c.values(), fitted, source_train.weights(),
                              data.target.weights(), spec.solver);

  const double h = spec.projection.bandwidth.value_or(spec.solver.bandwidth);
  KdeModel model = h == fitted.bandwidth() ? fitted : rebandwidth(fitted, dx, dy, h);
  const ConditionalMap map(std::move(model), fit.coupling, data.target.points(),
                           source_train.points());
  const Matrix query_points = data.source.subset(queries).points();
  const ScoreMatrix scores = map.importance_weights(OutOfSampleQueries{query_points});
  const ScoreMatrix in_sample = map.importance_weights(InSampleQueries{iota_rows(source_train.size())});

  const auto p_out = precision_at_k(scores.values, pick(data.source_classes, queries),
                                    data.target_classes, spec.ks);
  const auto p_in = precision_at_k(in_sample.values, pick(data.source_classes, train),
                                   data.target_classes, spec.ks);

  RunResult run;
  EvalReport& report = run.report;
  report.scenario = to_string(spec.scenario);
  report.config = spec.to_json();
  report.solver = solver_summary(spec.method, fit);
  report.solver_converged = fit.sinkhorn_failures == 0;
  for (const auto& [k, v] : p_out) report.metrics[precision_key("", k)] = v;
  for (const auto& [k, v] : p_in) report.metrics[precision_key("in_sample_", k)] = v;
  report.details = {{"queries", queries.size()}, {"train_sources", train.size()}};

  const int top = *std::max_element(spec.ks.begin(), spec.ks.end());
  ordered_json ranked = ordered_json::array();
  for (std::size_t r = 0; r < queries.size(); ++r) {
    const Vector row = scores.values.row(static_cast<Index>(r)).transpose();
    const std::vector<Index> order = rank_targets(row);
    ordered_json entry;
    entry["query_id"] = queries[r];
    entry["label"] = data.source_classes[static_cast<std::size_t>(queries[r])];
    std::vector<Index> ids(order.begin(), order.begin() + top);
    std::vector<double> vals;
    for (const Index j : ids) vals.push_back(row(j));
    entry["targets"] = ids;
    entry["scores"] = vals;
    ranked.push_back(entry);
  }
  run.artifacts.retrieval = ranked;
  run.artifacts.projection = map.project(OutOfSampleQueries{query_points});
  run.artifacts.projection_ids = queries;
  run.artifacts.coupling = std::move(fit.coupling);
  run.artifacts.data = data;
  run.artifacts.source_rows = train;
  run.artifacts.target_rows = iota_rows(data.target.size());
  report.wall_seconds = seconds_since(start);
  return run;
}

namespace {

struct DirectedFit {
  Matrix projected;
  bool converged;
};

DirectedFit fit_and_project(const ExperimentSpec& spec, const PointSet& labeled, const PointSet& other,
                            double h, bool class_conditional) {
  SolverConfig cfg = spec.solver;
  cfg.bandwidth = h;
  const DistanceMatrix dx = class_conditional
                                ? class_conditional_cost(labeled, spec.class_penalty)
                                : pairwise_distances(labeled, labeled, DistanceKind::IntraSource);
  const DistanceMatrix dy = pairwise_distances(other, other, DistanceKind::IntraTarget);
  const DistanceMatrix c = pairwise_distances(labeled, other, DistanceKind::Cross);
  const KdeModel model = build_kde_model(dx, dy, h);
  const AlignmentResult fit =
      solve_fused_infoot(c.values(), model, labeled.weights(), other.weights(), cfg);
  const Matrix projected = project_source(spec.projection.mode, spec.projection.bandwidth, model, dx,
                                          dy, fit.coupling, other.points(), labeled.points());
  return {projected, fit.sinkhorn_failures == 0};
}

}  // namespace

BandwidthSelection circular_validation(const ExperimentSpec& spec, const PointSet& labeled_source,
                                       const PointSet& target, const std::vector<double>& grid,
                                       bool class_conditional) {
  if (grid.empty()) throw ValidationError("bandwidth grid must not be empty");
  for (const double h : grid) {
    if (!(h > 0.0) || !std::isfinite(h)) throw ValidationError("bandwidth grid entries must be > 0");
  }
  const std::vector<int>& truth = labeled_source.labels();
  const PointSet unlabeled_target = target.without_labels();

  std::vector<double> scores(grid.size(), 0.0);
  parallel_for(grid.size(), [&](std::size_t g) {
    const double h = grid[g];
    const DirectedFit forward = fit_and_project(spec, labeled_source, unlabeled_target, h, class_conditional);
    const std::vector<int> pseudo = nearest_neighbor_labels(forward.projected, truth, target.points());
    const PointSet pseudo_target(target.points(), pseudo);
    const DirectedFit reverse =
        fit_and_project(spec, pseudo_target, labeled_source.without_labels(), h, class_conditional);
    const std::vector<int> back = nearest_neighbor_labels(reverse.projected, pseudo, labeled_source.points());
    scores[g] = accuracy(back, truth);
  });

  BandwidthSelection out{grid.front(), grid, scores};
  double best = -1.0;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    if (scores[g] > best || (scores[g] == best && grid[g] < out.chosen)) {
      best = scores[g];
      out.chosen = grid[g];
    }
  }
  return out;
}

RunResult validate_bandwidth(const ExperimentSpec& spec) {
  return validate_bandwidth(spec, make_dataset(spec));
}

RunResult validate_bandwidth(const ExperimentSpec& spec, const Dataset& data) {
  spec.validate();
  const auto start = std::chrono::steady_clock::now();
  const bool class_conditional =
      spec.scenario == Scenario::Adaptation || spec.scenario == Scenario::Imbalance;
  const PointSet source(data.source.points(), data.source_classes);
  const BandwidthSelection sel =
      circular_validation(spec, source, data.target, spec.grid, class_conditional);

  RunResult run;
  EvalReport& report = run.report;
  report.scenario = to_string(spec.scenario);
  report.config = spec.to_json();
  const auto best = std::find(sel.grid.begin(), sel.grid.end(), sel.chosen) - sel.grid.begin();
  report.metrics["chosen_bandwidth"] = sel.chosen;
  report.metrics["circular_agreement"] = sel.scores[static_cast<std::size_t>(best)];
  report.details = {{"grid", sel.grid}, {"scores", sel.scores},
                    {"class_conditional", class_conditional}};
  report.solver = {{"method", "fused"}};
  run.artifacts.data = data;
  run.artifacts.source_rows = iota_rows(data.source.size());
  run.artifacts.target_rows = iota_rows(data.target.size());
  report.wall_seconds = seconds_since(start);
  return run;
}

}  // namespace infoot
