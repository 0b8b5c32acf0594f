#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "infoot/experiment_spec.hpp"
#include "infoot/infoot.hpp"
#include "infoot/projection.hpp"

namespace infoot {

/// Samples for one experiment plus ground truth used only for scoring.
struct Dataset {
  PointSet source;
  PointSet target;
  std::vector<int> source_classes;
  std::vector<int> target_classes;    // -1 marks injected outliers
  std::vector<Index> outlier_rows;    // target rows that are outliers
  double cluster_std = 0.0;
};

/// Generator output, or the spec's CSV files when given.
Dataset make_dataset(const ExperimentSpec& spec);

/// ||x_i - x_j|| + penalty * [label_i != label_j].
DistanceMatrix class_conditional_cost(const PointSet& labeled, double penalty = 5000.0);

/// Runs the chosen solver. `Method::Sinkhorn` ignores the KDE model and
/// reports a single-step trace.
AlignmentResult align(Method method, const Matrix& cost, const KdeModel& model, const Vector& p,
                      const Vector& q, const SolverConfig& config);

struct EvalReport {
  std::string scenario;
  std::map<std::string, double> metrics;
  nlohmann::ordered_json solver;     // diagnostics of the (last) solve
  nlohmann::ordered_json config;     // resolved spec
  nlohmann::ordered_json details;    // scenario specific extras (per-h scores, ...)
  bool solver_converged = true;
  double wall_seconds = 0.0;

  nlohmann::ordered_json to_json() const;
};

nlohmann::ordered_json solver_summary(Method method, const AlignmentResult& result);

// ---- metrics ---------------------------------------------------------------

/// Largest coupling mass matched between corresponding clusters, maximized
/// over cluster bijections. Rows/columns with id < 0 never count.
double cluster_coherence(const Matrix& plan, const std::vector<int>& source_ids,
                         const std::vector<int>& target_ids);

/// Number of projected points within `radius` of any of the given points.
int outlier_hits(const Matrix& projected, const Matrix& outliers, double radius);

/// Fraction of projected source points whose nearest target-cluster centroid
/// (empirical, outliers excluded) is the centroid of their own cluster.
double centroid_proximity(const Matrix& projected, const std::vector<int>& source_ids,
                          const Matrix& targets, const std::vector<int>& target_ids);

/// 1-NN labels for every query row; ties go to the lowest training index.
std::vector<int> nearest_neighbor_labels(const Matrix& train, const std::vector<int>& labels,
                                         const Matrix& queries);

/// Fraction of entries with truth >= 0 that match; 0 entries scored gives 0.
double accuracy(const std::vector<int>& predicted, const std::vector<int>& truth);

/// Target indices by descending score; equal scores keep ascending index.
std::vector<Index> rank_targets(const Eigen::Ref<const Vector>& scores);

/// Mean over queries of the fraction of the top-k targets sharing the query
/// label. Throws ValidationError when k exceeds the target count.
std::map<int, double> precision_at_k(const Matrix& scores, const std::vector<int>& query_labels,
                                     const std::vector<int>& target_labels,
                                     const std::vector<int>& ks);

// ---- experiments -----------------------------------------------------------

struct RunArtifacts {
  std::optional<CouplingMatrix> coupling;
  std::optional<Matrix> projection;          // one row per projection id
  std::vector<Index> projection_ids;
  std::optional<Dataset> data;               // for the plot-ready CSV
  std::vector<Index> source_rows;            // dataset rows used as solver sources
  std::vector<Index> target_rows;            // dataset rows used as solver targets
  nlohmann::ordered_json retrieval;          // ranked lists per query
};

struct RunResult {
  EvalReport report;
  RunArtifacts artifacts;
};

/// Euclidean alignment of the two domains, optionally followed by projection
/// of every source point. Metrics: cluster coherence, and with projection the
/// outlier hits and centroid proximity of both projection modes.
RunResult solve_experiment(const ExperimentSpec& spec, bool with_projection);
RunResult solve_experiment(const ExperimentSpec& spec, const Dataset& data, bool with_projection);

/// F-InfoOT with a class-conditional source cost, projection of the source,
/// 1-NN trained on the projection and scored on held-out target points. Both
/// projection modes are scored on the same coupling.
RunResult adaptation_pipeline(const ExperimentSpec& spec);
RunResult adaptation_pipeline(const ExperimentSpec& spec, const Dataset& data);

/// F-InfoOT on the training split of the source, importance-weight retrieval
/// for held-out source queries, precision@k against target labels.
RunResult retrieval_pipeline(const ExperimentSpec& spec);
RunResult retrieval_pipeline(const ExperimentSpec& spec, const Dataset& data);

struct BandwidthSelection {
  double chosen = 0.0;
  std::vector<double> grid;
  std::vector<double> scores;
};

/// Forward/reverse pseudo-label agreement for every bandwidth in `grid`;
/// argmax with ties to the smaller h. `class_conditional` selects the
/// class-conditional cost on the labeled side of each fit.
BandwidthSelection circular_validation(const ExperimentSpec& spec, const PointSet& labeled_source,
                                       const PointSet& target, const std::vector<double>& grid,
                                       bool class_conditional);

RunResult validate_bandwidth(const ExperimentSpec& spec);
RunResult validate_bandwidth(const ExperimentSpec& spec, const Dataset& data);

}  // namespace infoot
