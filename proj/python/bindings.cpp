#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <numeric>
#include <sstream>

#include "infoot/cli.hpp"
#include "infoot/error.hpp"
#include "infoot/infoot.hpp"
#include "infoot/projection.hpp"
#include "infoot/sinkhorn.hpp"
#include "infoot/version.hpp"

namespace py = pybind11;
using namespace infoot;

namespace {

DistanceMatrix intra(const Matrix& pts, DistanceKind kind) { return pairwise_distances(pts, pts, kind); }

KdeModel model_for(const Matrix& xs, const Matrix& ys, double bandwidth) {
  return build_kde_model(intra(xs, DistanceKind::IntraSource), intra(ys, DistanceKind::IntraTarget), bandwidth);
}

Vector or_uniform(const std::optional<Vector>& v, Index n) {
  return v ? *v : Vector::Constant(n, 1.0 / static_cast<double>(n));
}

CouplingMatrix as_plan(const Matrix& plan) {
  return CouplingMatrix(plan, plan.rowwise().sum(), plan.colwise().sum().transpose());
}

py::dict alignment_dict(const AlignmentResult& r) {
  py::dict d;
  d["coupling"] = r.coupling.values();
  d["objective_trace"] = r.objective_trace;
  d["mi_trace"] = r.mi_trace;
  d["entropic_objective_trace"] = r.entropic_objective_trace;
  d["iterations"] = r.iterations();
  d["converged"] = r.fully_converged();
  d["sinkhorn_failures"] = r.sinkhorn_failures;
  return d;
}

SolverConfig make_config(double lambda, double epsilon, double bandwidth) {
  SolverConfig cfg;
  cfg.lambda = lambda;
  cfg.epsilon = epsilon;
  cfg.bandwidth = bandwidth;
  cfg.validate();
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Information-maximizing optimal transport";
  m.attr("__version__") = std::string(kVersion);

  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);

  m.def("pairwise_distances",
        [](const Matrix& a, const Matrix& b) { return pairwise_distances(a, b, DistanceKind::Cross).values(); },
        py::arg("a"), py::arg("b"));

  m.def("mutual_information",
        [](const Matrix& xs, const Matrix& ys, const Matrix& plan, double bandwidth) {
          return mutual_information(model_for(xs, ys, bandwidth), plan);
        },
        py::arg("xs"), py::arg("ys"), py::arg("plan"), py::arg("bandwidth") = 0.5);

  m.def("mi_gradient",
        [](const Matrix& xs, const Matrix& ys, const Matrix& plan, double bandwidth) {
          return mi_gradient(model_for(xs, ys, bandwidth), plan);
        },
        py::arg("xs"), py::arg("ys"), py::arg("plan"), py::arg("bandwidth") = 0.5);

  m.def("sinkhorn",
        [](const Matrix& cost, std::optional<Vector> p, std::optional<Vector> q, double epsilon, int max_iter,
           double tol) {
          const SinkhornResult r = sinkhorn(cost, or_uniform(p, cost.rows()), or_uniform(q, cost.cols()),
                                            SinkhornOptions{epsilon, max_iter, tol});
          py::dict d;
          d["coupling"] = r.coupling.values();
          d["iterations"] = r.report.iterations;
          d["converged"] = r.report.converged;
          d["violation"] = r.report.violation;
          return d;
        },
        py::arg("cost"), py::arg("p") = py::none(), py::arg("q") = py::none(), py::arg("epsilon") = 1.0,
        py::arg("max_iter") = 1000, py::arg("tol") = 1e-9);

  m.def("exact_assignment",
        [](const Matrix& cost) {
          const Assignment a = exact_assignment(cost);
          return py::make_tuple(a.permutation, a.value);
        },
        py::arg("cost"));

  m.def("solve_fused_infoot",
        [](const Matrix& xs, const Matrix& ys, std::optional<Matrix> cost, double lambda, double epsilon,
           double bandwidth) {
          const Matrix c = cost ? *cost : pairwise_distances(xs, ys, DistanceKind::Cross).values();
          const SolverConfig cfg = make_config(lambda, epsilon, bandwidth);
          return alignment_dict(solve_fused_infoot(c, intra(xs, DistanceKind::IntraSource),
                                                   intra(ys, DistanceKind::IntraTarget),
                                                   or_uniform(std::nullopt, xs.rows()),
                                                   or_uniform(std::nullopt, ys.rows()), cfg));
        },
        py::arg("xs"), py::arg("ys"), py::arg("cost") = py::none(), py::arg("lam") = 100.0,
        py::arg("epsilon") = 1.0, py::arg("bandwidth") = 0.5);

  m.def("solve_infoot",
        [](const Matrix& xs, const Matrix& ys, double lambda, double epsilon, double bandwidth) {
          const SolverConfig cfg = make_config(lambda, epsilon, bandwidth);
          return alignment_dict(solve_infoot(intra(xs, DistanceKind::IntraSource),
                                             intra(ys, DistanceKind::IntraTarget),
                                             or_uniform(std::nullopt, xs.rows()),
                                             or_uniform(std::nullopt, ys.rows()), cfg));
        },
        py::arg("xs"), py::arg("ys"), py::arg("lam") = 1.0, py::arg("epsilon") = 1.0,
        py::arg("bandwidth") = 0.5);

  m.def("barycentric_project",
        [](const Matrix& plan, const Matrix& ys) { return barycentric_project(as_plan(plan), ys); },
        py::arg("plan"), py::arg("ys"));

  m.def("conditional_project",
        [](const Matrix& xs, const Matrix& ys, const Matrix& plan, double bandwidth,
           std::optional<Matrix> queries) {
          const KdeModel model = model_for(xs, ys, bandwidth);
          if (queries) return conditional_project(model, as_plan(plan), OutOfSampleQueries{*queries}, ys, xs);
          std::vector<Index> all(static_cast<std::size_t>(xs.rows()));
          std::iota(all.begin(), all.end(), Index{0});
          return conditional_project(model, as_plan(plan), InSampleQueries{all}, ys, xs);
        },
        py::arg("xs"), py::arg("ys"), py::arg("plan"), py::arg("bandwidth") = 0.5,
        py::arg("queries") = py::none());

  m.def("importance_weights",
        [](const Matrix& xs, const Matrix& ys, const Matrix& plan, const Matrix& queries, double bandwidth) {
          return importance_weights(model_for(xs, ys, bandwidth), as_plan(plan), OutOfSampleQueries{queries}, ys,
                                    xs)
              .values;
        },
        py::arg("xs"), py::arg("ys"), py::arg("plan"), py::arg("queries"), py::arg("bandwidth") = 0.5);

  m.def("run_cli",
        [](std::vector<std::string> args) {
          args.insert(args.begin(), "infoot");
          std::vector<const char*> argv;
          for (const auto& a : args) argv.push_back(a.c_str());
          std::ostringstream out, err;
          const int code = cli_run(static_cast<int>(argv.size()), argv.data(), out, err);
          return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"));
}
