#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "farpoint/errors.hpp"
#include "farpoint/framework1.hpp"
#include "farpoint/oracles.hpp"
#include "farpoint/subset_sum.hpp"

namespace py = pybind11;
using namespace farpoint;

namespace {

std::vector<Ball> make_balls(const Matrix& centers, const Vector& radii) {
  if (centers.rows() != radii.size()) throw InstanceError("centers and radii differ in length");
  std::vector<Ball> out;
  for (Eigen::Index i = 0; i < centers.rows(); ++i) out.emplace_back(centers.row(i).transpose(), radii(i));
  return out;
}

FrameworkConfig make_config(std::optional<double> tol_bisection, std::optional<double> tol_solver,
                            std::optional<std::uint64_t> seed) {
  FrameworkConfig cfg;
  if (tol_bisection) cfg.tol_bisection = *tol_bisection;
  if (tol_solver) cfg.tol_solver = *tol_solver;
  if (seed) cfg.seed = *seed;
  cfg.validate();
  return cfg;
}

py::dict farthest(const Matrix& centers, const Vector& radii, const Vector& query,
                  std::optional<std::pair<Matrix, Vector>> container, std::optional<double> tol_bisection,
                  std::optional<double> tol_solver, std::optional<std::uint64_t> seed) {
  const auto balls = make_balls(centers, radii);
  const auto cfg = make_config(tol_bisection, tol_solver, seed);
  std::optional<Polytope> poly;
  if (container) poly = Polytope(container->first, container->second);
  FarthestReport r;
  {
    py::gil_scoped_release release;
    r = farthest_point(balls, query, cfg, poly);
  }
  py::dict d;
  d["label"] = to_string(r.label);
  d["branch"] = to_string(r.path);
  d["resolved"] = r.path != FarthestPath::Unresolved;
  d["maximizer"] = r.maximizer;
  d["value"] = r.value;
  d["upper_bound"] = r.upper_bound;
  d["separated"] = r.separated;
  d["iterations"] = r.iterations;
  d["converged"] = r.converged;
  return d;
}

py::dict classify(const Matrix& centers, const Vector& radii, const Vector& query) {
  const auto balls = make_balls(centers, radii);
  const auto c = classify_case(balls, query, FrameworkConfig{});
  py::dict d;
  d["label"] = to_string(c.label);
  d["x1"] = c.x1;
  d["value"] = c.value;
  d["nonsingleton"] = c.nonsingleton;
  d["boundary_point"] = c.boundary_point;
  return d;
}

py::dict decide(const Vector& S, std::optional<double> rho, std::optional<double> beta, std::optional<double> alpha,
                std::optional<double> tol_bisection, std::optional<double> tol_solver,
                std::optional<std::uint64_t> seed) {
  const SubsetSumInstance inst(S);
  const auto cfg = make_config(tol_bisection, tol_solver, seed);
  DecisionReport r;
  {
    py::gil_scoped_release release;
    r = decide_subset_sum(inst, cfg, DecisionParameters{rho, beta, alpha});
  }
  py::dict d;
  d["answer"] = to_string(r.answer);
  d["witness"] = r.witness_subset;
  d["branch"] = to_string(r.branch);
  d["label"] = r.label ? py::object(py::str(to_string(*r.label))) : py::object(py::none());
  d["rho"] = r.rho;
  d["beta"] = r.beta;
  d["alpha"] = r.alpha;
  d["rho_bar"] = r.rho_bar;
  d["rho_delta"] = r.rho_delta;
  d["corner_value"] = r.corner_value;
  d["value"] = r.value;
  d["upper_bound"] = r.upper_bound;
  d["residual"] = r.residual;
  d["theta_residual"] = r.theta_residual;
  d["diagnostics"] = r.diagnostics;
  return d;
}

py::dict brute_force(const Vector& S, std::size_t max_witnesses) {
  const auto r = brute_force_subset_sum(SubsetSumInstance(S), max_witnesses);
  py::dict d;
  d["yes"] = r.yes;
  d["witnesses"] = r.witnesses;
  d["witness_count"] = r.witness_count;
  return d;
}

py::dict sample(const Matrix& centers, const Vector& radii, const Vector& query, std::uint64_t samples,
                std::uint64_t seed) {
  const auto balls = make_balls(centers, radii);
  SampleResult r;
  {
    py::gil_scoped_release release;
    r = sample_farthest(balls, query, samples, seed);
  }
  py::dict d;
  d["value"] = r.value;
  d["argmax"] = r.argmax;
  d["seed"] = r.seed;
  return d;
}

double corner_exactness(const Vector& S, double rho, double beta) {
  const SubsetSumInstance inst(S);
  return corner_exactness_check(build_disk_cover(inst, rho, beta), inst);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Farthest points over ball intersections and a subset-sum decision procedure";

  py::register_exception<InstanceError>(m, "InstanceError", PyExc_ValueError);
  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_RuntimeError);
  py::register_exception<ConstructionError>(m, "ConstructionError", PyExc_RuntimeError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);

  m.def("farthest_point", &farthest, py::arg("centers"), py::arg("radii"), py::arg("query"),
        py::arg("container") = py::none(), py::arg("tol_bisection") = py::none(),
        py::arg("tol_solver") = py::none(), py::arg("seed") = py::none(),
        "max ||x - query||^2 over the intersection of the balls (rows of `centers`).\n"
        "`container` is an optional (A, b) pair describing {A x + b <= 0}.");
  m.def("classify_case", &classify, py::arg("centers"), py::arg("radii"), py::arg("query"));
  m.def("decide_subset_sum", &decide, py::arg("S"), py::arg("rho") = py::none(), py::arg("beta") = py::none(),
        py::arg("alpha") = py::none(), py::arg("tol_bisection") = py::none(), py::arg("tol_solver") = py::none(),
        py::arg("seed") = py::none(), "Witness indices are zero-based.");
  m.def("brute_force_subset_sum", &brute_force, py::arg("S"), py::arg("max_witnesses") = 1024);
  m.def("sample_farthest", &sample, py::arg("centers"), py::arg("radii"), py::arg("query"),
        py::arg("samples") = 100000, py::arg("seed") = 20240611);
  m.def("corner_exactness", &corner_exactness, py::arg("S"), py::arg("rho"), py::arg("beta"));
  m.def("hat_R", &hat_R, py::arg("R"), py::arg("alpha"), py::arg("beta"), py::arg("n"));
  m.def("scaled_polytope_equivalence",
        [](const Vector& S, double rho, double beta, double alpha, double R) {
          return scaled_polytope_equivalence(SubsetSumInstance(S), rho, beta, alpha, R);
        },
        py::arg("S"), py::arg("rho"), py::arg("beta"), py::arg("alpha"), py::arg("R"));
}
