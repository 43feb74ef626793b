#include "farpoint/convex_solver.hpp"

#include <cmath>
#include <random>

namespace farpoint {

namespace {

constexpr double kSpreadThreshold = 1e-4;

std::vector<QuadraticPiece> copy_pieces(const PiecewiseMaxFunction& pm) {
  return {pm.pieces().begin(), pm.pieces().end()};
}

}  // namespace

double max_spread(std::span<const Vector> points) {
  double best = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      best = std::max(best, (points[i] - points[j]).norm());
    }
  }
  return best;
}

std::vector<Vector> locate_minimizers(const ConvexProgram& program, const Vector& anchor,
                                      double value, double eps, std::span<const Vector> starts,
                                      int restarts, std::uint64_t seed) {
  ConvexProgram proj;
  proj.constraints = program.objective;
  proj.bounds.assign(program.objective.size(), value + eps);
  for (std::size_t j = 0; j < program.constraints.size(); ++j) {
    proj.constraints.push_back(program.constraints[j]);
    proj.bounds.push_back(program.bounds[j] + eps);
  }

  std::vector<Vector> probes;
  for (const auto& s : starts) {
    if (s.size() == anchor.size()) probes.push_back(s);
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double scale = 10.0 * std::max(1.0, anchor.cwiseAbs().maxCoeff());
  while (static_cast<int>(probes.size()) < restarts) {
    Vector v(anchor.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = anchor(i) + scale * gauss(rng);
    probes.push_back(std::move(v));
  }

  std::vector<Vector> located{anchor};
  BarrierOptions opt;
  opt.gap_tolerance = 1e-12;
  for (const auto& p : probes) {
    proj.objective = {squared_distance_piece(p)};
    try {
      const auto r = solve_barrier(proj, anchor, opt);
      if (r.x.allFinite()) located.push_back(r.x);
    } catch (const PreconditionError&) {
      // anchor not strictly inside the relaxed set; nothing to probe
      break;
    }
  }
  return located;
}

SolveReport minimize_unconstrained(const PiecewiseMaxFunction& pm, const FrameworkConfig& cfg,
                                   std::span<const Vector> starts) {
  return minimize_with_level(pm, pm, std::numeric_limits<double>::infinity(), cfg, starts);
}

SolveReport minimize_with_level(const PiecewiseMaxFunction& pm,
                                const PiecewiseMaxFunction& constraint, double level,
                                const FrameworkConfig& cfg, std::span<const Vector> starts) {
  cfg.validate();
  const Eigen::Index n = pm.dimension();
  if (constraint.dimension() != n) throw InstanceError("minimize_with_level: dimension mismatch");
  if (std::isnan(level) || level == -std::numeric_limits<double>::infinity()) {
    throw InstanceError("minimize_with_level: level must be a number or +inf");
  }
  for (const auto& s : starts) {
    if (s.size() != n) throw InstanceError("minimize_with_level: start dimension mismatch");
  }
  const bool constrained = std::isfinite(level);

  ConvexProgram prog;
  prog.objective = copy_pieces(pm);
  Vector x0 = starts.empty() ? Vector::Zero(n) : starts.front();
  if (constrained) {
    prog.constraints = copy_pieces(constraint);
    prog.bounds.assign(constraint.size(), level);
    const double margin = 1e-9 * std::max(1.0, std::abs(level));
    bool found = false;
    for (const auto& s : starts) {
      if (constraint(s) < level - margin) {
        x0 = s;
        found = true;
        break;
      }
    }
    if (!found) {
      ConvexProgram phase1;
      phase1.objective = prog.constraints;
      BarrierOptions opt;
      opt.stop_below = level - margin;
      opt.gap_tolerance = 1e-12;
      const auto r = solve_barrier(phase1, x0, opt);
      if (!(constraint(r.x) < level - margin)) {
        throw PreconditionError("minimize_with_level: constraint set has empty interior");
      }
      x0 = r.x;
    }
  }

  BarrierOptions opt;
  opt.gap_tolerance = cfg.tol_solver;
  opt.max_newton_steps = 10 * cfg.max_iterations;
  const auto r = solve_barrier(prog, x0, opt);

  SolveReport rep;
  rep.minimizer = r.x;
  rep.value = pm(r.x);
  rep.iterations = r.newton_steps;
  rep.converged = r.converged;
  rep.unbounded = r.unbounded;
  if (constrained) rep.active_constraint = constraint(r.x) >= level - cfg.tol_membership;
  if (r.unbounded || !r.converged) {
    rep.located = {r.x};
    return rep;
  }
  const double eps = std::max(cfg.tol_solver, 1e-12) * std::max(1.0, std::abs(rep.value));
  rep.located = locate_minimizers(prog, r.x, rep.value, eps, starts, cfg.restarts, cfg.seed);
  rep.nonsingleton = max_spread(rep.located) > kSpreadThreshold;
  return rep;
}

}  // namespace farpoint
