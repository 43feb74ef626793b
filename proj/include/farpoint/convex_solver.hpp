#pragma once

#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "farpoint/geometry.hpp"

namespace farpoint {

struct SolveReport {
  Vector minimizer;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
  /// The objective decreased without bound; `minimizer` is the last iterate.
  bool unbounded = false;
  /// Level constraint tight at the minimizer (within tol_membership).
  bool active_constraint = false;
  /// Restarts landed on near-optimal points more than 1e-4 apart.
  bool nonsingleton = false;
  /// Near-optimal points reached from each restart (first entry is `minimizer`).
  std::vector<Vector> located;
};

/// Minimizes a convex piecewise-max function. The result does not depend on
/// the starts except through `located`, which probes the minimizer set.
SolveReport minimize_unconstrained(const PiecewiseMaxFunction& pm, const FrameworkConfig& cfg,
                                   std::span<const Vector> starts);

/// Minimizes `pm` over {constraint <= level}; level = +inf drops the constraint.
/// Throws PreconditionError when {constraint < level} is empty.
SolveReport minimize_with_level(const PiecewiseMaxFunction& pm,
                                const PiecewiseMaxFunction& constraint, double level,
                                const FrameworkConfig& cfg, std::span<const Vector> starts);

// --- barrier core -----------------------------------------------------------

/// min_x max_i objective_i(x)  s.t.  constraints_j(x) <= bounds_j.
struct ConvexProgram {
  std::vector<QuadraticPiece> objective;
  std::vector<QuadraticPiece> constraints;
  std::vector<double> bounds;
};

struct BarrierOptions {
  /// Absolute duality-gap target, scaled by max(1, |objective|).
  double gap_tolerance = 1e-10;
  int max_newton_steps = 2000;
  /// Stop as soon as the epigraph variable drops below this (phase-I use).
  double stop_below = -std::numeric_limits<double>::infinity();
};

struct BarrierResult {
  Vector x;
  double value = 0.0;
  int newton_steps = 0;
  bool converged = false;
  bool unbounded = false;
};

/// Log-barrier Newton method on the epigraph form. `start` must satisfy
/// every constraint strictly.
BarrierResult solve_barrier(const ConvexProgram& program, const Vector& start,
                            const BarrierOptions& options = {});

/// Probes the set {x : objective(x) <= value + eps, constraints hold} by
/// projecting each start (padded with seeded random points up to `restarts`)
/// onto it. The first returned point is `anchor`, which must be strictly
/// feasible for the relaxed set.
std::vector<Vector> locate_minimizers(const ConvexProgram& program, const Vector& anchor,
                                      double value, double eps, std::span<const Vector> starts,
                                      int restarts, std::uint64_t seed);

/// Largest pairwise distance in `points`.
double max_spread(std::span<const Vector> points);

/// Euclidean projection of `point` onto {x : A x + b <= 0}; `interior` must
/// be a strictly interior point.
Vector project_onto_polytope(const Polytope& P, const Vector& point, const Vector& interior,
                             double gap_tolerance = 1e-12);

// --- linear programming -----------------------------------------------------

enum class LPStatus { Optimal, Infeasible, Unbounded, Failed };

const char* to_string(LPStatus s);

struct LPResult {
  double optimal_value = 0.0;
  Vector argmax;
  LPStatus status = LPStatus::Failed;
};

/// max c^T x over {A x + b <= 0} by a dense two-phase simplex with Bland's rule.
LPResult lp_max(const Vector& c, const Polytope& P);

struct StrictFeasibility {
  bool feasible = false;
  std::optional<Vector> witness;
  double margin = 0.0;
};

/// Decides whether M z < 0 (componentwise, strictly) has a solution by
/// maximizing t s.t. M z + t 1 <= 0, ||z||_inf <= 1 on row-normalized M.
StrictFeasibility lp_feasible_strict(const Matrix& M, double tol = 1e-7);

/// True iff no x satisfies A x + b <= tol.
bool polytope_empty(const Polytope& P, double tol = 1e-7);

struct ChebyshevBall {
  Vector center;
  double radius = 0.0;
};

/// Largest inscribed ball (radius capped at `cap`); nullopt if P is empty.
std::optional<ChebyshevBall> chebyshev_center(const Polytope& P, double cap = 1e6);

}  // namespace farpoint
