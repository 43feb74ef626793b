#pragma once

#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "farpoint/convex_solver.hpp"
#include "farpoint/geometry.hpp"

namespace farpoint {

/// sqrt(-min(h - f)) located by bisection on emptiness of P_{R^2}. Returns 0
/// when P_0 is already empty. Throws NumericalError when h - f is unbounded
/// below.
double r_bar(std::span<const QuadraticPiece> pieces, const FrameworkConfig& cfg);

/// min over x of the affine max, by LP; nullopt when unbounded below.
std::optional<double> affine_max_minimum(std::span<const QuadraticPiece> pieces);

struct InclusionResult {
  bool included = true;
  std::optional<Eigen::Index> violating_row;
  std::optional<Vector> violation_point;
  /// Largest row excess max_{inner} (a^T x + b) seen (or +inf if unbounded).
  double worst_excess = -std::numeric_limits<double>::infinity();
  /// LP maximizer over inner for each outer row (when bounded).
  std::vector<Vector> row_maximizers;
};

/// inner ⊆ outer, one LP per outer row; the lowest violating row is reported.
InclusionResult polytope_inclusion(const Polytope& inner, const Polytope& outer, double tol = 1e-7);

enum class RStarMethod { BoundaryCase, InclusionBisection };

const char* to_string(RStarMethod m);

struct RStarReport {
  double r_star = 0.0;
  std::optional<Vector> touching_point;
  RStarMethod method = RStarMethod::BoundaryCase;
  int iterations = 0;
  /// Row maximizers of the final included polytope; the touching set is among them.
  std::vector<Vector> candidates;
};

/// OnBoundary case: R_star is R_bar and the boundary minimizer touches.
RStarReport r_star_boundary_case(std::span<const QuadraticPiece> pieces,
                                 const std::optional<Vector>& boundary_minimizer,
                                 const FrameworkConfig& cfg);

/// Smallest R in [0, R_bar] with P_{R^2} ⊆ container, by bisection (64 steps max).
RStarReport r_star_inclusion(std::span<const QuadraticPiece> pieces, const Polytope& container,
                             const FrameworkConfig& cfg);

}  // namespace farpoint
