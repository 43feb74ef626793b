#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "farpoint/convex_solver.hpp"
#include "farpoint/geometry.hpp"

namespace farpoint {

/// Position of argmin{h - f : h <= 1} relative to the open set {h < 0}.
enum class CaseLabel { DisjointFromInterior, StrictlyInterior, OnBoundary };

const char* to_string(CaseLabel c);

struct Classification {
  CaseLabel label = CaseLabel::DisjointFromInterior;
  /// Solver minimizer of h - f over {h <= 1}.
  Vector x1;
  /// min of h - f over {h <= 1}.
  double value = 0.0;
  /// min and max of h over the located (near-)minimizers.
  double h_min = 0.0;
  double h_max = 0.0;
  bool nonsingleton = false;
  /// A minimizer with |h| <= tol_membership; set for OnBoundary.
  std::optional<Vector> boundary_point;
  std::vector<Vector> located;
};

/// Classifies for f = ||x - C||^2 and h built from the balls.
Classification classify_case(std::span<const Ball> balls, const Vector& C, const FrameworkConfig& cfg);

/// Same for an arbitrary single-piece f and piecewise h (k_f = k_h = 1).
Classification classify_case(const QuadraticPiece& f, const PiecewiseMaxFunction& h,
                             const FrameworkConfig& cfg);

struct CertificateResult {
  bool witness_exists = false;
  std::optional<Vector> witness;
  Vector g_minimizer;
  bool precondition_ok = false;
};

/// Minimizes g = max{R - f, 0} + h and reads off the answer to
/// "exists x with h(x) < 0 and f(x) >= R". The answer is only claimed when
/// the classification of (f, h) is DisjointFromInterior.
CertificateResult theorem21_certificate(const QuadraticPiece& f, const PiecewiseMaxFunction& h,
                                        double R, const FrameworkConfig& cfg);

/// Same, with the classification supplied by the caller.
CertificateResult certificate_step(const QuadraticPiece& f, const PiecewiseMaxFunction& h, double R,
                                   const FrameworkConfig& cfg, bool precondition_ok,
                                   std::span<const Vector> starts = {});

struct BisectionReport {
  Vector maximizer;
  double value = 0.0;
  /// Final R_high: an upper bound on max f over {h <= 0}.
  double upper_bound = 0.0;
  int iterations = 0;
  bool converged = false;
  /// (R_low, R_high) after each step.
  std::vector<std::pair<double, double>> trace;
};

/// Maximizes f over {h <= 0} by bisection on R. `x1` must satisfy h(x1) < 0
/// and `F_bar` must bound f on the feasible set. The caller is responsible for
/// the DisjointFromInterior precondition.
BisectionReport bisection_max(const QuadraticPiece& f, const PiecewiseMaxFunction& h, const Vector& x1,
                              double F_bar, const FrameworkConfig& cfg);

/// Ball form with f = ||x - C||^2; checks the precondition and throws
/// PreconditionError when it fails.
BisectionReport bisection_max(std::span<const Ball> balls, const Vector& C, const Vector& x1,
                              double F_bar, const FrameworkConfig& cfg);

struct Hyperplane {
  bool found = false;
  Vector d;
  double d_H = 0.0;
  double margin = 0.0;
};

/// Looks for (d, d_H) with d^T C < d_H < d^T C_k for every center.
Hyperplane separating_hyperplane(const Vector& C, std::span<const Vector> centers);

/// Point with h < -tol_membership, found by minimizing h. Throws
/// PreconditionError when {h < 0} is (numerically) empty.
Vector interior_point(const PiecewiseMaxFunction& h, const FrameworkConfig& cfg);

/// (max_k ||C - C_k|| + r_k)^2.
double default_upper_bound(std::span<const Ball> balls, const Vector& C);

/// Upper bound of a single piece over the ball intersection (min over balls).
double piece_upper_bound(const QuadraticPiece& f, std::span<const Ball> balls);

enum class FarthestPath { Bisection, Boundary, Inclusion, Unresolved };

const char* to_string(FarthestPath p);

struct FarthestReport {
  Vector maximizer;
  double value = 0.0;
  CaseLabel label = CaseLabel::DisjointFromInterior;
  FarthestPath path = FarthestPath::Unresolved;
  bool separated = false;
  double upper_bound = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<std::pair<double, double>> trace;
  /// Touching candidates from the inclusion search: feasible ones first, farthest first.
  std::vector<Vector> candidates;
};

/// max ||x - C||^2 over the ball intersection. In the StrictlyInterior case
/// the polytope inclusion search runs against `container` when given;
/// otherwise the report comes back with path Unresolved.
FarthestReport farthest_point(std::span<const Ball> balls, const Vector& C, const FrameworkConfig& cfg,
                              const std::optional<Polytope>& container = std::nullopt);

/// Maximizes base_f(x) + C_lin^T x over the ball intersection. Throws
/// PreconditionError unless the shifted objective classifies as
/// DisjointFromInterior.
BisectionReport linear_perturbation_max(std::span<const Ball> balls, const QuadraticPiece& base_f,
                                        const Vector& C_lin, const FrameworkConfig& cfg);

}  // namespace farpoint
