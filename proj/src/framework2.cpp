#include "farpoint/framework2.hpp"

#include <cmath>

namespace farpoint {

const char* to_string(RStarMethod m) {
  return m == RStarMethod::BoundaryCase ? "BoundaryCase" : "InclusionBisection";
}

std::optional<double> affine_max_minimum(std::span<const QuadraticPiece> pieces) {
  if (pieces.empty()) throw InstanceError("affine_max_minimum: no pieces");
  const Eigen::Index n = pieces.front().dimension();
  const auto m = static_cast<Eigen::Index>(pieces.size());
  // max -t  s.t.  a_i^T x + c_i - t <= 0
  Matrix A(m, n + 1);
  Vector b(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& p = pieces[static_cast<std::size_t>(i)];
    if (!p.is_affine()) throw InstanceError("affine_max_minimum: non-affine piece");
    A.row(i).head(n) = p.linear.transpose();
    A(i, n) = -1.0;
    b(i) = p.constant;
  }
  Vector c = Vector::Zero(n + 1);
  c(n) = -1.0;
  const auto r = lp_max(c, Polytope(A, b));
  if (r.status == LPStatus::Unbounded) return std::nullopt;
  if (r.status != LPStatus::Optimal) throw NumericalError("affine_max_minimum: LP failed");
  return -r.optimal_value;
}

double r_bar(std::span<const QuadraticPiece> pieces, const FrameworkConfig& cfg) {
  cfg.validate();
  auto empty_at = [&](double R) {
    return polytope_empty(polytope_family(pieces, R), 0.0);
  };
  if (empty_at(0.0)) return 0.0;
  double lo = 0.0;
  double hi = 1.0;
  constexpr double kScanCap = 1e8;
  while (!empty_at(hi)) {
    lo = hi;
    hi *= 2.0;
    if (hi > kScanCap) throw NumericalError("r_bar: h - f appears unbounded below");
  }
  for (int it = 0; it < 200 && hi - lo > cfg.tol_bisection; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (empty_at(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

InclusionResult polytope_inclusion(const Polytope& inner, const Polytope& outer, double tol) {
  if (inner.dimension() != outer.dimension()) throw InstanceError("polytope_inclusion: dimension mismatch");
  InclusionResult out;
  if (polytope_empty(inner, 0.0)) return out;
  for (Eigen::Index i = 0; i < outer.rows(); ++i) {
    const Vector a = outer.A.row(i).transpose();
    const double nrm = a.norm();
    const auto r = lp_max(a, inner);
    double excess;
    std::optional<Vector> point;
    if (r.status == LPStatus::Unbounded) {
      excess = std::numeric_limits<double>::infinity();
    } else if (r.status == LPStatus::Optimal) {
      // Measured as a distance so that the tolerance is scale free.
      excess = (r.optimal_value + outer.b(i)) / (nrm > 0.0 ? nrm : 1.0);
      point = r.argmax;
      out.row_maximizers.push_back(r.argmax);
    } else if (r.status == LPStatus::Infeasible) {
      return InclusionResult{};
    } else {
      throw NumericalError("polytope_inclusion: LP failed");
    }
    out.worst_excess = std::max(out.worst_excess, excess);
    if (excess > tol && out.included) {
      out.included = false;
      out.violating_row = i;
      out.violation_point = point;
    }
  }
  return out;
}

RStarReport r_star_boundary_case(std::span<const QuadraticPiece> pieces,
                                 const std::optional<Vector>& boundary_minimizer,
                                 const FrameworkConfig& cfg) {
  RStarReport rep;
  rep.r_star = r_bar(pieces, cfg);
  rep.touching_point = boundary_minimizer;
  rep.method = RStarMethod::BoundaryCase;
  return rep;
}

RStarReport r_star_inclusion(std::span<const QuadraticPiece> pieces, const Polytope& container,
                             const FrameworkConfig& cfg) {
  RStarReport rep;
  rep.method = RStarMethod::InclusionBisection;
  auto test = [&](double R) {
    return polytope_inclusion(polytope_family(pieces, R), container, cfg.tol_membership);
  };
  const auto at_zero = test(0.0);
  if (at_zero.included) {
    rep.candidates = at_zero.row_maximizers;
    return rep;
  }
  const double rb = r_bar(pieces, cfg);
  auto at_hi = test(rb);
  if (!at_hi.included) {
    throw NumericalError("r_star_inclusion: inclusion fails even at R_bar");
  }
  double lo = 0.0;
  double hi = rb;
  std::optional<Vector> last = at_zero.violation_point;
  std::vector<Vector> below = at_zero.row_maximizers;
  constexpr int kMaxSteps = 64;
  while (hi - lo > cfg.tol_bisection && rep.iterations < kMaxSteps) {
    const double mid = 0.5 * (lo + hi);
    const auto r = test(mid);
    if (r.included) {
      hi = mid;
      at_hi = r;
    } else {
      lo = mid;
      if (r.violation_point) last = r.violation_point;
      below = r.row_maximizers;
    }
    ++rep.iterations;
  }
  rep.r_star = hi;
  rep.candidates = std::move(at_hi.row_maximizers);
  rep.candidates.insert(rep.candidates.end(), below.begin(), below.end());
  if (last) {
    const Polytope P = polytope_family(pieces, hi);
    const auto cc = chebyshev_center(P);
    if (cc && cc->radius > 1e-12) {
      rep.touching_point = project_onto_polytope(P, *last, cc->center);
    } else {
      rep.touching_point = last;
    }
  }
  return rep;
}

}  // namespace farpoint
