#include "farpoint/framework1.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>

#include "farpoint/framework2.hpp"

namespace farpoint {

namespace {

std::vector<QuadraticPiece> copy_pieces(const PiecewiseMaxFunction& pm) {
  return {pm.pieces().begin(), pm.pieces().end()};
}

// Root of h on the segment [a, b] with h(a) < 0 < h(b).
Vector segment_root(const PiecewiseMaxFunction& h, Vector a, Vector b) {
  for (int i = 0; i < 80; ++i) {
    const Vector mid = 0.5 * (a + b);
    if (h(mid) < 0.0) {
      a = mid;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

const char* to_string(CaseLabel c) {
  switch (c) {
    case CaseLabel::DisjointFromInterior: return "DisjointFromInterior";
    case CaseLabel::StrictlyInterior: return "StrictlyInterior";
    case CaseLabel::OnBoundary: return "OnBoundary";
  }
  return "?";
}

const char* to_string(FarthestPath p) {
  switch (p) {
    case FarthestPath::Bisection: return "Bisection";
    case FarthestPath::Boundary: return "Boundary";
    case FarthestPath::Inclusion: return "Inclusion";
    case FarthestPath::Unresolved: return "Unresolved";
  }
  return "?";
}

Vector interior_point(const PiecewiseMaxFunction& h, const FrameworkConfig& cfg) {
  ConvexProgram prog;
  prog.objective = copy_pieces(h);
  BarrierOptions opt;
  opt.gap_tolerance = 1e-12;
  const auto r = solve_barrier(prog, Vector::Zero(h.dimension()), opt);
  if (r.unbounded || !(h(r.x) < -cfg.tol_membership)) {
    throw PreconditionError("the set {h < 0} is empty (ball intersection has no interior)");
  }
  return r.x;
}

Classification classify_case(const QuadraticPiece& f, const PiecewiseMaxFunction& h,
                             const FrameworkConfig& cfg) {
  cfg.validate();
  const Vector inner = interior_point(h, cfg);
  const PiecewiseMaxFunction hf(difference_pieces(h, f));
  const std::vector<Vector> starts{inner};
  const SolveReport rep = minimize_with_level(hf, h, 1.0, cfg, starts);
  if (!rep.converged) throw NumericalError("classify_case: minimization of h - f did not converge");

  Classification c;
  c.x1 = rep.minimizer;
  c.value = rep.value;
  c.nonsingleton = rep.nonsingleton;
  c.located = rep.located;

  // Smallest h over the near-optimal set, a convex problem.
  const double eps = std::max(cfg.tol_solver, 1e-12) * std::max(1.0, std::abs(rep.value));
  ConvexProgram lowest;
  lowest.objective = copy_pieces(h);
  lowest.constraints = copy_pieces(hf);
  lowest.bounds.assign(hf.size(), rep.value + eps);
  for (const auto& p : h.pieces()) {
    lowest.constraints.push_back(p);
    lowest.bounds.push_back(1.0 + eps);
  }
  BarrierOptions opt;
  opt.gap_tolerance = 1e-12;
  const Vector x_low = solve_barrier(lowest, rep.minimizer, opt).x;
  c.h_min = h(x_low);
  c.located.push_back(x_low);

  Vector x_high = rep.minimizer;
  c.h_max = h(x_high);
  for (const auto& p : c.located) {
    const double v = h(p);
    if (v > c.h_max) {
      c.h_max = v;
      x_high = p;
    }
  }
  c.h_min = std::min(c.h_min, c.h_max);

  const double tol = cfg.tol_membership;
  if (c.h_min > tol) {
    c.label = CaseLabel::DisjointFromInterior;
  } else if (c.h_max < -tol) {
    c.label = CaseLabel::StrictlyInterior;
  } else {
    c.label = CaseLabel::OnBoundary;
    if (std::abs(c.h_min) <= tol) {
      c.boundary_point = x_low;
    } else if (c.h_max <= tol) {
      c.boundary_point = x_high;
    } else {
      // Both signs occur in the convex minimizer set: walk the segment.
      c.boundary_point = segment_root(h, x_low, x_high);
    }
  }
  return c;
}

Classification classify_case(std::span<const Ball> balls, const Vector& C, const FrameworkConfig& cfg) {
  require_same_dimension(balls);
  if (C.size() != balls.front().dimension()) throw InstanceError("classify_case: query dimension mismatch");
  return classify_case(squared_distance_piece(C), build_h_from_balls(balls), cfg);
}

CertificateResult certificate_step(const QuadraticPiece& f, const PiecewiseMaxFunction& h, double R,
                                   const FrameworkConfig& cfg, bool precondition_ok,
                                   std::span<const Vector> starts) {
  const PiecewiseMaxFunction fpm({f});
  const auto g = build_g(fpm, h, R, cfg);
  ConvexProgram prog;
  prog.objective = copy_pieces(g);
  BarrierOptions opt;
  opt.gap_tolerance = cfg.tol_solver;
  opt.max_newton_steps = 10 * cfg.max_iterations;
  const Vector start = starts.empty() ? Vector::Zero(h.dimension()) : starts.front();
  const auto r = solve_barrier(prog, start, opt);

  CertificateResult out;
  out.g_minimizer = r.x;
  out.precondition_ok = precondition_ok;
  if (precondition_ok && h(r.x) < -cfg.tol_membership && f.value(r.x) >= R - cfg.tol_membership) {
    out.witness_exists = true;
    out.witness = r.x;
  }
  return out;
}

CertificateResult theorem21_certificate(const QuadraticPiece& f, const PiecewiseMaxFunction& h,
                                        double R, const FrameworkConfig& cfg) {
  const auto cls = classify_case(f, h, cfg);
  const std::vector<Vector> starts{cls.x1};
  return certificate_step(f, h, R, cfg, cls.label == CaseLabel::DisjointFromInterior, starts);
}

BisectionReport bisection_max(const QuadraticPiece& f, const PiecewiseMaxFunction& h, const Vector& x1,
                              double F_bar, const FrameworkConfig& cfg) {
  cfg.validate();
  if (!(h(x1) < 0.0)) throw PreconditionError("bisection_max: x1 is not in {h < 0}");
  BisectionReport rep;
  double lo = f.value(x1);
  double hi = F_bar;
  if (!(hi >= lo)) throw PreconditionError("bisection_max: upper bound is below f(x1)");
  Vector best = x1;
  Vector warm = x1;
  while (hi - lo > cfg.tol_bisection && rep.iterations < cfg.max_iterations) {
    const double R = 0.5 * (lo + hi);
    const std::vector<Vector> starts{warm};
    const auto cert = certificate_step(f, h, R, cfg, true, starts);
    warm = cert.g_minimizer;
    const double fx = f.value(cert.g_minimizer);
    if (cert.witness_exists) {
      if (fx > lo) {
        lo = fx;
        best = cert.g_minimizer;
      }
    } else {
      // With the precondition f(x*) = R on a NO answer; R itself is always a valid bound.
      hi = std::min(hi, std::max(R, fx));
    }
    ++rep.iterations;
    rep.trace.emplace_back(lo, hi);
  }
  rep.maximizer = best;
  rep.value = f.value(best);
  rep.upper_bound = hi;
  rep.converged = hi - lo <= cfg.tol_bisection;
  return rep;
}

Hyperplane separating_hyperplane(const Vector& C, std::span<const Vector> centers) {
  const Eigen::Index n = C.size();
  Matrix M(static_cast<Eigen::Index>(centers.size()) + 1, n + 1);
  M.row(0).head(n) = C.transpose();
  M(0, n) = -1.0;
  for (std::size_t k = 0; k < centers.size(); ++k) {
    if (centers[k].size() != n) throw InstanceError("separating_hyperplane: dimension mismatch");
    const auto r = static_cast<Eigen::Index>(k) + 1;
    M.row(r).head(n) = -centers[k].transpose();
    M(r, n) = 1.0;
  }
  Hyperplane out;
  const auto res = lp_feasible_strict(M);
  out.margin = res.margin;
  if (res.feasible) {
    out.found = true;
    out.d = res.witness->head(n);
    out.d_H = (*res.witness)(n);
  }
  return out;
}

double default_upper_bound(std::span<const Ball> balls, const Vector& C) {
  double best = 0.0;
  for (const auto& b : balls) best = std::max(best, (C - b.center).norm() + b.radius);
  return best * best;
}

double piece_upper_bound(const QuadraticPiece& f, std::span<const Ball> balls) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& b : balls) {
    double v;
    if (f.is_affine()) {
      v = f.linear.dot(b.center) + f.linear.norm() * b.radius + f.constant;
    } else {
      const double reach = (b.center + 0.5 * f.linear).norm() + b.radius;
      v = reach * reach + f.constant - 0.25 * f.linear.squaredNorm();
    }
    best = std::min(best, v);
  }
  return best;
}

BisectionReport bisection_max(std::span<const Ball> balls, const Vector& C, const Vector& x1,
                              double F_bar, const FrameworkConfig& cfg) {
  require_same_dimension(balls);
  std::vector<Vector> centers;
  for (const auto& b : balls) centers.push_back(b.center);
  if (!separating_hyperplane(C, centers).found &&
      classify_case(balls, C, cfg).label != CaseLabel::DisjointFromInterior) {
    throw PreconditionError("bisection_max: minimizers of h - f meet {h < 0}");
  }
  return bisection_max(squared_distance_piece(C), build_h_from_balls(balls), x1, F_bar, cfg);
}

FarthestReport farthest_point(std::span<const Ball> balls, const Vector& C, const FrameworkConfig& cfg,
                              const std::optional<Polytope>& container) {
  cfg.validate();
  require_same_dimension(balls);
  if (C.size() != balls.front().dimension()) throw InstanceError("farthest_point: query dimension mismatch");
  const auto h = build_h_from_balls(balls);
  const auto f = squared_distance_piece(C);
  const Vector x1 = interior_point(h, cfg);

  std::vector<Vector> centers;
  for (const auto& b : balls) centers.push_back(b.center);
  FarthestReport rep;
  rep.separated = separating_hyperplane(C, centers).found;
  std::optional<Classification> cls;
  if (rep.separated) {
    rep.label = CaseLabel::DisjointFromInterior;
  } else {
    cls = classify_case(f, h, cfg);
    rep.label = cls->label;
  }

  switch (rep.label) {
    case CaseLabel::DisjointFromInterior: {
      const auto b = bisection_max(f, h, x1, default_upper_bound(balls, C), cfg);
      rep.maximizer = b.maximizer;
      rep.value = b.value;
      rep.upper_bound = b.upper_bound;
      rep.iterations = b.iterations;
      rep.converged = b.converged;
      rep.trace = b.trace;
      rep.path = FarthestPath::Bisection;
      break;
    }
    case CaseLabel::OnBoundary: {
      // On {h <= 0}: f = h - (h - f) <= -min(h - f), attained at the boundary minimizer.
      rep.maximizer = *cls->boundary_point;
      rep.value = f.value(rep.maximizer);
      rep.upper_bound = -cls->value;
      rep.converged = true;
      rep.path = FarthestPath::Boundary;
      break;
    }
    case CaseLabel::StrictlyInterior: {
      if (!container) {
        rep.maximizer = x1;
        rep.value = f.value(x1);
        rep.upper_bound = -cls->value;
        rep.path = FarthestPath::Unresolved;
        break;
      }
      const auto pieces = h_minus_f_pieces(balls, C);
      const auto rs = r_star_inclusion(pieces, *container, cfg);
      rep.value = rs.r_star * rs.r_star;
      // Feasible candidates first, farthest first; infeasible ones are kept
      // after them for callers that only round.
      std::vector<std::tuple<bool, double, Vector>> ranked;
      for (const auto& c : rs.candidates) ranked.emplace_back(h(c) <= cfg.tol_membership, f.value(c), c);
      std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a);
        return std::get<1>(a) > std::get<1>(b);
      });
      for (auto& r : ranked) rep.candidates.push_back(std::move(std::get<2>(r)));
      if (!ranked.empty() && std::get<0>(ranked.front())) {
        rep.maximizer = rep.candidates.front();
      } else {
        rep.maximizer = rs.touching_point.value_or(x1);
      }
      rep.upper_bound = -cls->value;
      rep.iterations = rs.iterations;
      rep.converged = true;
      rep.path = FarthestPath::Inclusion;
      break;
    }
  }
  return rep;
}

BisectionReport linear_perturbation_max(std::span<const Ball> balls, const QuadraticPiece& base_f,
                                        const Vector& C_lin, const FrameworkConfig& cfg) {
  require_same_dimension(balls);
  if (C_lin.size() != balls.front().dimension() || base_f.dimension() != C_lin.size()) {
    throw InstanceError("linear_perturbation_max: dimension mismatch");
  }
  const QuadraticPiece shifted(base_f.quad_coeff, base_f.linear + C_lin, base_f.constant);
  const auto h = build_h_from_balls(balls);
  const auto cls = classify_case(shifted, h, cfg);
  if (cls.label != CaseLabel::DisjointFromInterior) {
    throw PreconditionError(std::string("linear_perturbation_max: perturbed objective classifies as ") +
                            to_string(cls.label) + "; a larger perturbation is needed");
  }
  const Vector x1 = interior_point(h, cfg);
  return bisection_max(shifted, h, x1, piece_upper_bound(shifted, balls), cfg);
}

}  // namespace farpoint
