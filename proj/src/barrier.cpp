#include <cmath>
#include <limits>

#include "farpoint/convex_solver.hpp"

namespace farpoint {

namespace {

// Slacks t - p_i(x) for objective pieces followed by l_j - q_j(x) for constraints.
bool fill_slacks(const ConvexProgram& prog, const Vector& x, double t, Vector& s) {
  const double sq = x.squaredNorm();
  Eigen::Index k = 0;
  for (const auto& p : prog.objective) {
    s(k++) = t - (p.quad_coeff * sq + p.linear.dot(x) + p.constant);
  }
  for (std::size_t j = 0; j < prog.constraints.size(); ++j) {
    const auto& q = prog.constraints[j];
    s(k++) = prog.bounds[j] - (q.quad_coeff * sq + q.linear.dot(x) + q.constant);
  }
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (!(s(i) > 0.0)) return false;
  }
  return true;
}

double objective_value(const ConvexProgram& prog, const Vector& x) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& p : prog.objective) best = std::max(best, p.value(x));
  return best;
}

}  // namespace

BarrierResult solve_barrier(const ConvexProgram& prog, const Vector& start,
                            const BarrierOptions& opt) {
  if (prog.objective.empty()) throw InstanceError("solve_barrier: empty objective");
  if (prog.constraints.size() != prog.bounds.size()) {
    throw InstanceError("solve_barrier: constraint/bound count mismatch");
  }
  const Eigen::Index n = start.size();
  const std::size_t mo = prog.objective.size();
  const std::size_t mc = prog.constraints.size();
  const double m = static_cast<double>(mo + mc);

  BarrierResult out;
  bool all_affine = prog.constraints.empty();
  for (const auto& p : prog.objective) all_affine = all_affine && p.is_affine();
  if (all_affine) {
    // Gordan: max_i a_i^T x + c_i is unbounded below iff some d has a_i^T d < 0 for all i.
    Matrix A(static_cast<Eigen::Index>(mo), n);
    for (std::size_t i = 0; i < mo; ++i) A.row(static_cast<Eigen::Index>(i)) = prog.objective[i].linear.transpose();
    const bool zero_row = (A.rowwise().norm().array() == 0.0).any();
    if (!zero_row && lp_feasible_strict(A).feasible) {
      out.x = start;
      out.value = objective_value(prog, start);
      out.unbounded = true;
      return out;
    }
  }

  Vector x = start;
  double fx = objective_value(prog, x);
  double t = fx + std::max(1.0, 0.1 * std::abs(fx));
  Vector s(static_cast<Eigen::Index>(mo + mc));
  if (!fill_slacks(prog, x, t, s)) {
    throw PreconditionError("solve_barrier: start point is not strictly feasible");
  }

  const double t_floor = -1e12 * std::max(1.0, std::abs(t));
  double tau = m / std::max(1.0, std::abs(t));
  constexpr double kMu = 8.0;

  Matrix H(n + 1, n + 1);
  Matrix K(static_cast<Eigen::Index>(mo + mc) + n, n + 1);
  Eigen::HouseholderQR<Matrix> qr(K.rows(), K.cols());
  Vector g(n + 1);
  Vector trial_s(s.size());

  while (true) {
    // Centering by damped Newton; the barrier is self-concordant, so the
    // step 1/(1+lambda) stays feasible and decreases phi.
    for (int inner = 0; inner < 100; ++inner) {
      if (out.newton_steps >= opt.max_newton_steps) {
        out.x = x;
        out.value = objective_value(prog, x);
        return out;
      }
      // H = K^T K with one row of K per slack plus the curvature rows. Solving
      // through a QR of K keeps the tangential curvature accurate when a slack
      // is tiny; forming H would square the conditioning.
      K.setZero();
      g.setZero();
      g(n) = tau;
      double curvature = 0.0;
      Eigen::Index k = 0;
      for (const auto& p : prog.objective) {
        const double inv = 1.0 / s(k);
        const Vector grad = 2.0 * p.quad_coeff * x + p.linear;
        // slack = t - p(x): d/dx = -grad, d/dt = 1
        g.head(n) += grad * inv;
        g(n) -= inv;
        K.row(k).head(n) = inv * grad.transpose();
        K(k, n) = -inv;
        curvature += 2.0 * p.quad_coeff * inv;
        ++k;
      }
      for (const auto& q : prog.constraints) {
        const double inv = 1.0 / s(k);
        const Vector grad = 2.0 * q.quad_coeff * x + q.linear;
        g.head(n) += grad * inv;
        K.row(k).head(n) = inv * grad.transpose();
        curvature += 2.0 * q.quad_coeff * inv;
        ++k;
      }
      K.bottomLeftCorner(n, n).diagonal().setConstant(std::sqrt(curvature));

      Vector dz;
      qr.compute(K);
      const auto R = qr.matrixQR().topRows(n + 1).template triangularView<Eigen::Upper>();
      const Vector diag = qr.matrixQR().diagonal().cwiseAbs();
      if (diag.minCoeff() > 1e-14 * diag.maxCoeff()) {
        const Vector y = R.transpose().solve(-g);
        dz = R.solve(y);
      }
      if (dz.size() == 0 || !dz.allFinite() || g.dot(dz) > 0.0) {
        H.noalias() = K.transpose() * K;
        const double reg = 1e-13 * std::max(1e-300, H.diagonal().cwiseAbs().maxCoeff());
        Eigen::LDLT<Matrix> ldlt(H + reg * Matrix::Identity(n + 1, n + 1));
        dz = -ldlt.solve(g);
      }
      if (!dz.allFinite()) {
        out.x = x;
        out.value = objective_value(prog, x);
        return out;
      }
      const double lambda2 = std::max(0.0, -g.dot(dz));
      ++out.newton_steps;
      if (lambda2 < 1e-14) break;
      const double lambda = std::sqrt(lambda2);
      double step = lambda > 0.25 ? 1.0 / (1.0 + lambda) : 1.0;
      bool moved = false;
      for (int halving = 0; halving < 60; ++halving) {
        const Vector xn = x + step * dz.head(n);
        const double tn = t + step * dz(n);
        if (fill_slacks(prog, xn, tn, trial_s)) {
          x = xn;
          t = tn;
          s = trial_s;
          moved = true;
          break;
        }
        step *= 0.5;
      }
      if (!moved) break;
      if (t < t_floor || !x.allFinite()) {
        out.x = x;
        out.value = objective_value(prog, x);
        out.unbounded = true;
        return out;
      }
      if (t < opt.stop_below) {
        out.x = x;
        out.value = objective_value(prog, x);
        out.converged = true;
        return out;
      }
      if (lambda2 < 1e-10) break;
    }
    if (m / tau < opt.gap_tolerance * std::max(1.0, std::abs(t))) break;
    tau *= kMu;
  }
  out.x = x;
  out.value = objective_value(prog, x);
  out.converged = true;
  return out;
}

Vector project_onto_polytope(const Polytope& P, const Vector& point, const Vector& interior,
                             double gap_tolerance) {
  ConvexProgram prog;
  prog.objective.push_back(squared_distance_piece(point));
  for (Eigen::Index i = 0; i < P.rows(); ++i) {
    prog.constraints.emplace_back(0.0, P.A.row(i).transpose(), 0.0);
    prog.bounds.push_back(-P.b(i));
  }
  BarrierOptions opt;
  opt.gap_tolerance = gap_tolerance;
  return solve_barrier(prog, interior, opt).x;
}

}  // namespace farpoint
