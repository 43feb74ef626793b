#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "farpoint/convex_solver.hpp"

namespace farpoint {

namespace {

constexpr double kPivotEps = 1e-10;

struct Standard {
  LPStatus status = LPStatus::Failed;
  Vector y;
};

class Tableau {
 public:
  // maximize c^T y  s.t.  M y <= d,  y >= 0.
  Tableau(const Matrix& M, const Vector& d) : m_(M.rows()), nv_(M.cols()) {
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (d(i) < 0.0) ++na_;
    }
    cols_ = nv_ + m_ + na_;
    T_ = Matrix::Zero(m_ + 1, cols_ + 1);
    basis_.resize(static_cast<std::size_t>(m_));
    Eigen::Index art = 0;
    for (Eigen::Index i = 0; i < m_; ++i) {
      const double sign = d(i) < 0.0 ? -1.0 : 1.0;
      T_.row(i).head(nv_) = sign * M.row(i);
      T_(i, nv_ + i) = sign;
      T_(i, cols_) = sign * d(i);
      if (sign < 0.0) {
        T_(i, nv_ + m_ + art) = 1.0;
        basis_[static_cast<std::size_t>(i)] = nv_ + m_ + art;
        ++art;
      } else {
        basis_[static_cast<std::size_t>(i)] = nv_ + i;
      }
    }
    T0_ = T_.topRows(m_);
  }

  Standard solve(const Vector& c) {
    Standard out;
    if (na_ > 0) {
      Vector cost = Vector::Zero(cols_);
      cost.tail(na_).setConstant(-1.0);
      set_objective(cost);
      if (iterate(cols_) != LPStatus::Optimal) return out;
      const double scale = std::max(1.0, T_.col(cols_).head(m_).cwiseAbs().maxCoeff());
      if (T_(m_, cols_) < -1e-10 * scale) {
        out.status = LPStatus::Infeasible;
        return out;
      }
      drive_out_artificials();
    }
    Vector cost = Vector::Zero(cols_);
    cost.head(nv_) = c;
    set_objective(cost);
    const LPStatus st = iterate(nv_ + m_);
    out.status = st;
    if (st != LPStatus::Optimal) return out;
    // Recompute the basic values from the original columns; pivoting drift
    // can otherwise leave the vertex slightly infeasible.
    Vector vals = T_.col(cols_).head(m_);
    Matrix B(m_, m_);
    for (Eigen::Index i = 0; i < m_; ++i) B.col(i) = T0_.col(basis_[static_cast<std::size_t>(i)]);
    const Eigen::FullPivLU<Matrix> lu = m_ > 0 ? Eigen::FullPivLU<Matrix>(B) : Eigen::FullPivLU<Matrix>();
    if (m_ > 0 && lu.isInvertible()) {
      const Vector refined = lu.solve(T0_.col(cols_));
      if (refined.allFinite() && refined.minCoeff() >= -1e-9 * std::max(1.0, refined.cwiseAbs().maxCoeff())) {
        vals = refined.cwiseMax(0.0);
      }
    }
    out.y = Vector::Zero(nv_);
    for (Eigen::Index i = 0; i < m_; ++i) {
      const auto j = basis_[static_cast<std::size_t>(i)];
      if (j < nv_) out.y(j) = vals(i);
    }
    return out;
  }

 private:
  void set_objective(const Vector& cost) {
    T_.row(m_).setZero();
    T_.row(m_).head(cols_) = -cost.transpose();
    for (Eigen::Index i = 0; i < m_; ++i) {
      const double cb = cost(basis_[static_cast<std::size_t>(i)]);
      if (cb != 0.0) T_.row(m_) += cb * T_.row(i);
    }
    cost_scale_ = std::max(1.0, cost.cwiseAbs().maxCoeff());
  }

  void pivot(Eigen::Index r, Eigen::Index c) {
    T_.row(r) /= T_(r, c);
    for (Eigen::Index i = 0; i <= m_; ++i) {
      if (i != r && T_(i, c) != 0.0) T_.row(i) -= T_(i, c) * T_.row(r);
    }
    T_(r, c) = 1.0;
    basis_[static_cast<std::size_t>(r)] = c;
  }

  // Bland's rule: smallest eligible entering column, ratio ties by smallest basic index.
  LPStatus iterate(Eigen::Index eligible) {
    const double rc_eps = 1e-11 * cost_scale_;
    const int cap = 50000;
    for (int it = 0; it < cap; ++it) {
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < eligible; ++j) {
        if (T_(m_, j) < -rc_eps) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return LPStatus::Optimal;
      Eigen::Index leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < m_; ++i) {
        const double a = T_(i, enter);
        if (a <= kPivotEps) continue;
        const double ratio = std::max(0.0, T_(i, cols_)) / a;
        const double slack = 1e-14 * std::max(1.0, best);
        if (leave < 0 || ratio < best - slack ||
            (std::abs(ratio - best) <= slack &&
             basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)])) {
          best = ratio;
          leave = i;
        }
      }
      if (leave < 0) return LPStatus::Unbounded;
      pivot(leave, enter);
    }
    return LPStatus::Failed;
  }

  void drive_out_artificials() {
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (basis_[static_cast<std::size_t>(i)] < nv_ + m_) continue;
      Eigen::Index best = -1;
      double mag = 1e-9;
      for (Eigen::Index j = 0; j < nv_ + m_; ++j) {
        if (std::abs(T_(i, j)) > mag) {
          mag = std::abs(T_(i, j));
          best = j;
        }
      }
      // A row with no usable entry is redundant; its artificial stays basic at zero.
      if (best >= 0) pivot(i, best);
    }
  }

  Eigen::Index m_, nv_, na_ = 0, cols_ = 0;
  Matrix T_;
  Matrix T0_;
  std::vector<Eigen::Index> basis_;
  double cost_scale_ = 1.0;
};

LPResult lp_attempt(const Vector& c, const Polytope& P, double relax) {
  const Eigen::Index n = P.dimension();
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < P.rows(); ++i) {
    const double nrm = P.A.row(i).norm();
    if (nrm > 0.0) {
      keep.push_back(i);
    } else if (P.b(i) > 1e-12) {
      return {0.0, Vector(), LPStatus::Infeasible};
    }
  }
  const auto m = static_cast<Eigen::Index>(keep.size());
  Matrix M(m, 2 * n);
  Vector d(m);
  for (Eigen::Index r = 0; r < m; ++r) {
    const auto i = keep[static_cast<std::size_t>(r)];
    const double nrm = P.A.row(i).norm();
    M.row(r).head(n) = P.A.row(i) / nrm;
    M.row(r).tail(n) = -P.A.row(i) / nrm;
    d(r) = -P.b(i) / nrm + relax * static_cast<double>(r + 1) / static_cast<double>(m);
  }
  Vector cc(2 * n);
  cc.head(n) = c;
  cc.tail(n) = -c;
  Tableau tab(M, d);
  const Standard st = tab.solve(cc);
  LPResult out;
  out.status = st.status;
  if (st.status != LPStatus::Optimal) return out;
  out.argmax = st.y.head(n) - st.y.tail(n);
  out.optimal_value = c.dot(out.argmax);
  return out;
}

double normalized_violation(const Polytope& P, const Vector& x) {
  double worst = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < P.rows(); ++i) {
    const double nrm = P.A.row(i).norm();
    if (nrm == 0.0) continue;
    worst = std::max(worst, (P.A.row(i).dot(x) + P.b(i)) / nrm);
  }
  return worst;
}

}  // namespace

const char* to_string(LPStatus s) {
  switch (s) {
    case LPStatus::Optimal: return "optimal";
    case LPStatus::Infeasible: return "infeasible";
    case LPStatus::Unbounded: return "unbounded";
    case LPStatus::Failed: return "failed";
  }
  return "failed";
}

LPResult lp_max(const Vector& c, const Polytope& P) {
  if (c.size() != P.dimension()) throw InstanceError("lp_max: objective/polytope dimension mismatch");
  if (P.rows() == 0) {
    if (c.isZero(0.0)) return {0.0, Vector::Zero(c.size()), LPStatus::Optimal};
    return {0.0, Vector(), LPStatus::Unbounded};
  }
  LPResult r = lp_attempt(c, P, 0.0);
  if (r.status != LPStatus::Optimal) return r;
  if (normalized_violation(P, r.argmax) <= 1e-8) return r;
  // Degenerate pivots can end on a slightly infeasible vertex: re-solve with a
  // tiny staggered relaxation that breaks the ties.
  for (double relax : {1e-11, 1e-10, 1e-9}) {
    r = lp_attempt(c, P, relax);
    if (r.status == LPStatus::Optimal && normalized_violation(P, r.argmax) <= 1e-8) return r;
    if (r.status != LPStatus::Optimal) return r;
  }
  r.status = LPStatus::Failed;
  return r;
}

StrictFeasibility lp_feasible_strict(const Matrix& M, double tol) {
  const Eigen::Index k = M.rows(), n = M.cols();
  StrictFeasibility out;
  if (k == 0) {
    out.feasible = true;
    out.witness = Vector::Zero(n);
    out.margin = 1.0;
    return out;
  }
  // Variables (z, t): M_i z / |M_i| + t <= 0, -1 <= z <= 1, t <= 1.
  Matrix A = Matrix::Zero(k + 2 * n + 1, n + 1);
  Vector b = Vector::Zero(k + 2 * n + 1);
  for (Eigen::Index i = 0; i < k; ++i) {
    const double nrm = M.row(i).norm();
    if (nrm == 0.0) return out;
    A.row(i).head(n) = M.row(i) / nrm;
    A(i, n) = 1.0;
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    A(k + j, j) = 1.0;
    b(k + j) = -1.0;
    A(k + n + j, j) = -1.0;
    b(k + n + j) = -1.0;
  }
  A(k + 2 * n, n) = 1.0;
  b(k + 2 * n) = -1.0;
  Vector c = Vector::Zero(n + 1);
  c(n) = 1.0;
  const LPResult r = lp_max(c, Polytope(std::move(A), std::move(b)));
  if (r.status != LPStatus::Optimal) return out;
  out.margin = r.optimal_value;
  if (r.optimal_value > tol) {
    out.feasible = true;
    out.witness = r.argmax.head(n);
  }
  return out;
}

bool polytope_empty(const Polytope& P, double tol) {
  Polytope relaxed(P.A, (P.b.array() - tol).matrix());
  const LPResult r = lp_max(Vector::Zero(P.dimension()), relaxed);
  if (r.status == LPStatus::Failed) throw NumericalError("polytope_empty: LP failed");
  return r.status == LPStatus::Infeasible;
}

std::optional<ChebyshevBall> chebyshev_center(const Polytope& P, double cap) {
  const Eigen::Index m = P.rows(), n = P.dimension();
  Matrix A(m + 1, n + 1);
  Vector b(m + 1);
  for (Eigen::Index i = 0; i < m; ++i) {
    A.row(i).head(n) = P.A.row(i);
    A(i, n) = P.A.row(i).norm();
    b(i) = P.b(i);
  }
  A.row(m).setZero();
  A(m, n) = 1.0;
  b(m) = -cap;
  Vector c = Vector::Zero(n + 1);
  c(n) = 1.0;
  const LPResult r = lp_max(c, Polytope(std::move(A), std::move(b)));
  if (r.status == LPStatus::Failed) throw NumericalError("chebyshev_center: LP failed");
  if (r.status != LPStatus::Optimal || r.optimal_value < 0.0) return std::nullopt;
  return ChebyshevBall{r.argmax.head(n), r.optimal_value};
}

}  // namespace farpoint
