#include "farpoint/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace farpoint {

namespace {

void check_dimension(Eigen::Index expected, Eigen::Index got, const char* what) {
  if (expected != got) {
    throw InstanceError(std::string(what) + ": dimension mismatch (expected " +
                        std::to_string(expected) + ", got " + std::to_string(got) + ")");
  }
}

}  // namespace

Ball::Ball(Vector c, double r) : center(std::move(c)), radius(r) {
  if (!(radius >= 0.0) || !std::isfinite(radius)) {
    throw InstanceError("ball radius must be finite and nonnegative");
  }
  if (center.size() == 0) {
    throw InstanceError("ball center must have positive dimension");
  }
}

double Ball::power(const Vector& x) const {
  check_dimension(center.size(), x.size(), "Ball::power");
  return (x - center).squaredNorm() - radius * radius;
}

bool Ball::contains(const Vector& x, double tol) const { return power(x) <= tol; }

QuadraticPiece::QuadraticPiece(double q, Vector lin, double c)
    : quad_coeff(q), linear(std::move(lin)), constant(c) {
  if (quad_coeff != 0.0 && quad_coeff != 1.0) {
    throw InstanceError("quadratic piece coefficient must be 0 or 1");
  }
}

double QuadraticPiece::value(const Vector& x) const {
  check_dimension(linear.size(), x.size(), "QuadraticPiece::value");
  return quad_coeff * x.squaredNorm() + linear.dot(x) + constant;
}

Vector QuadraticPiece::gradient(const Vector& x) const {
  check_dimension(linear.size(), x.size(), "QuadraticPiece::gradient");
  return 2.0 * quad_coeff * x + linear;
}

QuadraticPiece squared_distance_piece(const Vector& center, double offset) {
  return {1.0, -2.0 * center, center.squaredNorm() + offset};
}

PiecewiseMaxFunction::PiecewiseMaxFunction(std::vector<QuadraticPiece> pieces)
    : pieces_(std::move(pieces)), dimension_(0) {
  if (pieces_.empty()) throw InstanceError("piecewise-max function needs at least one piece");
  dimension_ = pieces_.front().dimension();
  for (const auto& p : pieces_) check_dimension(dimension_, p.dimension(), "PiecewiseMaxFunction");
}

bool PiecewiseMaxFunction::is_affine() const {
  return std::all_of(pieces_.begin(), pieces_.end(),
                     [](const QuadraticPiece& p) { return p.is_affine(); });
}

bool PiecewiseMaxFunction::is_strongly_convex() const {
  return std::all_of(pieces_.begin(), pieces_.end(),
                     [](const QuadraticPiece& p) { return p.quad_coeff == 1.0; });
}

PieceEvaluation PiecewiseMaxFunction::evaluate(const Vector& x) const {
  check_dimension(dimension_, x.size(), "eval_piecewise");
  const double sq = x.squaredNorm();
  PieceEvaluation best{-std::numeric_limits<double>::infinity(), 0};
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const auto& p = pieces_[i];
    const double v = p.quad_coeff * sq + p.linear.dot(x) + p.constant;
    if (v > best.value) best = {v, i};
  }
  return best;
}

Polytope::Polytope(Matrix a, Vector rhs) : A(std::move(a)), b(std::move(rhs)) {
  if (A.rows() != b.size()) throw InstanceError("polytope: row count of A must equal length of b");
}

double Polytope::max_violation(const Vector& x) const {
  check_dimension(A.cols(), x.size(), "Polytope");
  if (A.rows() == 0) return -std::numeric_limits<double>::infinity();
  return (A * x + b).maxCoeff();
}

bool Polytope::contains(const Vector& x, double tol) const { return max_violation(x) <= tol; }

void FrameworkConfig::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw InstanceError(std::string(name) + " must be positive");
  };
  positive(k_f, "k_f");
  positive(k_h, "k_h");
  positive(tol_bisection, "tol_bisection");
  positive(tol_solver, "tol_solver");
  positive(tol_membership, "tol_membership");
  if (max_iterations <= 0) throw InstanceError("max_iterations must be positive");
  if (restarts <= 0) throw InstanceError("restarts must be positive");
}

PieceEvaluation eval_piecewise(const PiecewiseMaxFunction& pm, const Vector& x) {
  return pm.evaluate(x);
}

Vector subgradient(const PiecewiseMaxFunction& pm, const Vector& x) {
  const auto e = pm.evaluate(x);
  return pm.piece(e.active_index).gradient(x);
}

void require_same_dimension(std::span<const Ball> balls) {
  if (balls.empty()) throw InstanceError("at least one ball is required");
  const auto n = balls.front().dimension();
  for (const auto& b : balls) check_dimension(n, b.dimension(), "balls");
}

PiecewiseMaxFunction build_h_from_balls(std::span<const Ball> balls) {
  require_same_dimension(balls);
  std::vector<QuadraticPiece> pieces;
  pieces.reserve(balls.size());
  for (const auto& b : balls) pieces.push_back(squared_distance_piece(b.center, -b.radius * b.radius));
  return PiecewiseMaxFunction(std::move(pieces));
}

std::vector<QuadraticPiece> difference_pieces(const PiecewiseMaxFunction& h,
                                              const QuadraticPiece& f) {
  check_dimension(h.dimension(), f.dimension(), "difference_pieces");
  std::vector<QuadraticPiece> out;
  out.reserve(h.size());
  for (const auto& p : h.pieces()) {
    const double q = p.quad_coeff - f.quad_coeff;
    if (q != 0.0 && q != 1.0) {
      throw InstanceError("h - f leaves a quadratic coefficient outside {0, 1}");
    }
    out.emplace_back(q, p.linear - f.linear, p.constant - f.constant);
  }
  return out;
}

PiecewiseMaxFunction build_g(const PiecewiseMaxFunction& f, const PiecewiseMaxFunction& h,
                             double R_term, const FrameworkConfig& cfg) {
  if (cfg.k_f != 1.0 || cfg.k_h != 1.0) {
    throw InstanceError("build_g supports k_f = k_h = 1 only (exact quadratic cancellation)");
  }
  if (f.size() != 1) throw InstanceError("build_g expects f to be a single quadratic piece");
  auto pieces = difference_pieces(h, f.piece(0));
  for (auto& p : pieces) p.constant += R_term;
  for (const auto& p : h.pieces()) pieces.push_back(p);
  return PiecewiseMaxFunction(std::move(pieces));
}

std::vector<QuadraticPiece> h_minus_f_pieces(std::span<const Ball> balls, const Vector& C) {
  require_same_dimension(balls);
  check_dimension(balls.front().dimension(), C.size(), "h_minus_f_pieces");
  std::vector<QuadraticPiece> out;
  out.reserve(balls.size());
  for (const auto& b : balls) {
    const Vector diff = b.center - C;
    // ||C_k||^2 - ||C||^2 written as a product to avoid cancellation for far centers.
    const double constant = diff.dot(b.center + C) - b.radius * b.radius;
    out.emplace_back(0.0, -2.0 * diff, constant);
  }
  return out;
}

Polytope polytope_family(std::span<const QuadraticPiece> pieces, double R) {
  if (pieces.empty()) throw InstanceError("polytope_family needs at least one piece");
  if (!(R >= 0.0)) throw InstanceError("polytope_family requires R >= 0");
  const auto n = pieces.front().dimension();
  Matrix A(static_cast<Eigen::Index>(pieces.size()), n);
  Vector b(static_cast<Eigen::Index>(pieces.size()));
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const auto& p = pieces[i];
    if (!p.is_affine()) throw InstanceError("polytope_family: non-affine piece present");
    check_dimension(n, p.dimension(), "polytope_family");
    A.row(static_cast<Eigen::Index>(i)) = p.linear.transpose();
    b(static_cast<Eigen::Index>(i)) = p.constant + R * R;
  }
  return {std::move(A), std::move(b)};
}

Box intersection_bounding_box(std::span<const Ball> balls) {
  require_same_dimension(balls);
  const auto n = balls.front().dimension();
  Box box{Vector::Constant(n, -std::numeric_limits<double>::infinity()),
          Vector::Constant(n, std::numeric_limits<double>::infinity())};
  for (const auto& b : balls) {
    box.lower = box.lower.cwiseMax((b.center.array() - b.radius).matrix());
    box.upper = box.upper.cwiseMin((b.center.array() + b.radius).matrix());
  }
  return box;
}

}  // namespace farpoint
