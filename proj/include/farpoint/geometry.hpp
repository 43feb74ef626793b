#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <vector>

#include "farpoint/errors.hpp"

namespace farpoint {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Closed Euclidean ball {x : ||x - center|| <= radius}.
struct Ball {
  Vector center;
  double radius = 0.0;

  Ball() = default;
  Ball(Vector c, double r);

  Eigen::Index dimension() const { return center.size(); }
  /// ||x - center||^2 - radius^2; nonpositive inside the ball.
  double power(const Vector& x) const;
  bool contains(const Vector& x, double tol = 0.0) const;
};

/// q * ||x||^2 + linear^T x + constant with q in {0, 1}.
struct QuadraticPiece {
  double quad_coeff = 0.0;
  Vector linear;
  double constant = 0.0;

  QuadraticPiece() = default;
  QuadraticPiece(double q, Vector lin, double c);

  Eigen::Index dimension() const { return linear.size(); }
  bool is_affine() const { return quad_coeff == 0.0; }
  double value(const Vector& x) const;
  Vector gradient(const Vector& x) const;
};

/// ||x - center||^2 + offset as an expanded piece.
QuadraticPiece squared_distance_piece(const Vector& center, double offset = 0.0);

struct PieceEvaluation {
  double value;
  std::size_t active_index;
};

/// Pointwise maximum of a nonempty list of quadratic-or-affine pieces.
class PiecewiseMaxFunction {
 public:
  explicit PiecewiseMaxFunction(std::vector<QuadraticPiece> pieces);

  Eigen::Index dimension() const { return dimension_; }
  std::span<const QuadraticPiece> pieces() const { return pieces_; }
  std::size_t size() const { return pieces_.size(); }
  const QuadraticPiece& piece(std::size_t i) const { return pieces_[i]; }

  bool is_affine() const;
  /// Every piece has quad_coeff == 1.
  bool is_strongly_convex() const;

  PieceEvaluation evaluate(const Vector& x) const;
  double operator()(const Vector& x) const { return evaluate(x).value; }

 private:
  std::vector<QuadraticPiece> pieces_;
  Eigen::Index dimension_;
};

/// {x : A x + b <= 0}.
struct Polytope {
  Matrix A;
  Vector b;

  Polytope() = default;
  Polytope(Matrix a, Vector rhs);

  Eigen::Index rows() const { return A.rows(); }
  Eigen::Index dimension() const { return A.cols(); }
  /// max_i (A_i x + b_i); nonpositive inside.
  double max_violation(const Vector& x) const;
  bool contains(const Vector& x, double tol = 0.0) const;
};

struct FrameworkConfig {
  double k_f = 1.0;
  double k_h = 1.0;
  double tol_bisection = 1e-9;
  double tol_solver = 1e-10;
  double tol_membership = 1e-7;
  int max_iterations = 200;
  int restarts = 6;
  std::uint64_t seed = 20240611;

  /// Throws InstanceError on nonpositive tolerances or weights.
  void validate() const;
};

PieceEvaluation eval_piecewise(const PiecewiseMaxFunction& pm, const Vector& x);

/// Gradient of the first active piece; a subgradient of the convex max.
Vector subgradient(const PiecewiseMaxFunction& pm, const Vector& x);

/// h(x) = max_k ||x - C_k||^2 - r_k^2, so that {h <= 0} is the ball intersection.
PiecewiseMaxFunction build_h_from_balls(std::span<const Ball> balls);

/// Max-of-pieces form of max{R - f, 0} + h for f a single piece.
///
/// The result holds the pieces h_k - f + R_term (affine when the quadratic
/// terms cancel) followed by the unchanged pieces of h. Only k_f = k_h = 1 is
/// supported; every resulting piece must keep quad_coeff in {0, 1}.
PiecewiseMaxFunction build_g(const PiecewiseMaxFunction& f, const PiecewiseMaxFunction& h,
                             double R_term, const FrameworkConfig& cfg);

/// Pieces of h - f with f a single piece, piece by piece.
std::vector<QuadraticPiece> difference_pieces(const PiecewiseMaxFunction& h,
                                              const QuadraticPiece& f);

/// Affine pieces whose max equals h(x) - ||x - C||^2 for h built from balls.
std::vector<QuadraticPiece> h_minus_f_pieces(std::span<const Ball> balls, const Vector& C);

/// {x : (h - f)(x) <= -R^2} for affine pieces of h - f.
Polytope polytope_family(std::span<const QuadraticPiece> pieces, double R);

/// Axis-aligned box containing the intersection of the balls.
struct Box {
  Vector lower;
  Vector upper;
};
Box intersection_bounding_box(std::span<const Ball> balls);

void require_same_dimension(std::span<const Ball> balls);

}  // namespace farpoint
