#include <doctest.h>

#include <cmath>
#include <random>

#include "farpoint/convex_solver.hpp"
#include "../support/helpers.hpp"

using namespace farpoint;
using testing_support::uniform_vector;
using testing_support::vec;

namespace {

const FrameworkConfig kCfg{};

Polytope unit_square() {
  Matrix A(4, 2);
  A << -1, 0, 0, -1, 1, 0, 0, 1;
  return {A, vec({0, 0, -1, -1})};
}

}  // namespace

TEST_CASE("minimize_unconstrained on simple functions") {
  PiecewiseMaxFunction sq({QuadraticPiece(1.0, vec({0, 0}), 0.0)});
  std::vector<Vector> starts{vec({3, -2})};
  auto r = minimize_unconstrained(sq, kCfg, starts);
  CHECK(r.converged);
  CHECK(r.minimizer.norm() < 1e-6);
  CHECK(std::abs(r.value) < 1e-6);
  CHECK_FALSE(r.nonsingleton);

  PiecewiseMaxFunction v({QuadraticPiece(0.0, vec({1}), -1.0), QuadraticPiece(0.0, vec({-1}), -1.0)});
  std::vector<Vector> s1{vec({5})};
  r = minimize_unconstrained(v, kCfg, s1);
  CHECK(r.value == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(std::abs(r.minimizer(0)) < 1e-6);
}

TEST_CASE("minimize_unconstrained on g with R_term = 2 matches a fine scan") {
  std::vector<Ball> one{Ball(vec({0, 0}), 1.0)};
  const auto h = build_h_from_balls(one);
  PiecewiseMaxFunction f({squared_distance_piece(vec({0, 0}))});
  const auto g = build_g(f, h, 2.0, kCfg);
  std::vector<Vector> starts{vec({1.5, 0.3})};
  const auto r = minimize_unconstrained(g, kCfg, starts);
  // g = max{2 - ||x||^2, 0} + ||x||^2 - 1 has minimum 1 on the disk ||x||^2 <= 2.
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(r.nonsingleton);
  double best = 1e300;
  for (double x = -2; x <= 2; x += 1e-2)
    for (double y = -2; y <= 2; y += 1e-2) best = std::min(best, g(vec({x, y})));
  CHECK(std::abs(best - r.value) < 1e-3);
}

TEST_CASE("unbounded objective is reported") {
  PiecewiseMaxFunction lin({QuadraticPiece(0.0, vec({1, 0}), 0.0)});
  std::vector<Vector> starts{vec({0, 0})};
  const auto r = minimize_unconstrained(lin, kCfg, starts);
  CHECK(r.unbounded);
  CHECK_FALSE(r.converged);
}

TEST_CASE("minimize_with_level: linear over the disk") {
  PiecewiseMaxFunction obj({QuadraticPiece(0.0, vec({-1, 0}), 0.0)});
  PiecewiseMaxFunction disk({QuadraticPiece(1.0, vec({0, 0}), -1.0)});
  std::vector<Vector> starts{vec({0, 0})};
  const auto r = minimize_with_level(obj, disk, 0.0, kCfg, starts);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK((r.minimizer - vec({1, 0})).norm() < 1e-4);
  CHECK(r.active_constraint);
  CHECK(disk(r.minimizer) <= kCfg.tol_membership);
  CHECK_FALSE(r.nonsingleton);
}

TEST_CASE("minimize_with_level: phase I from an infeasible start, empty interior") {
  PiecewiseMaxFunction obj({QuadraticPiece(0.0, vec({0, 1}), 0.0)});
  PiecewiseMaxFunction disk({squared_distance_piece(vec({5, 5}), -1.0)});
  std::vector<Vector> starts{vec({0, 0})};
  const auto r = minimize_with_level(obj, disk, 0.0, kCfg, starts);
  CHECK(r.value == doctest::Approx(4.0).epsilon(1e-9));

  PiecewiseMaxFunction point({squared_distance_piece(vec({5, 5}), 0.0)});
  CHECK_THROWS_AS(minimize_with_level(obj, point, 0.0, kCfg, starts), PreconditionError);
}

TEST_CASE("minimize_with_level: two-ball h - f has an interior minimizer") {
  std::vector<Ball> balls{Ball(vec({-0.5, 0}), 1.0), Ball(vec({0.5, 0}), 1.0)};
  const PiecewiseMaxFunction hf(h_minus_f_pieces(balls, vec({0, 0})));
  const auto h = build_h_from_balls(balls);
  std::vector<Vector> starts{vec({0, 0})};
  const auto r = minimize_with_level(hf, h, 1.0, kCfg, starts);
  CHECK(r.converged);
  CHECK(h(r.minimizer) < 0.0);
  double best = 1e300;
  for (double x = -2; x <= 2; x += 1e-2)
    for (double y = -2; y <= 2; y += 1e-2) {
      const Vector p = vec({x, y});
      if (h(p) <= 1.0) best = std::min(best, hf(p));
    }
  CHECK(r.value <= best + 1e-9);
  CHECK(r.value >= best - 1e-2);
}

TEST_CASE("infinite level agrees with unconstrained") {
  std::mt19937_64 rng(2);
  for (int inst = 0; inst < 10; ++inst) {
    std::vector<Ball> balls;
    for (int k = 0; k < 3; ++k) balls.emplace_back(uniform_vector(rng, 2, -1, 1), 1.5);
    const auto h = build_h_from_balls(balls);
    PiecewiseMaxFunction f({squared_distance_piece(uniform_vector(rng, 2, -2, 2))});
    const auto g = build_g(f, h, 1.0, kCfg);
    std::vector<Vector> starts{vec({0, 0})};
    const auto a = minimize_unconstrained(g, kCfg, starts);
    const auto b = minimize_with_level(g, h, std::numeric_limits<double>::infinity(), kCfg, starts);
    CHECK(std::abs(a.value - b.value) < 1e-8);
  }
}

TEST_CASE("solver certificate against random feasible probes") {
  std::mt19937_64 rng(9);
  for (int inst = 0; inst < 10; ++inst) {
    std::vector<Ball> balls;
    for (int k = 0; k < 4; ++k) balls.emplace_back(uniform_vector(rng, 3, -0.5, 0.5), 1.2);
    const auto h = build_h_from_balls(balls);
    const PiecewiseMaxFunction hf(h_minus_f_pieces(balls, uniform_vector(rng, 3, -3, 3)));
    std::vector<Vector> starts{Vector::Zero(3)};
    const auto r = minimize_with_level(hf, h, 1.0, kCfg, starts);
    CHECK(h(r.minimizer) <= 1.0 + kCfg.tol_membership);
    for (int s = 0; s < 1000; ++s) {
      const Vector y = uniform_vector(rng, 3, -2, 2);
      if (h(y) <= 1.0) CHECK(r.value <= hf(y) + kCfg.tol_solver);
    }
  }
}

TEST_CASE("lp_max basics") {
  auto r = lp_max(vec({1, 0}), unit_square());
  REQUIRE(r.status == LPStatus::Optimal);
  CHECK(r.optimal_value == doctest::Approx(1.0));

  Matrix A(3, 2);
  A << 1, 1, -1, 0, 0, -1;
  r = lp_max(vec({1, 1}), Polytope(A, vec({-1, 0, 0})));
  REQUIRE(r.status == LPStatus::Optimal);
  CHECK(r.optimal_value == doctest::Approx(1.0));

  Matrix B(2, 1);
  B << 1, -1;
  r = lp_max(vec({1}), Polytope(B, vec({1, 0})));
  CHECK(r.status == LPStatus::Infeasible);

  Matrix U(1, 2);
  U << 1, 0;
  r = lp_max(vec({0, 1}), Polytope(U, vec({0})));
  CHECK(r.status == LPStatus::Unbounded);
}

TEST_CASE("lp_max value matches vertex and is stable under redundant rows") {
  std::mt19937_64 rng(4);
  for (int inst = 0; inst < 50; ++inst) {
    const Eigen::Index n = 2 + inst % 4;
    const Eigen::Index m = 2 * n + 3;
    Matrix A(m + 2 * n, n);
    Vector b(m + 2 * n);
    for (Eigen::Index i = 0; i < m; ++i) {
      A.row(i) = uniform_vector(rng, n, -1, 1).transpose();
      b(i) = -uniform_vector(rng, 1, 0.1, 2)(0);
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      A.row(m + j).setZero();
      A(m + j, j) = 1.0;
      b(m + j) = -3.0;
      A.row(m + n + j).setZero();
      A(m + n + j, j) = -1.0;
      b(m + n + j) = -3.0;
    }
    const Polytope P(A, b);
    const Vector c = uniform_vector(rng, n, -1, 1);
    const auto r = lp_max(c, P);
    REQUIRE(r.status == LPStatus::Optimal);
    CHECK(std::abs(r.optimal_value - c.dot(r.argmax)) < 1e-8);
    CHECK(P.contains(r.argmax, 1e-7));
    for (int s = 0; s < 200; ++s) {
      const Vector y = uniform_vector(rng, n, -3, 3);
      if (P.contains(y)) CHECK(c.dot(y) <= r.optimal_value + 1e-9);
    }
    Matrix A2(P.rows() + 1, n);
    A2 << A, A.row(0);
    Vector b2(P.rows() + 1);
    b2 << b, b(0) - 1.0;
    const auto r2 = lp_max(c, Polytope(A2, b2));
    REQUIRE(r2.status == LPStatus::Optimal);
    CHECK(std::abs(r2.optimal_value - r.optimal_value) < 1e-8);
  }
}

TEST_CASE("lp_feasible_strict") {
  Matrix M(2, 1);
  M << 1, -1;
  CHECK_FALSE(lp_feasible_strict(M).feasible);

  Matrix N(1, 1);
  N << -1;
  const auto r = lp_feasible_strict(N);
  REQUIRE(r.feasible);
  CHECK((*r.witness)(0) > 0.0);

  // rows [C^T, -1] and [-C_k^T, 1] for C = (2,0), centers (0,0), (0,1)
  Matrix E(3, 3);
  E << 2, 0, -1, 0, 0, 1, 0, -1, 1;
  const auto e = lp_feasible_strict(E);
  REQUIRE(e.feasible);
  CHECK(((E * *e.witness).array() < 0.0).all());

  std::mt19937_64 rng(8);
  for (int inst = 0; inst < 100; ++inst) {
    Matrix R(6, 3);
    for (int i = 0; i < 6; ++i) R.row(i) = uniform_vector(rng, 3, -1, 1).transpose();
    bool prev = true;
    for (int k = 1; k <= 6; ++k) {
      const bool cur = lp_feasible_strict(R.topRows(k)).feasible;
      CHECK(!(cur && !prev));
      prev = cur;
    }
  }
}

TEST_CASE("polytope_empty and chebyshev_center") {
  CHECK_FALSE(polytope_empty(unit_square()));
  Matrix A(2, 1);
  A << 1, -1;
  CHECK(polytope_empty(Polytope(A, vec({1, 2}))));
  const auto cc = chebyshev_center(unit_square());
  REQUIRE(cc.has_value());
  CHECK(cc->radius == doctest::Approx(0.5));
  CHECK((cc->center - vec({0.5, 0.5})).norm() < 1e-9);
}

TEST_CASE("project_onto_polytope") {
  const auto p = project_onto_polytope(unit_square(), vec({2, 0.5}), vec({0.5, 0.5}));
  CHECK((p - vec({1, 0.5})).norm() < 1e-6);
}
