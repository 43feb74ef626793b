#include <doctest.h>

#include <cmath>
#include <random>

#include "farpoint/errors.hpp"
#include "farpoint/framework1.hpp"
#include "farpoint/framework2.hpp"
#include "farpoint/oracles.hpp"
#include "../support/helpers.hpp"

using namespace farpoint;
using testing_support::uniform_vector;
using testing_support::vec;

namespace {

const FrameworkConfig kCfg{};

Polytope box(const Vector& lo, const Vector& hi) {
  const Eigen::Index n = lo.size();
  Matrix A = Matrix::Zero(2 * n, n);
  Vector b(2 * n);
  for (Eigen::Index k = 0; k < n; ++k) {
    A(k, k) = -1.0;
    b(k) = lo(k);
    A(n + k, k) = 1.0;
    b(n + k) = -hi(k);
  }
  return {A, b};
}

// Regular polygon with vertices on the boundary of the ball intersection,
// found by bisecting h along rays from an interior point.
Polytope inscribed_polygon(std::span<const Ball> balls, const Vector& inner, int vertices) {
  const auto h = build_h_from_balls(balls);
  std::vector<Vector> pts;
  for (int i = 0; i < vertices; ++i) {
    const double t = 2 * M_PI * i / vertices;
    const Vector d = vec({std::cos(t), std::sin(t)});
    double lo = 0.0, hi = 10.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (h(inner + mid * d) <= 0.0 ? lo : hi) = mid;
    }
    pts.push_back(inner + lo * d);
  }
  Matrix A(vertices, 2);
  Vector b(vertices);
  for (int i = 0; i < vertices; ++i) {
    const Vector& p = pts[static_cast<std::size_t>(i)];
    const Vector& q = pts[static_cast<std::size_t>((i + 1) % vertices)];
    const Vector normal = vec({q(1) - p(1), p(0) - q(0)});
    A.row(i) = normal.transpose();
    b(i) = -normal.dot(p);
  }
  return {A, b};
}

// Three unit balls around the origin: bounded level sets of h - f.
std::vector<Ball> three_balls() {
  std::vector<Ball> b;
  for (int i = 0; i < 3; ++i) {
    const double t = 2 * M_PI * i / 3 + 0.3;
    b.emplace_back(vec({0.5 * std::cos(t), 0.5 * std::sin(t)}), 1.0);
  }
  return b;
}

}  // namespace

TEST_CASE("r_bar examples") {
  SUBCASE("constant h - f") {
    std::vector<Ball> b{Ball(vec({0, 0}), 1.0)};
    CHECK(r_bar(h_minus_f_pieces(b, vec({0, 0})), kCfg) == doctest::Approx(1.0).epsilon(1e-8));
  }
  SUBCASE("two unit balls about the origin") {
    std::vector<Ball> b{Ball(vec({-0.5, 0}), 1.0), Ball(vec({0.5, 0}), 1.0)};
    const auto pieces = h_minus_f_pieces(b, vec({0, 0}));
    const double rb = r_bar(pieces, kCfg);
    const auto lp = affine_max_minimum(pieces);
    REQUIRE(lp);
    CHECK(rb * rb == doctest::Approx(-*lp).epsilon(1e-6));
    const auto cls = classify_case(b, vec({0, 0}), kCfg);
    CHECK(rb * rb == doctest::Approx(-cls.value).epsilon(1e-6));
  }
  SUBCASE("unbounded h - f") {
    const std::vector<QuadraticPiece> p{QuadraticPiece(0.0, vec({1, 0}), 0.0)};
    CHECK_THROWS_AS(r_bar(p, kCfg), NumericalError);
    CHECK_FALSE(affine_max_minimum(p).has_value());
  }
}

TEST_CASE("r_bar squared matches the LP minimum on random interior instances") {
  std::mt19937_64 rng(5);
  int checked = 0;
  for (int t = 0; t < 30; ++t) {
    std::vector<Ball> balls;
    for (int i = 0; i < 4; ++i) balls.emplace_back(uniform_vector(rng, 2, -1, 1), 2.0);
    const auto pieces = h_minus_f_pieces(balls, uniform_vector(rng, 2, -0.3, 0.3));
    const auto lp = affine_max_minimum(pieces);
    if (!lp) {
      CHECK_THROWS_AS(r_bar(pieces, kCfg), NumericalError);
      continue;
    }
    if (*lp >= 0.0) continue;
    const double rb = r_bar(pieces, kCfg);
    CHECK(rb * rb == doctest::Approx(-*lp).epsilon(1e-6));
    ++checked;
  }
  CHECK(checked >= 5);
}

TEST_CASE("polytope_inclusion examples") {
  const auto unit = box(vec({0, 0}), vec({1, 1}));
  CHECK(polytope_inclusion(unit, box(vec({-1, -1}), vec({2, 2}))).included);

  const auto r = polytope_inclusion(box(vec({0, 0}), vec({2, 2})), unit);
  CHECK_FALSE(r.included);
  REQUIRE(r.violating_row);
  REQUIRE(r.violation_point);
  CHECK(r.worst_excess == doctest::Approx(1.0));
  // First violated row of the unit box is x_1 <= 1.
  CHECK(*r.violating_row == 2);
  CHECK((*r.violation_point)(0) == doctest::Approx(2.0));

  // Empty inner is contained in anything.
  Matrix A(2, 1);
  A << 1, -1;
  CHECK(polytope_inclusion(Polytope(A, vec({1, 1})), box(vec({5}), vec({6}))).included);
}

TEST_CASE("polytope_inclusion matches vertex checks on random boxes") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int t = 0; t < 50; ++t) {
    const Vector a = vec({u(rng), u(rng)});
    const Vector b = a + vec({std::abs(u(rng)), std::abs(u(rng))});
    const Vector c = vec({u(rng), u(rng)});
    const Vector d = c + vec({std::abs(u(rng)) + 0.5, std::abs(u(rng)) + 0.5});
    const bool expect = (a.array() >= c.array()).all() && (b.array() <= d.array()).all();
    CHECK(polytope_inclusion(box(a, b), box(c, d), 1e-9).included == expect);
  }
}

TEST_CASE("r_star_boundary_case examples") {
  std::vector<Ball> disk{Ball(vec({0, 0}), 1.0)};
  const auto rs = r_star_boundary_case(h_minus_f_pieces(disk, vec({0, 0})), std::nullopt, kCfg);
  CHECK(rs.method == RStarMethod::BoundaryCase);
  CHECK(rs.r_star == doctest::Approx(1.0).epsilon(1e-8));

  // A lens whose h - f minimizer reaches the boundary: squared radius equals the
  // squared distance to the far tip.
  std::vector<Ball> lens{Ball(vec({0, 0.6}), 1.0), Ball(vec({0, -0.6}), 1.0)};
  const Vector C = vec({0, 0});
  const auto cls = classify_case(lens, C, kCfg);
  if (cls.label == CaseLabel::OnBoundary) {
    const auto r = r_star_boundary_case(h_minus_f_pieces(lens, C), cls.boundary_point, kCfg);
    const auto oracle = sample_farthest(lens, C, 100000);
    CHECK(r.r_star * r.r_star == doctest::Approx(oracle.value).epsilon(1e-4));
  }
}

TEST_CASE("r_star_inclusion examples") {
  const auto b = three_balls();
  const Vector C = vec({0.05, -0.02});
  REQUIRE(classify_case(b, C, kCfg).label == CaseLabel::StrictlyInterior);
  const auto pieces = h_minus_f_pieces(b, C);

  SUBCASE("container equal to P_0 gives zero") {
    const auto rs = r_star_inclusion(pieces, polytope_family(pieces, 0.0), kCfg);
    CHECK(rs.r_star == 0.0);
    CHECK(rs.method == RStarMethod::InclusionBisection);
  }
  SUBCASE("inscribed polygon container recovers the farthest distance") {
    const auto poly = inscribed_polygon(b, C, 720);
    const auto rs = r_star_inclusion(pieces, poly, kCfg);
    const auto oracle = sample_farthest(b, C, 10000);
    CHECK(rs.r_star * rs.r_star == doctest::Approx(oracle.value).epsilon(1e-3));
    REQUIRE(rs.touching_point);
    CHECK(poly.max_violation(*rs.touching_point) <= 1e-6);
  }
}

TEST_CASE("r_star_inclusion is monotone in the container") {
  const auto pieces = h_minus_f_pieces(three_balls(), vec({0, 0}));
  const auto wide = box(vec({-2, -2}), vec({2, 2}));
  const auto narrow = box(vec({-0.5, -0.5}), vec({0.5, 0.5}));
  const double rw = r_star_inclusion(pieces, wide, kCfg).r_star;
  const double rn = r_star_inclusion(pieces, narrow, kCfg).r_star;
  CHECK(rw <= rn + 1e-8);
  CHECK(rn <= r_bar(pieces, kCfg) + 1e-8);
}

TEST_CASE("r_star_inclusion refuses containers that never hold the level sets") {
  // Two balls: the level sets of h - f are unbounded strips.
  std::vector<Ball> b{Ball(vec({-0.5, 0}), 1.0), Ball(vec({0.5, 0}), 1.0)};
  const auto pieces = h_minus_f_pieces(b, vec({0, 0}));
  CHECK_THROWS_AS(r_star_inclusion(pieces, box(vec({-1, -1}), vec({1, 1})), kCfg), NumericalError);
}
