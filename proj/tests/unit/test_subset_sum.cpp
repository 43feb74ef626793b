#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "farpoint/errors.hpp"
#include "farpoint/oracles.hpp"
#include "farpoint/subset_sum.hpp"
#include "../support/helpers.hpp"

using namespace farpoint;
using testing_support::uniform_vector;
using testing_support::vec;

namespace {

const FrameworkConfig kCfg{};

SubsetSumInstance random_integer_instance(std::mt19937_64& rng, int n, int bound) {
  std::uniform_int_distribution<int> d(-bound, bound);
  Vector S(n);
  for (int i = 0; i < n; ++i) {
    int v = 0;
    while (v == 0) v = d(rng);
    S(i) = v;
  }
  return SubsetSumInstance(S);
}

// Mixed signs keep the hyperplane through the open circumscribed ball.
SubsetSumInstance random_mixed_instance(std::mt19937_64& rng, int n) {
  while (true) {
    auto inst = random_integer_instance(rng, n, 20);
    if ((inst.S.array() > 0).any() && (inst.S.array() < 0).any()) return inst;
  }
}

}  // namespace

TEST_CASE("instance validation and exact residuals") {
  CHECK_THROWS_AS(SubsetSumInstance{Vector()}, InstanceError);
  CHECK_THROWS_AS(SubsetSumInstance{vec({1, NAN})}, InstanceError);
  const SubsetSumInstance a(vec({3, -1, -2, 5}));
  CHECK(a.is_integral());
  CHECK(subset_residual(a, {0, 1, 2}) == 0.0);
  CHECK(verifies_zero_sum(a, {0, 1, 2}));
  CHECK_FALSE(verifies_zero_sum(a, {}));
  CHECK_FALSE(verifies_zero_sum(a, {3}));
  CHECK_THROWS_AS(subset_residual(a, {4}), InstanceError);
  CHECK_FALSE(SubsetSumInstance(vec({0.5, -0.5})).is_integral());
}

TEST_CASE("build_search_polytope") {
  const SubsetSumInstance inst(vec({1, 2, -3}));
  const auto P = build_search_polytope(inst);
  CHECK(P.rows() == 8);
  CHECK(P.contains(vec({1, 1, 1})));
  CHECK(P.contains(vec({0.5, 0, 0.5})));
  CHECK_FALSE(P.contains(vec({0, 0, 0})));
  CHECK_FALSE(P.contains(vec({1, 1, 0})));
  CHECK_FALSE(P.contains(vec({1.1, 0, 1})));
  // Every zero-sum corner except the origin lies in P.
  for (unsigned m = 1; m < 8; ++m) {
    const Vector x = vec({double(m & 1), double(m >> 1 & 1), double(m >> 2 & 1)});
    CHECK(P.contains(x) == (inst.S.dot(x) <= 0));
  }
}

TEST_CASE("disk cover geometry") {
  const SubsetSumInstance inst(vec({1, 2, -3}));
  const auto c = build_disk_cover(inst, 4.0, 3.0);
  CHECK(c.hypercube_disks.size() == 6);
  CHECK(c.balls().size() == 8);
  const double n = 3;
  const double sg = inst.S.sum() / inst.S.norm();
  // Foot point lies on the hyperplane and is the projection of the center.
  CHECK(std::abs(inst.S.dot(c.P_s)) < 1e-12);
  CHECK(c.r_tilde_s * c.r_tilde_s == doctest::Approx(n / 4 - sg * sg / 4));
  CHECK((c.P_s - Vector::Constant(3, 0.5)).norm() <= std::sqrt(n) / 2);
  CHECK(c.r_tilde_h * c.r_tilde_h == doctest::Approx(0.5 - 1 / (4 * n)).epsilon(1e-15));
  CHECK(std::abs(c.P_h.sum() - 0.5) < 1e-15);
  CHECK((c.C_query - (Vector::Constant(3, 0.5) - 1.5 * inst.S / inst.S.norm())).norm() < 1e-15);

  CHECK_THROWS_AS(build_disk_cover(inst, 0.0, 1.0), InstanceError);
  CHECK_THROWS_AS(build_disk_cover(inst, 1.0, 1.0, 0.5), InstanceError);
  // All entries equal: the hyperplane only touches the ball at the origin.
  CHECK_THROWS_AS(build_disk_cover(SubsetSumInstance(vec({2, 2, 2, 2})), 1.0, 1.0), ConstructionError);
}

TEST_CASE("corner exactness") {
  SUBCASE("n = 2") {
    for (double rho : {1.0, 2.5, 10.0, 100.0}) {
      const SubsetSumInstance inst(vec({1, -1}));
      CHECK(corner_exactness_check(build_disk_cover(inst, rho, rho), inst) <= 1e-9);
    }
  }
  SUBCASE("n = 3 includes the origin") {
    const SubsetSumInstance inst(vec({1, 2, -3}));
    const auto c = build_disk_cover(inst, 5.0, 5.0);
    CHECK(std::abs((Vector::Zero(3) - c.s_disk.center).norm() - c.s_disk.radius) <= 1e-9);
    CHECK(std::abs((vec({1, 1, 1}) - c.s_disk.center).norm() - c.s_disk.radius) <= 1e-9);
    CHECK(corner_exactness_check(c, inst) <= 1e-9);
  }
  SUBCASE("n = 1 hypercube disks") {
    CHECK(hypercube_corner_error(build_hypercube_disks(1, 3.0), 1) <= 1e-12);
    // The hyperplane disk degenerates in one dimension.
    CHECK_THROWS_AS(build_disk_cover(SubsetSumInstance(vec({2})), 1.0, 1.0), ConstructionError);
  }
  SUBCASE("random instances") {
    std::mt19937_64 rng(17);
    for (int n = 2; n <= 8; ++n) {
      const auto inst = random_mixed_instance(rng, n);
      CHECK(corner_exactness_check(build_disk_cover(inst, 7.0, 7.0), inst) <= 1e-9);
    }
  }
  SUBCASE("refuses large n") {
    const SubsetSumInstance inst(Vector::LinSpaced(21, -10, 10));
    CHECK_THROWS_AS(corner_exactness_check(build_disk_cover(inst, 1.0, 1.0), inst), InstanceError);
  }
}

TEST_CASE("cover contains the hypercube and the search polytope") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0, 1);
  for (int t = 0; t < 5; ++t) {
    const auto inst = random_mixed_instance(rng, 3 + t % 2);
    const double rho = 2 * estimate_rho_bar(inst) + 1;
    const auto c = build_disk_cover(inst, rho, rho);
    const auto h = build_h_from_balls(c.balls());
    const auto P = build_search_polytope(inst);
    const Vector mid = Vector::Constant(inst.n(), 0.5);
    for (int s = 0; s < 2000; ++s) {
      Vector x(inst.n());
      for (auto& v : x) v = u(rng);
      if (P.contains(x)) CHECK(h(x) <= 1e-9);
      if (h(x) <= 0) CHECK((x - mid).norm() <= std::sqrt(double(inst.n())) / 2 + 1e-7);
    }
  }
}

TEST_CASE("estimate_rho_bar") {
  SUBCASE("balanced pair matches a parameter sweep") {
    const SubsetSumInstance inst(vec({1, -1}));
    const double rb = estimate_rho_bar(inst);
    CHECK(rb > 0.0);
    CHECK(rb <= 1e-4);
  }
  SUBCASE("sweep agrees on skewed instances") {
    for (const auto& S : {vec({3, -1}), vec({5, 1, -2}), vec({4, 4, -1, 2})}) {
      const SubsetSumInstance inst(S);
      const double rb = estimate_rho_bar(inst);
      const double sg = S.sum() / S.norm();
      // Direct sweep on the two conditions that can bind.
      double sweep = 0;
      for (double rho = 0; rho < 10; rho += 1e-5) {
        const auto c = build_disk_cover(inst, std::max(rho, 1e-9), 0.0);
        if (c.s_disk.radius * c.s_disk.radius >= S.size() / 4.0 && c.s_disk.center.dot(S) < 0) {
          sweep = rho;
          break;
        }
      }
      CHECK(rb / 1.01 == doctest::Approx(std::max(sweep, 1e-6)).epsilon(1e-4));
      CHECK(rb >= sg);
    }
  }
  SUBCASE("hypercube radius condition never binds") {
    for (int n = 1; n < 10; ++n) {
      for (double rho : {0.0, 0.1, 1.0}) {
        const double r2 = (0.5 + rho) * (0.5 + rho) + (n - 1) / 4.0;
        CHECK(r2 >= n / 4.0);
      }
    }
  }
}

TEST_CASE("cap gap and rho_for_delta") {
  CHECK(cap_gap(0.0, 1.0) == doctest::Approx(1.0));
  CHECK(gap_offset(1.0, 1.0) == doctest::Approx(0.0));
  CHECK(gap_offset(1.0, 0.1) == doctest::Approx(4.95));
  CHECK(cap_gap(gap_offset(1.0, 0.1), 1.0) == doctest::Approx(0.1));
  CHECK(cap_gap(gap_offset(2.0, 0.05), 2.0) <= 0.05 + 1e-12);
  CHECK_THROWS_AS(gap_offset(1.0, 0.0), InstanceError);
  const SubsetSumInstance inst(vec({2, -1, 3, -4}));
  CHECK_THROWS_AS(rho_for_delta(inst, -1.0), InstanceError);
  const double r1 = rho_for_delta(inst, 0.1);
  const double r2 = rho_for_delta(inst, 0.01);
  CHECK(r2 > r1);
  CHECK(r1 >= estimate_rho_bar(inst));
}

TEST_CASE("hat_R") {
  CHECK(hat_R(0.7, 1.0, 5.0, 3) == 0.7);
  CHECK(hat_R(1.0, 2.0, 2.0, 4) == doctest::Approx(std::sqrt(3.0)));
  CHECK_THROWS_AS(hat_R(0.0, 2.0, 0.0, 4), InstanceError);
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(0, 10);
  for (int i = 0; i < 100; ++i) {
    const double R = u(rng);
    CHECK(hat_R(R, 1.0, u(rng), 1 + i % 9) == R);
  }
}

TEST_CASE("scaled polytope equivalence") {
  const SubsetSumInstance inst(vec({1, -1}));
  CHECK(scaled_polytope_equivalence(inst, 3.0, 2.0, 1.0, 0.5) == 0.0);
  CHECK(scaled_polytope_equivalence(inst, 3.0, 2.0, 1.5, 0.5) <= 1e-9);

  // Same membership in both systems.
  const auto base = build_disk_cover(inst, 3.0, 2.0, 1.0);
  const auto scaled = build_disk_cover(inst, 3.0, 2.0, 1.5);
  const auto P1 = polytope_family(h_minus_f_pieces(base.balls(), base.C_query), 0.5);
  const auto P2 = polytope_family(h_minus_f_pieces(scaled.balls(), scaled.C_query), hat_R(0.5, 1.5, 2.0, 2));
  std::mt19937_64 rng(31);
  int agree = 0;
  for (int s = 0; s < 2000; ++s) {
    const Vector x = uniform_vector(rng, 2, -1, 2);
    const double v = P1.max_violation(x);
    if (std::abs(v) < 1e-9) continue;
    agree += (v <= 0) == (P2.max_violation(x) <= 0);
  }
  CHECK(agree >= 1990);
}

TEST_CASE("round_to_vertex") {
  auto r = round_to_vertex(vec({0.98, 0.02}));
  CHECK(r.binary == std::vector<int>{1, 0});
  CHECK(r.residual == doctest::Approx(0.02));
  r = round_to_vertex(vec({0.5, 0.2}));
  CHECK(r.binary == std::vector<int>{1, 0});
  CHECK(r.residual == doctest::Approx(0.5));
  r = round_to_vertex(vec({1, 0, 1}));
  CHECK(r.residual == 0.0);
}

TEST_CASE("decide_subset_sum examples") {
  SUBCASE("balanced pair") {
    const auto r = decide_subset_sum(SubsetSumInstance(vec({1, -1})), kCfg);
    CHECK(r.answer == Answer::Yes);
    REQUIRE(r.witness_subset);
    CHECK(*r.witness_subset == std::vector<int>{0, 1});
    CHECK(r.residual == 0.0);
  }
  SUBCASE("all positive") {
    const auto r = decide_subset_sum(SubsetSumInstance(vec({1, 2})), kCfg);
    CHECK(r.answer == Answer::No);
    CHECK(r.branch == DecisionBranch::Trivial);
  }
  SUBCASE("four entries") {
    const SubsetSumInstance inst(vec({3, -1, -2, 5}));
    const auto r = decide_subset_sum(inst, kCfg);
    CHECK(brute_force_subset_sum(inst).yes);
    CHECK(r.answer == Answer::Yes);
    REQUIRE(r.witness_subset);
    CHECK(verifies_zero_sum(inst, *r.witness_subset));
    CHECK(r.rho_bar < r.beta / 2);
    CHECK(r.beta / 2 < r.rho);
  }
  SUBCASE("zero entry") {
    const auto r = decide_subset_sum(SubsetSumInstance(vec({4, 0, 1})), kCfg);
    CHECK(r.answer == Answer::Yes);
    CHECK(*r.witness_subset == std::vector<int>{1});
  }
  SUBCASE("rejects parameters outside the ordering") {
    DecisionParameters p;
    p.rho = 1.0;
    p.beta = 4.0;
    CHECK_THROWS_AS(decide_subset_sum(SubsetSumInstance(vec({1, -1})), kCfg, p), InstanceError);
  }
}

TEST_CASE("decide_subset_sum never contradicts brute force") {
  std::mt19937_64 rng(37);
  for (int t = 0; t < 25; ++t) {
    const auto inst = random_integer_instance(rng, 2 + t % 5, 9);
    const auto r = decide_subset_sum(inst, kCfg);
    const auto bf = brute_force_subset_sum(inst);
    if (r.answer == Answer::Yes) {
      CHECK(bf.yes);
      REQUIRE(r.witness_subset);
      CHECK(verifies_zero_sum(inst, *r.witness_subset));
    } else if (r.answer == Answer::No) {
      CHECK_FALSE(bf.yes);
    }
    CHECK(r.upper_bound >= r.value - 1e-6 * std::max(1.0, r.value));
  }
}
