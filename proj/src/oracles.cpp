#include "farpoint/oracles.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <random>

namespace farpoint {

BruteForceResult brute_force_subset_sum(const SubsetSumInstance& inst, std::size_t max_witnesses) {
  const Eigen::Index n = inst.n();
  if (n < 1) throw InstanceError("brute_force_subset_sum: empty instance");
  if (n > 24) throw InstanceError("brute_force_subset_sum: n must be <= 24");
  const bool exact = inst.is_integral();
  const double tol = 1e-9 * inst.S.norm();
  BruteForceResult out;
  std::uint32_t gray = 0;
  std::int64_t isum = 0;
  long double rsum = 0.0L;
  const std::uint32_t total = 1u << n;
  for (std::uint32_t i = 1; i < total; ++i) {
    const int bit = std::countr_zero(i);
    const std::uint32_t mask = 1u << bit;
    const bool adding = (gray & mask) == 0;
    gray ^= mask;
    if (exact) {
      const auto v = static_cast<std::int64_t>(inst.S(bit));
      isum += adding ? v : -v;
    } else {
      rsum += adding ? inst.S(bit) : -inst.S(bit);
    }
    const bool zero = exact ? isum == 0 : std::fabs(rsum) <= tol;
    if (!zero) continue;
    if (!exact) {
      // Re-sum from scratch so drift in the running sum cannot fake a hit.
      long double s = 0.0L;
      for (Eigen::Index k = 0; k < n; ++k) {
        if (gray >> k & 1u) s += inst.S(k);
      }
      if (std::fabs(s) > tol) continue;
    }
    out.yes = true;
    ++out.witness_count;
    if (out.witnesses.size() < max_witnesses) {
      std::vector<int> w;
      for (Eigen::Index k = 0; k < n; ++k) {
        if (gray >> k & 1u) w.push_back(static_cast<int>(k));
      }
      out.witnesses.push_back(std::move(w));
    }
  }
  return out;
}

namespace {

bool feasible(std::span<const Ball> balls, const Vector& x) {
  for (const auto& b : balls) {
    if (b.power(x) > 1e-9 * std::max(1.0, b.radius * b.radius)) return false;
  }
  return true;
}

// Intersection points of two circles in the plane.
std::vector<Vector> circle_intersections(const Ball& a, const Ball& b) {
  const Vector d = b.center - a.center;
  const double dist = d.norm();
  std::vector<Vector> out;
  if (dist == 0.0) return out;
  const double slack = 1e-12 * std::max({1.0, a.radius, b.radius});
  if (dist > a.radius + b.radius + slack || dist < std::abs(a.radius - b.radius) - slack) return out;
  const double along = (dist * dist + a.radius * a.radius - b.radius * b.radius) / (2.0 * dist);
  const double h = std::sqrt(std::max(0.0, a.radius * a.radius - along * along));
  const Vector e = d / dist;
  const Vector perp(Vector{{-e(1), e(0)}});
  const Vector base = a.center + along * e;
  out.push_back(base + h * perp);
  if (h > 0.0) out.push_back(base - h * perp);
  return out;
}

}  // namespace

SampleResult sample_farthest(std::span<const Ball> balls, const Vector& C, std::uint64_t samples,
                             std::uint64_t seed) {
  require_same_dimension(balls);
  const Eigen::Index n = balls.front().dimension();
  if (C.size() != n) throw InstanceError("sample_farthest: query dimension mismatch");
  SampleResult out;
  out.seed = seed;
  out.value = -std::numeric_limits<double>::infinity();
  auto consider = [&](const Vector& x) {
    if (!feasible(balls, x)) return;
    ++out.feasible;
    const double v = (x - C).squaredNorm();
    if (v > out.value) {
      out.value = v;
      out.argmax = x;
    }
  };

  for (const auto& b : balls) {
    const Vector d = b.center - C;
    const double nd = d.norm();
    if (nd > 0.0) consider(b.center + (b.radius / nd) * d);
  }
  if (n == 2) {
    for (std::size_t i = 0; i < balls.size(); ++i) {
      for (std::size_t j = i + 1; j < balls.size(); ++j) {
        for (const auto& p : circle_intersections(balls[i], balls[j])) consider(p);
      }
    }
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  const std::uint64_t per_ball = std::max<std::uint64_t>(1, samples / balls.size());
  Vector dir(n);
  for (const auto& b : balls) {
    for (std::uint64_t s = 0; s < per_ball; ++s) {
      for (Eigen::Index k = 0; k < n; ++k) dir(k) = gauss(rng);
      const double nrm = dir.norm();
      if (nrm == 0.0) continue;
      consider(b.center + (b.radius / nrm) * dir);
    }
  }

  if (out.feasible == 0) {
    out.used_rejection = true;
    const Box box = intersection_bounding_box(balls);
    if ((box.upper.array() < box.lower.array()).any()) {
      throw NumericalError("sample_farthest: ball intersection is empty");
    }
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Vector x(n);
    for (std::uint64_t s = 0; s < samples; ++s) {
      for (Eigen::Index k = 0; k < n; ++k) x(k) = box.lower(k) + unit(rng) * (box.upper(k) - box.lower(k));
      consider(x);
    }
  }
  if (out.feasible == 0) throw NumericalError("sample_farthest: no feasible sample found");
  return out;
}

void CoaxialDiskFamily::validate() const {
  if (!(a > 0.0)) throw InstanceError("coaxial family: a must be positive");
  if (axis.size() < 1 || std::abs(axis.norm() - 1.0) > 1e-12) {
    throw InstanceError("coaxial family: axis must be a unit vector");
  }
  for (int i = 0; i < 3; ++i) {
    if (!(r[i] >= 0.0) || std::abs(r[i] * r[i] - q[i] * q[i] - a * a) > 1e-9 * std::max(1.0, r[i] * r[i])) {
      throw InstanceError("coaxial family: radius does not match the shared sphere");
    }
  }
  if (!(r[0] > r[1] && r[1] > r[2])) throw InstanceError("coaxial family: need r1 > r2 > r3");
  if (!(q[0] > 0.0 && q[1] > 0.0)) throw InstanceError("coaxial family: need q1, q2 > 0");
}

Ball CoaxialDiskFamily::disk(int i) const { return Ball(-q[i] * axis, r[i]); }

CoaxialDiskFamily make_coaxial_family(double a, double q1, double q2, double q3, const Vector& axis) {
  CoaxialDiskFamily f;
  f.a = a;
  f.q[0] = q1;
  f.q[1] = q2;
  f.q[2] = q3;
  for (int i = 0; i < 3; ++i) f.r[i] = std::sqrt(f.q[i] * f.q[i] + a * a);
  f.axis = axis;
  f.validate();
  return f;
}

InclusionSampleReport inclusion_sampler(const CoaxialDiskFamily& family, std::uint64_t samples,
                                        std::uint64_t seed, double tol) {
  family.validate();
  const Eigen::Index n = family.axis.size();
  const Ball D[3] = {family.disk(0), family.disk(1), family.disk(2)};
  Vector lo = Vector::Constant(n, std::numeric_limits<double>::infinity());
  Vector hi = -lo;
  for (const auto& d : D) {
    lo = lo.cwiseMin((d.center.array() - d.radius).matrix());
    hi = hi.cwiseMax((d.center.array() + d.radius).matrix());
  }

  InclusionSampleReport rep;
  rep.seed = seed;
  auto in = [](const Ball& d, const Vector& x) { return d.power(x) <= 0.0; };
  auto near = [&](const Ball& d, const Vector& x) {
    return d.power(x) <= tol * std::max(1.0, d.radius * d.radius);
  };
  // lhs holds (strictly by membership) but rhs fails beyond tolerance.
  auto check = [&](bool lhs, const Ball& rhs, const Vector& x) {
    ++rep.checks;
    if (lhs && !near(rhs, x)) ++rep.violations;
  };

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss;
  Vector x(n);
  for (std::uint64_t s = 0; s < samples; ++s) {
    if (s % 2 == 0) {
      for (Eigen::Index k = 0; k < n; ++k) x(k) = lo(k) + unit(rng) * (hi(k) - lo(k));
    } else {
      const Ball& d = D[(s / 2) % 3];
      for (Eigen::Index k = 0; k < n; ++k) x(k) = gauss(rng);
      x = d.center + (d.radius / x.norm()) * x;
    }
    const double t = family.axis.dot(x);
    const bool inH = t <= 0.0;
    const bool inG = t >= 0.0;
    const bool in1 = in(D[0], x);
    const bool in2 = in(D[1], x);
    const bool in3 = in(D[2], x);
    const bool inside[3] = {in1, in2, in3};
    // Pairwise: H ∩ D_j ⊆ D_i and G ∩ D_i ⊆ D_j whenever q_i > q_j.
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        if (i == j || !(family.q[i] > family.q[j])) continue;
        check(inH && inside[j], D[i], x);
        check(inG && inside[i], D[j], x);
      }
    }
    // Chain through the middle disk.
    check(inH && in3, D[0], x);
    check(in1 && in3, D[1], x);
    check(inG && in1, D[1], x);
    check(inG && in2, D[2], x);
  }
  return rep;
}

GridResult grid_min(const PiecewiseMaxFunction& pm, const Box& box, double step) {
  const Eigen::Index n = box.lower.size();
  if (n < 1 || n > 3) throw InstanceError("grid_min: dimension must be 1, 2 or 3");
  if (box.upper.size() != n) throw InstanceError("grid_min: box dimension mismatch");
  if (!(step > 0.0)) throw InstanceError("grid_min: step must be positive");
  if (!box.lower.allFinite() || !box.upper.allFinite() || (box.upper.array() < box.lower.array()).any()) {
    throw InstanceError("grid_min: invalid box");
  }
  std::vector<Eigen::Index> counts(static_cast<std::size_t>(n));
  double total = 1.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    counts[static_cast<std::size_t>(k)] =
        static_cast<Eigen::Index>(std::floor((box.upper(k) - box.lower(k)) / step + 1e-9)) + 1;
    total *= static_cast<double>(counts[static_cast<std::size_t>(k)]);
  }
  if (total > 2e8) throw InstanceError("grid_min: grid too large");

  GridResult out;
  out.value = std::numeric_limits<double>::infinity();
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(n), 0);
  Vector x(n);
  while (true) {
    for (Eigen::Index k = 0; k < n; ++k) {
      x(k) = box.lower(k) + step * static_cast<double>(idx[static_cast<std::size_t>(k)]);
    }
    const double v = pm(x);
    ++out.points;
    if (v < out.value) {
      out.value = v;
      out.argmin = x;
    }
    Eigen::Index k = 0;
    for (; k < n; ++k) {
      auto& i = idx[static_cast<std::size_t>(k)];
      if (++i < counts[static_cast<std::size_t>(k)]) break;
      i = 0;
    }
    if (k == n) break;
  }
  return out;
}

}  // namespace farpoint
