#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "farpoint/geometry.hpp"
#include "farpoint/subset_sum.hpp"

namespace farpoint {

struct BruteForceResult {
  bool yes = false;
  /// Zero-based index sets, in Gray-code visiting order, capped at max_witnesses.
  std::vector<std::vector<int>> witnesses;
  std::uint64_t witness_count = 0;
};

/// Enumerates all nonempty subsets (n <= 24).
BruteForceResult brute_force_subset_sum(const SubsetSumInstance& inst, std::size_t max_witnesses = 1024);

struct SampleResult {
  double value = 0.0;
  Vector argmax;
  std::uint64_t seed = 0;
  std::uint64_t feasible = 0;
  bool used_rejection = false;
};

/// Lower bound on max ||x - C||^2 over the ball intersection from uniform
/// sphere samples plus exact candidates (each sphere's farthest point from C;
/// pairwise circle intersections when n = 2).
SampleResult sample_farthest(std::span<const Ball> balls, const Vector& C, std::uint64_t samples,
                             std::uint64_t seed = 20240611);

/// Three disks centered at -q_i * axis that share the sphere {axis^T x = 0, ||x|| = a}.
struct CoaxialDiskFamily {
  double q[3] = {0.0, 0.0, 0.0};
  double r[3] = {0.0, 0.0, 0.0};
  double a = 1.0;
  Vector axis;

  /// Throws InstanceError unless r_i^2 - q_i^2 = a^2, r1 > r2 > r3 >= 0,
  /// q1, q2 > 0 and the axis is a unit vector.
  void validate() const;
  Ball disk(int i) const;
};

/// Builds radii from the offsets and validates.
CoaxialDiskFamily make_coaxial_family(double a, double q1, double q2, double q3, const Vector& axis);

struct InclusionSampleReport {
  std::uint64_t violations = 0;
  std::uint64_t checks = 0;
  std::uint64_t seed = 0;
};

/// Samples the bounding box of the three disks and their spheres and checks
/// every pairwise and chained half-space inclusion between them.
InclusionSampleReport inclusion_sampler(const CoaxialDiskFamily& family, std::uint64_t samples,
                                        std::uint64_t seed = 20240611, double tol = 1e-7);

struct GridResult {
  double value = 0.0;
  Vector argmin;
  std::uint64_t points = 0;
};

/// Exhaustive grid search, dimension <= 3.
GridResult grid_min(const PiecewiseMaxFunction& pm, const Box& box, double step);

}  // namespace farpoint
