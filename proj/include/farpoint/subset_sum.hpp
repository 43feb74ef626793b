#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "farpoint/framework1.hpp"
#include "farpoint/geometry.hpp"

namespace farpoint {

struct SubsetSumInstance {
  Vector S;

  SubsetSumInstance() = default;
  explicit SubsetSumInstance(Vector s);

  Eigen::Index n() const { return S.size(); }
  /// Every entry is an integer small enough for exact 64-bit summation.
  bool is_integral() const;
};

/// |sum_{i in subset} S_i|, exact for integral instances.
double subset_residual(const SubsetSumInstance& inst, const std::vector<int>& subset);

/// True when the subset sums to zero: exactly for integral instances,
/// within 1e-6 * ||S|| otherwise.
bool verifies_zero_sum(const SubsetSumInstance& inst, const std::vector<int>& subset);

/// {x : S^T x <= 0, 0 <= x <= 1, 1^T x >= 1/2} as 2n + 2 rows, in that order.
Polytope build_search_polytope(const SubsetSumInstance& inst);

struct DiskCover {
  /// Order: 1+, 1-, 2+, 2-, ...; C_{k+-} = 1/2 +- alpha*rho*e_k.
  std::vector<Ball> hypercube_disks;
  Ball s_disk;
  Ball h_disk;
  double rho = 0.0;
  double beta = 0.0;
  double alpha = 1.0;
  Vector P_s;
  Vector P_h;
  double r_tilde_s = 0.0;
  double r_tilde_h = 0.0;
  /// 1/2 - alpha*(beta/2)*S/||S||.
  Vector C_query;

  /// hypercube disks, then s, then h.
  std::vector<Ball> balls() const;
};

/// Offset of S/||S|| from the center: S^T 1 / ||S||.
double sigma(const SubsetSumInstance& inst);

/// The 2n hypercube disks for offset q (used alone when n = 1).
std::vector<Ball> build_hypercube_disks(Eigen::Index n, double q);

/// Throws ConstructionError when the hyperplane foot point leaves the
/// circumscribed ball (r_tilde_s^2 <= 0), InstanceError on bad parameters.
DiskCover build_disk_cover(const SubsetSumInstance& inst, double rho, double beta, double alpha = 1.0);

/// Largest | ||corner - C|| - r | over the corners lying on each sphere by construction.
double corner_exactness_check(const DiskCover& cover, const SubsetSumInstance& inst);

/// Same check restricted to the hypercube disks.
double hypercube_corner_error(std::span<const Ball> hypercube_disks, Eigen::Index n);

/// Smallest rho meeting the radius and orientation conditions, times 1.01.
double estimate_rho_bar(const SubsetSumInstance& inst);

/// a^2 / (q + sqrt(q^2 + a^2)): how far a disk of offset q bulges past its shared sphere.
double cap_gap(double q, double a);

/// Smallest offset q with cap_gap(q, a) <= delta.
double gap_offset(double a, double delta);

/// max(rho_bar, rho making every constituent disk bulge at most delta).
double rho_for_delta(const SubsetSumInstance& inst, double delta);

/// sqrt(alpha R^2 + alpha (alpha - 1) beta^2 / 4 - (alpha - 1) n / 4).
double hat_R(double R, double alpha, double beta, Eigen::Index n);

/// Largest coefficient gap between alpha * (rows of P_{R^2}) and the rows of
/// the scaled family at hat_R(R).
double scaled_polytope_equivalence(const SubsetSumInstance& inst, double rho, double beta, double alpha,
                                   double R);

struct RoundedVertex {
  std::vector<int> binary;
  double residual = 0.0;
};

/// Nearest 0/1 vector, ties rounding to 1.
RoundedVertex round_to_vertex(const Vector& x);

enum class Answer { Yes, No, Inconclusive };
enum class DecisionBranch { Certificate, Boundary, Inclusion, Trivial };

const char* to_string(Answer a);
const char* to_string(DecisionBranch b);

struct DecisionParameters {
  std::optional<double> rho;
  std::optional<double> beta;
  /// Scale used for the scaled-cover cross-check (default 2).
  std::optional<double> alpha;
};

struct DecisionReport {
  Answer answer = Answer::Inconclusive;
  /// Zero-based indices.
  std::optional<std::vector<int>> witness_subset;
  DecisionBranch branch = DecisionBranch::Trivial;
  std::optional<CaseLabel> label;
  /// |S^T x| at the rounded point.
  double residual = 0.0;
  double rounding_residual = 0.0;
  double rho = 0.0;
  double beta = 0.0;
  double alpha = 1.0;
  double rho_bar = 0.0;
  double rho_delta = 0.0;
  /// ||x - C||^2 at any zero-sum corner.
  double corner_value = 0.0;
  /// Objective at the extracted point and a certified bound on the maximum.
  double value = 0.0;
  double upper_bound = 0.0;
  double theta_residual = 0.0;
  Vector point;
  std::string diagnostics;
};

DecisionReport decide_subset_sum(const SubsetSumInstance& inst, const FrameworkConfig& cfg,
                                 const DecisionParameters& params = {});

}  // namespace farpoint
