#include "farpoint/subset_sum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>

#include "farpoint/framework2.hpp"

namespace farpoint {

namespace {

constexpr double kExactLimit = 9007199254740992.0;  // 2^53

Vector unit_normal(const SubsetSumInstance& inst) {
  const double nrm = inst.S.norm();
  if (!(nrm > 0.0)) throw InstanceError("subset sum: S must be nonzero");
  return inst.S / nrm;
}

void check_instance(const SubsetSumInstance& inst) {
  if (inst.S.size() == 0) throw InstanceError("subset sum: empty instance");
  if (!inst.S.allFinite()) throw InstanceError("subset sum: non-finite entry");
}

}  // namespace

SubsetSumInstance::SubsetSumInstance(Vector s) : S(std::move(s)) { check_instance(*this); }

bool SubsetSumInstance::is_integral() const {
  if (S.size() >= 1024) return false;
  for (Eigen::Index i = 0; i < S.size(); ++i) {
    if (std::abs(S(i)) > kExactLimit || S(i) != std::floor(S(i))) return false;
  }
  return true;
}

double subset_residual(const SubsetSumInstance& inst, const std::vector<int>& subset) {
  for (int i : subset) {
    if (i < 0 || i >= inst.n()) throw InstanceError("subset index out of range");
  }
  if (inst.is_integral()) {
    std::int64_t sum = 0;
    for (int i : subset) sum += static_cast<std::int64_t>(inst.S(i));
    return std::abs(static_cast<double>(sum));
  }
  long double sum = 0.0L;
  for (int i : subset) sum += inst.S(i);
  return static_cast<double>(std::fabs(sum));
}

bool verifies_zero_sum(const SubsetSumInstance& inst, const std::vector<int>& subset) {
  if (subset.empty()) return false;
  const double r = subset_residual(inst, subset);
  return inst.is_integral() ? r == 0.0 : r <= 1e-6 * inst.S.norm();
}

Polytope build_search_polytope(const SubsetSumInstance& inst) {
  check_instance(inst);
  const Eigen::Index n = inst.n();
  Matrix A = Matrix::Zero(2 * n + 2, n);
  Vector b = Vector::Zero(2 * n + 2);
  A.row(0) = inst.S.transpose();
  for (Eigen::Index k = 0; k < n; ++k) {
    A(1 + k, k) = -1.0;
    A(1 + n + k, k) = 1.0;
    b(1 + n + k) = -1.0;
  }
  A.row(2 * n + 1).setConstant(-1.0);
  b(2 * n + 1) = 0.5;
  return {std::move(A), std::move(b)};
}

std::vector<Ball> DiskCover::balls() const {
  std::vector<Ball> out = hypercube_disks;
  out.push_back(s_disk);
  out.push_back(h_disk);
  return out;
}

double sigma(const SubsetSumInstance& inst) {
  check_instance(inst);
  const double nrm = inst.S.norm();
  if (!(nrm > 0.0)) throw InstanceError("subset sum: S must be nonzero");
  return inst.S.sum() / nrm;
}

std::vector<Ball> build_hypercube_disks(Eigen::Index n, double q) {
  if (n < 1) throw InstanceError("hypercube disks: n must be positive");
  if (!(q > 0.0) || !std::isfinite(q)) throw InstanceError("hypercube disks: offset must be positive");
  const Vector mid = Vector::Constant(n, 0.5);
  const double r = std::sqrt((0.5 + q) * (0.5 + q) + 0.25 * static_cast<double>(n - 1));
  std::vector<Ball> out;
  out.reserve(static_cast<std::size_t>(2 * n));
  for (Eigen::Index k = 0; k < n; ++k) {
    Vector plus = mid;
    plus(k) += q;
    Vector minus = mid;
    minus(k) -= q;
    out.emplace_back(std::move(plus), r);
    out.emplace_back(std::move(minus), r);
  }
  return out;
}

DiskCover build_disk_cover(const SubsetSumInstance& inst, double rho, double beta, double alpha) {
  check_instance(inst);
  if (!(rho > 0.0) || !std::isfinite(rho)) throw InstanceError("disk cover: rho must be positive");
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw InstanceError("disk cover: beta must be nonnegative");
  if (!(alpha >= 1.0) || !std::isfinite(alpha)) throw InstanceError("disk cover: alpha must be >= 1");
  const Eigen::Index n = inst.n();
  const double nd = static_cast<double>(n);
  const Vector u = unit_normal(inst);
  const double sg = inst.S.sum() / inst.S.norm();
  const double q = alpha * rho;
  const Vector mid = Vector::Constant(n, 0.5);

  const double rts2 = 0.25 * nd - 0.25 * sg * sg;
  if (!(rts2 > 0.0)) {
    std::ostringstream msg;
    msg << "disk cover: hyperplane S^T x = 0 misses the open circumscribed ball (r_tilde_s^2 = " << rts2
        << ")";
    throw ConstructionError(msg.str());
  }

  DiskCover c;
  c.rho = rho;
  c.beta = beta;
  c.alpha = alpha;
  c.hypercube_disks = build_hypercube_disks(n, q);

  c.P_s = mid - 0.5 * sg * u;
  c.r_tilde_s = std::sqrt(rts2);
  const double off_s = q - 0.5 * sg;
  c.s_disk = Ball(mid - q * u, std::sqrt(off_s * off_s + rts2));

  const double rn = std::sqrt(nd);
  c.P_h = Vector::Constant(n, 1.0 / (2.0 * nd));
  c.r_tilde_h = std::sqrt(0.5 - 1.0 / (4.0 * nd));
  const double off_h = q + (nd - 1.0) / (2.0 * rn);
  c.h_disk = Ball(mid + (q / rn) * Vector::Ones(n), std::sqrt(off_h * off_h + 0.5 - 1.0 / (4.0 * nd)));

  c.C_query = mid - (alpha * beta / 2.0) * u;
  return c;
}

double hypercube_corner_error(std::span<const Ball> disks, Eigen::Index n) {
  if (n < 1 || n > 20) throw InstanceError("corner check: need 1 <= n <= 20");
  if (static_cast<Eigen::Index>(disks.size()) != 2 * n) throw InstanceError("corner check: need 2n disks");
  double worst = 0.0;
  Vector x(n);
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    for (Eigen::Index k = 0; k < n; ++k) x(k) = (mask >> k) & 1u ? 1.0 : 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
      // x_k = 0 lies on the facet defining the k+ disk, x_k = 1 on the k- one.
      const Ball& d = disks[static_cast<std::size_t>(2 * k + (x(k) == 0.0 ? 0 : 1))];
      worst = std::max(worst, std::abs((x - d.center).norm() - d.radius));
    }
  }
  return worst;
}

double corner_exactness_check(const DiskCover& cover, const SubsetSumInstance& inst) {
  const Eigen::Index n = inst.n();
  double worst = hypercube_corner_error(cover.hypercube_disks, n);
  const double tol = inst.is_integral() ? 0.0 : 1e-12 * inst.S.norm();
  Vector x(n);
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::vector<int> subset;
    for (Eigen::Index k = 0; k < n; ++k) {
      const bool on = (mask >> k) & 1u;
      x(k) = on ? 1.0 : 0.0;
      if (on) subset.push_back(static_cast<int>(k));
    }
    if (subset_residual(inst, subset) > tol) continue;
    worst = std::max(worst, std::abs((x - cover.s_disk.center).norm() - cover.s_disk.radius));
  }
  return worst;
}

double estimate_rho_bar(const SubsetSumInstance& inst) {
  const double nd = static_cast<double>(inst.n());
  const Vector ones = Vector::Ones(inst.n());
  auto ok = [&](double rho) {
    const auto c = build_disk_cover(inst, rho, 0.0, 1.0);
    const double need = 0.25 * nd;
    for (const auto& b : c.hypercube_disks) {
      if (b.radius * b.radius < need) return false;
    }
    if (c.s_disk.radius * c.s_disk.radius < need) return false;
    if (c.h_disk.radius * c.h_disk.radius < need) return false;
    if (!(c.s_disk.center.dot(inst.S) < 0.0)) return false;
    return c.h_disk.center.dot(ones) > 0.0;
  };
  constexpr double kFloor = 1e-6;
  if (ok(kFloor)) return 1.01 * kFloor;
  double lo = kFloor;
  double hi = 1.0;
  while (!ok(hi)) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12) throw NumericalError("estimate_rho_bar: no feasible rho found");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-9 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (ok(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 1.01 * hi;
}

double cap_gap(double q, double a) {
  if (!(a >= 0.0)) throw InstanceError("cap_gap: a must be nonnegative");
  const double d = q + std::hypot(q, a);
  if (!(d > 0.0)) return std::numeric_limits<double>::infinity();
  return a * a / d;
}

double gap_offset(double a, double delta) {
  if (!(delta > 0.0)) throw InstanceError("gap_offset: delta must be positive");
  if (!(a >= 0.0)) throw InstanceError("gap_offset: a must be nonnegative");
  return (a * a - delta * delta) / (2.0 * delta);
}

double rho_for_delta(const SubsetSumInstance& inst, double delta) {
  const double nd = static_cast<double>(inst.n());
  const double sg = sigma(inst);
  const double rts2 = 0.25 * nd - 0.25 * sg * sg;
  if (!(rts2 > 0.0)) throw ConstructionError("rho_for_delta: degenerate hyperplane disk");
  const double rth2 = 0.5 - 1.0 / (4.0 * nd);
  const double cube = gap_offset(std::sqrt(0.25 * (nd - 1.0)), delta) - 0.5;
  const double s = gap_offset(std::sqrt(rts2), delta) + 0.5 * sg;
  const double h = gap_offset(std::sqrt(rth2), delta) - (nd - 1.0) / (2.0 * std::sqrt(nd));
  return std::max({estimate_rho_bar(inst), cube, s, h});
}

double hat_R(double R, double alpha, double beta, Eigen::Index n) {
  if (!(alpha > 0.0)) throw InstanceError("hat_R: alpha must be positive");
  if (alpha == 1.0) return R;
  const double nd = static_cast<double>(n);
  const double rad = alpha * R * R + alpha * (alpha - 1.0) * beta * beta / 4.0 - (alpha - 1.0) * nd / 4.0;
  if (rad < 0.0) {
    std::ostringstream msg;
    msg << "hat_R: negative radicand " << rad << " (R = " << R << ", alpha = " << alpha << ", beta = " << beta
        << ", n = " << n << ")";
    throw InstanceError(msg.str());
  }
  return std::sqrt(rad);
}

double scaled_polytope_equivalence(const SubsetSumInstance& inst, double rho, double beta, double alpha,
                                   double R) {
  const auto base = build_disk_cover(inst, rho, beta, 1.0);
  const auto scaled = build_disk_cover(inst, rho, beta, alpha);
  const auto bb = base.balls();
  const auto sb = scaled.balls();
  const auto P1 = polytope_family(h_minus_f_pieces(bb, base.C_query), R);
  const auto Pa = polytope_family(h_minus_f_pieces(sb, scaled.C_query), hat_R(R, alpha, beta, inst.n()));
  const double dA = (alpha * P1.A - Pa.A).cwiseAbs().maxCoeff();
  const double db = (alpha * P1.b - Pa.b).cwiseAbs().maxCoeff();
  return std::max(dA, db);
}

RoundedVertex round_to_vertex(const Vector& x) {
  RoundedVertex out;
  out.binary.resize(static_cast<std::size_t>(x.size()));
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const int b = x(i) >= 0.5 ? 1 : 0;
    out.binary[static_cast<std::size_t>(i)] = b;
    out.residual = std::max(out.residual, std::abs(x(i) - b));
  }
  return out;
}

const char* to_string(Answer a) {
  switch (a) {
    case Answer::Yes:
      return "YES";
    case Answer::No:
      return "NO";
    case Answer::Inconclusive:
      return "INCONCLUSIVE";
  }
  return "?";
}

const char* to_string(DecisionBranch b) {
  switch (b) {
    case DecisionBranch::Certificate:
      return "Certificate";
    case DecisionBranch::Boundary:
      return "Boundary";
    case DecisionBranch::Inclusion:
      return "Inclusion";
    case DecisionBranch::Trivial:
      return "Trivial";
  }
  return "?";
}

namespace {

std::vector<int> support(const std::vector<int>& binary) {
  std::vector<int> out;
  for (std::size_t i = 0; i < binary.size(); ++i) {
    if (binary[i] == 1) out.push_back(static_cast<int>(i));
  }
  return out;
}

}  // namespace

DecisionReport decide_subset_sum(const SubsetSumInstance& inst, const FrameworkConfig& cfg,
                                 const DecisionParameters& params) {
  check_instance(inst);
  cfg.validate();
  const Eigen::Index n = inst.n();
  DecisionReport rep;
  rep.branch = DecisionBranch::Trivial;
  std::ostringstream diag;

  for (Eigen::Index i = 0; i < n; ++i) {
    if (inst.S(i) == 0.0) {
      rep.answer = Answer::Yes;
      rep.witness_subset = std::vector<int>{static_cast<int>(i)};
      rep.point = Vector::Zero(n);
      rep.point(i) = 1.0;
      rep.diagnostics = "zero entry";
      return rep;
    }
  }
  const Polytope P = build_search_polytope(inst);
  if (polytope_empty(P, 0.0)) {
    rep.answer = Answer::No;
    rep.diagnostics = "search polytope is empty (all entries share a sign)";
    return rep;
  }

  try {
    rep.rho_bar = estimate_rho_bar(inst);
    rep.rho_delta = rho_for_delta(inst, 1.0 / (8.0 * static_cast<double>(n)));
  } catch (const ConstructionError& e) {
    rep.answer = Answer::Inconclusive;
    rep.diagnostics = e.what();
    return rep;
  }
  rep.rho = params.rho.value_or(2.0 * std::max(rep.rho_bar, rep.rho_delta));
  rep.beta = params.beta.value_or(rep.rho);
  rep.alpha = 1.0;
  if (!(rep.rho_bar < rep.beta / 2.0 && rep.beta / 2.0 < rep.rho)) {
    std::ostringstream msg;
    msg << "decide_subset_sum: parameters violate rho_bar < beta/2 < rho (rho_bar = " << rep.rho_bar
        << ", beta = " << rep.beta << ", rho = " << rep.rho << ")";
    throw InstanceError(msg.str());
  }

  const auto cover = build_disk_cover(inst, rep.rho, rep.beta, 1.0);
  const auto balls = cover.balls();
  const Vector& C = cover.C_query;
  const double sg = sigma(inst);
  rep.corner_value = 0.25 * static_cast<double>(n) + 0.25 * rep.beta * rep.beta - 0.5 * rep.beta * sg;

  const auto far = farthest_point(balls, C, cfg, P);
  rep.label = far.label;
  switch (far.path) {
    case FarthestPath::Bisection:
      rep.branch = DecisionBranch::Certificate;
      break;
    case FarthestPath::Boundary:
      rep.branch = DecisionBranch::Boundary;
      break;
    default:
      rep.branch = DecisionBranch::Inclusion;
      break;
  }
  rep.point = far.maximizer;
  rep.value = far.value;
  rep.upper_bound = far.upper_bound;

  const auto rounded = round_to_vertex(far.maximizer);
  rep.rounding_residual = rounded.residual;
  const auto subset = support(rounded.binary);
  rep.residual = subset.empty() ? 0.0 : subset_residual(inst, subset);
  diag << "label=" << to_string(far.label) << " value=" << far.value << " upper=" << far.upper_bound
       << " corner=" << rep.corner_value;

  const double scale = params.alpha.value_or(2.0);
  try {
    rep.theta_residual = scaled_polytope_equivalence(inst, rep.rho, rep.beta, scale,
                                                     std::sqrt(std::max(0.0, far.value)));
  } catch (const InstanceError& e) {
    diag << " scaled-check: " << e.what();
  }

  bool verified = verifies_zero_sum(inst, subset);
  if (verified) rep.witness_subset = subset;
  for (std::size_t i = 1; i < far.candidates.size() && !verified; ++i) {
    const auto r = round_to_vertex(far.candidates[i]);
    const auto s = support(r.binary);
    if (!verifies_zero_sum(inst, s)) continue;
    verified = true;
    rep.point = far.candidates[i];
    rep.rounding_residual = r.residual;
    rep.residual = subset_residual(inst, s);
    rep.witness_subset = s;
  }
  if (verified) {
    rep.answer = Answer::Yes;
  } else {
    const double margin = 1e-6 * std::max(1.0, rep.corner_value);
    if (rep.upper_bound < rep.corner_value - margin) {
      rep.answer = Answer::No;
    } else {
      rep.answer = Answer::Inconclusive;
      diag << " (bound does not separate from the corner value)";
    }
  }
  rep.diagnostics = diag.str();
  return rep;
}

}  // namespace farpoint
