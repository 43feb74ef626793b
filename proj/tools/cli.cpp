#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include "farpoint/errors.hpp"
#include "farpoint/framework1.hpp"
#include "farpoint/oracles.hpp"
#include "farpoint/subset_sum.hpp"

namespace farpoint::cli {

namespace {

using json = nlohmann::json;

// Schema problems; the message names the offending field.
struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Flags {
  std::string path;
  std::optional<double> tol_bisection;
  std::optional<double> tol_solver;
  std::optional<std::uint64_t> seed;
  bool oracle = false;
  std::uint64_t oracle_samples = 1000000;
  bool brute_force = false;
  bool alpha_grid = false;
  std::uint64_t samples = 100000;
};

void only_fields(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, _] : obj.items()) {
    if (!ok.count(key)) throw SchemaError(where + ": unknown field '" + key + "'");
  }
}

const json& field(const json& obj, const std::string& where, const char* name) {
  if (!obj.contains(name)) throw SchemaError(where + ": missing field '" + name + "'");
  return obj.at(name);
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) throw SchemaError(where + ": expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw SchemaError(where + ": not finite");
  return d;
}

long integer(const json& v, const std::string& where) {
  if (!v.is_number_integer()) throw SchemaError(where + ": expected an integer");
  return v.get<long>();
}

Vector vector_of(const json& v, const std::string& where) {
  if (!v.is_array() || v.empty()) throw SchemaError(where + ": expected a non-empty array of numbers");
  Vector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) = number(v[i], where + "[" + std::to_string(i) + "]");
  }
  return out;
}

json to_json(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json one_based(const std::vector<int>& idx) {
  json out = json::array();
  for (int i : idx) out.push_back(i + 1);
  return out;
}

FrameworkConfig read_config(const json& doc, const Flags& flags) {
  FrameworkConfig cfg;
  if (doc.contains("config")) {
    const json& c = doc.at("config");
    if (!c.is_object()) throw SchemaError("config: expected an object");
    only_fields(c, "config",
                {"tol_bisection", "tol_solver", "tol_membership", "max_iterations", "restarts", "seed"});
    if (c.contains("tol_bisection")) cfg.tol_bisection = number(c["tol_bisection"], "config.tol_bisection");
    if (c.contains("tol_solver")) cfg.tol_solver = number(c["tol_solver"], "config.tol_solver");
    if (c.contains("tol_membership")) cfg.tol_membership = number(c["tol_membership"], "config.tol_membership");
    if (c.contains("max_iterations")) cfg.max_iterations = static_cast<int>(integer(c["max_iterations"], "config.max_iterations"));
    if (c.contains("restarts")) cfg.restarts = static_cast<int>(integer(c["restarts"], "config.restarts"));
    if (c.contains("seed")) {
      const long s = integer(c["seed"], "config.seed");
      if (s < 0) throw SchemaError("config.seed: must be nonnegative");
      cfg.seed = static_cast<std::uint64_t>(s);
    }
  }
  if (const char* env = std::getenv("SOLVER_SEED"); env && *env) {
    char* end = nullptr;
    const unsigned long long s = std::strtoull(env, &end, 10);
    if (*end != '\0') throw SchemaError("SOLVER_SEED: expected a nonnegative integer");
    cfg.seed = s;
  }
  if (flags.seed) cfg.seed = *flags.seed;
  if (flags.tol_bisection) cfg.tol_bisection = *flags.tol_bisection;
  if (flags.tol_solver) cfg.tol_solver = *flags.tol_solver;
  try {
    cfg.validate();
  } catch (const InstanceError& e) {
    throw SchemaError(std::string("config: ") + e.what());
  }
  return cfg;
}

json config_json(const FrameworkConfig& cfg) {
  return {{"tol_bisection", cfg.tol_bisection}, {"tol_solver", cfg.tol_solver},
          {"tol_membership", cfg.tol_membership}, {"max_iterations", cfg.max_iterations},
          {"restarts", cfg.restarts}, {"seed", cfg.seed}};
}

json load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError(path + ": cannot open file");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError(path + ": " + e.what());
  }
  if (!doc.is_object()) throw SchemaError("instance: expected a JSON object");
  const json& kind = field(doc, "instance", "kind");
  if (!kind.is_string()) throw SchemaError("kind: expected a string");
  return doc;
}

struct BallsInstance {
  std::vector<Ball> balls;
  Vector query;
  std::optional<Polytope> container;
};

BallsInstance parse_balls(const json& doc) {
  only_fields(doc, "instance", {"kind", "dimension", "balls", "query", "container", "config"});
  const long dim = integer(field(doc, "instance", "dimension"), "dimension");
  if (dim < 1) throw SchemaError("dimension: must be positive");
  const json& list = field(doc, "instance", "balls");
  if (!list.is_array() || list.empty()) throw SchemaError("balls: expected a non-empty array");
  BallsInstance inst;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string where = "balls[" + std::to_string(i) + "]";
    if (!list[i].is_object()) throw SchemaError(where + ": expected an object");
    only_fields(list[i], where, {"center", "radius"});
    const Vector c = vector_of(field(list[i], where, "center"), where + ".center");
    if (c.size() != dim) throw SchemaError(where + ".center: length differs from dimension");
    const double r = number(field(list[i], where, "radius"), where + ".radius");
    if (!(r > 0.0)) throw SchemaError(where + ".radius: must be positive");
    inst.balls.emplace_back(c, r);
  }
  inst.query = vector_of(field(doc, "instance", "query"), "query");
  if (inst.query.size() != dim) throw SchemaError("query: length differs from dimension");
  if (doc.contains("container")) {
    const json& c = doc["container"];
    if (!c.is_object()) throw SchemaError("container: expected an object");
    only_fields(c, "container", {"A", "b"});
    const json& rows = field(c, "container", "A");
    const Vector b = vector_of(field(c, "container", "b"), "container.b");
    if (!rows.is_array() || rows.size() != static_cast<std::size_t>(b.size())) {
      throw SchemaError("container.A: expected one row per entry of b");
    }
    Matrix A(b.size(), dim);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const Vector row = vector_of(rows[i], "container.A[" + std::to_string(i) + "]");
      if (row.size() != dim) throw SchemaError("container.A[" + std::to_string(i) + "]: length differs from dimension");
      A.row(static_cast<Eigen::Index>(i)) = row.transpose();
    }
    inst.container = Polytope(A, b);
  }
  return inst;
}

struct SubsetSumFile {
  Vector S;
  DecisionParameters params;
};

SubsetSumFile parse_subset_sum(const json& doc) {
  only_fields(doc, "instance", {"kind", "S", "rho", "beta", "alpha", "config"});
  SubsetSumFile f;
  f.S = vector_of(field(doc, "instance", "S"), "S");
  if (doc.contains("rho")) f.params.rho = number(doc["rho"], "rho");
  if (doc.contains("beta")) f.params.beta = number(doc["beta"], "beta");
  if (doc.contains("alpha")) f.params.alpha = number(doc["alpha"], "alpha");
  return f;
}

CoaxialDiskFamily parse_coaxial(const json& doc) {
  only_fields(doc, "instance", {"kind", "a", "q", "dimension", "config"});
  const long dim = integer(field(doc, "instance", "dimension"), "dimension");
  if (dim < 1) throw SchemaError("dimension: must be positive");
  const double a = number(field(doc, "instance", "a"), "a");
  const Vector q = vector_of(field(doc, "instance", "q"), "q");
  if (q.size() != 3) throw SchemaError("q: expected three offsets");
  Vector axis = Vector::Zero(dim);
  axis(0) = 1.0;
  try {
    return make_coaxial_family(a, q(0), q(1), q(2), axis);
  } catch (const InstanceError& e) {
    throw SchemaError(std::string("coaxial family: ") + e.what());
  }
}

void require_kind(const json& doc, const char* kind) {
  if (doc["kind"] != kind) {
    throw SchemaError("kind: expected '" + std::string(kind) + "', got '" + doc["kind"].get<std::string>() + "'");
  }
}

json strip_config(json doc) {
  doc.erase("config");
  return doc;
}

int cmd_farthest(const Flags& flags, std::ostream& out, std::ostream& err) {
  const json doc = load(flags.path);
  require_kind(doc, "balls");
  const auto inst = parse_balls(doc);
  const FrameworkConfig cfg = read_config(doc, flags);

  const auto rep = farthest_point(inst.balls, inst.query, cfg, inst.container);
  json rec = {{"command", "farthest"},
              {"instance", strip_config(doc)},
              {"config", config_json(cfg)},
              {"label", to_string(rep.label)},
              {"branch", to_string(rep.path)},
              {"separated", rep.separated},
              {"upper_bound", rep.upper_bound},
              {"iterations", rep.iterations},
              {"converged", rep.converged}};
  err << "case: " << to_string(rep.label) << ", branch: " << to_string(rep.path) << "\n";
  if (rep.path == FarthestPath::Unresolved) {
    rec["status"] = "precondition";
    rec["error"] = "query point inside the interior case; supply a container polytope";
    err << "error: " << rec["error"].get<std::string>() << "\n";
    out << rec.dump() << "\n";
    return kPrecondition;
  }
  rec["status"] = "ok";
  rec["maximizer"] = to_json(rep.maximizer);
  rec["value"] = rep.value;
  err << "value: " << rep.value << " (upper bound " << rep.upper_bound << ")\n";
  if (flags.oracle) {
    const auto o = sample_farthest(inst.balls, inst.query, flags.oracle_samples, cfg.seed);
    rec["oracle"] = {{"value", o.value}, {"samples", flags.oracle_samples}, {"seed", o.seed},
                     {"difference", rep.value - o.value}};
    err << "oracle: " << o.value << " from " << flags.oracle_samples << " samples\n";
  }
  out << rec.dump() << "\n";
  return kOk;
}

int cmd_subset_sum(const Flags& flags, std::ostream& out, std::ostream& err) {
  const json doc = load(flags.path);
  require_kind(doc, "subset_sum");
  const auto file = parse_subset_sum(doc);
  const FrameworkConfig cfg = read_config(doc, flags);
  std::optional<SubsetSumInstance> inst;
  try {
    inst.emplace(file.S);
  } catch (const InstanceError& e) {
    throw SchemaError(std::string("S: ") + e.what());
  }

  DecisionReport rep;
  try {
    rep = decide_subset_sum(*inst, cfg, file.params);
  } catch (const InstanceError& e) {
    // Supplied rho/beta/alpha break the required parameter chain.
    throw PreconditionError(e.what());
  }
  json rec = {{"command", "subset-sum"},
              {"instance", strip_config(doc)},
              {"config", config_json(cfg)},
              {"answer", to_string(rep.answer)},
              {"branch", to_string(rep.branch)},
              {"witness", rep.witness_subset ? one_based(*rep.witness_subset) : json(nullptr)},
              {"label", rep.label ? json(to_string(*rep.label)) : json(nullptr)},
              {"parameters", {{"rho", rep.rho}, {"beta", rep.beta}, {"alpha", rep.alpha},
                              {"rho_bar", rep.rho_bar}, {"rho_delta", rep.rho_delta}}},
              {"residuals", {{"subset", rep.residual}, {"rounding", rep.rounding_residual},
                             {"theta", rep.theta_residual}}},
              {"corner_value", rep.corner_value},
              {"value", rep.value},
              {"upper_bound", rep.upper_bound},
              {"diagnostics", rep.diagnostics}};
  err << "answer: " << to_string(rep.answer) << " (" << to_string(rep.branch) << ")\n";
  if (rep.witness_subset) err << "witness: " << one_based(*rep.witness_subset).dump() << "\n";
  if (!rep.diagnostics.empty()) err << "diagnostics: " << rep.diagnostics << "\n";

  int code = rep.answer == Answer::Inconclusive ? kInconclusive : kOk;
  if (flags.brute_force) {
    if (inst->n() > 24) {
      rec["brute_force"] = {{"skipped", "n > 24"}};
      err << "brute force: skipped, n > 24\n";
    } else {
      const auto bf = brute_force_subset_sum(*inst, 1);
      const bool agrees = rep.answer == Answer::Inconclusive || (rep.answer == Answer::Yes) == bf.yes;
      rec["brute_force"] = {{"yes", bf.yes},
                            {"witness", bf.witnesses.empty() ? json(nullptr) : one_based(bf.witnesses.front())},
                            {"witness_count", bf.witness_count},
                            {"agrees", agrees}};
      err << "brute force: " << (bf.yes ? "YES" : "NO") << ", " << (agrees ? "agreement" : "DISAGREEMENT") << "\n";
      if (!agrees) code = kCheckFailed;
    }
  }
  out << rec.dump() << "\n";
  return code;
}

json subset_sum_checks(const json& doc, const Flags& flags, bool& pass) {
  const auto file = parse_subset_sum(doc);
  std::optional<SubsetSumInstance> inst;
  try {
    inst.emplace(file.S);
  } catch (const InstanceError& e) {
    throw SchemaError(std::string("S: ") + e.what());
  }
  const auto n = inst->n();
  json checks = json::array();
  if (n == 1) {
    const double rho = file.params.rho.value_or(1.0);
    const double e = hypercube_corner_error(build_hypercube_disks(1, rho), 1);
    checks.push_back({{"check", "hypercube_corners"}, {"residual", e}, {"threshold", 1e-9}, {"pass", e <= 1e-9}});
    pass = pass && e <= 1e-9;
    return checks;
  }
  const double rho_bar = estimate_rho_bar(*inst);
  const double rho = file.params.rho.value_or(2 * std::max(rho_bar, rho_for_delta(*inst, 1.0 / (8.0 * n))));
  const double beta = file.params.beta.value_or(rho);
  if (n <= 20) {
    const double e = corner_exactness_check(build_disk_cover(*inst, rho, beta), *inst);
    checks.push_back({{"check", "corner_exactness"}, {"residual", e}, {"threshold", 1e-9}, {"pass", e <= 1e-9}});
    pass = pass && e <= 1e-9;
  } else {
    checks.push_back({{"check", "corner_exactness"}, {"skipped", "n > 20"}});
  }
  std::vector<double> alphas{file.params.alpha.value_or(2.0)};
  std::vector<double> radii{1.0};
  if (flags.alpha_grid) {
    alphas = {1.0, 1.5, 2.0, 4.0, 8.0};
    radii = {0.0, 0.5, 1.0, 2.0};
  }
  for (double alpha : alphas) {
    for (double R : radii) {
      json row = {{"check", "scaled_equivalence"}, {"alpha", alpha}, {"R", R}, {"threshold", 1e-9}};
      try {
        const double e = scaled_polytope_equivalence(*inst, rho, beta, alpha, R);
        row["residual"] = e;
        row["pass"] = e <= 1e-9;
        pass = pass && e <= 1e-9;
      } catch (const InstanceError& ex) {
        row["skipped"] = ex.what();
      }
      checks.push_back(row);
    }
  }
  return checks;
}

int cmd_validate(const Flags& flags, std::ostream& out, std::ostream& err) {
  const json doc = load(flags.path);
  const std::string kind = doc["kind"].get<std::string>();
  bool pass = true;
  json checks;
  FrameworkConfig cfg;
  if (kind == "subset_sum") {
    parse_subset_sum(doc);
    cfg = read_config(doc, flags);
    checks = subset_sum_checks(doc, flags, pass);
  } else if (kind == "coaxial") {
    const auto fam = parse_coaxial(doc);
    cfg = read_config(doc, flags);
    const auto rep = inclusion_sampler(fam, flags.samples, cfg.seed);
    pass = rep.violations == 0;
    checks = json::array({{{"check", "coaxial_inclusions"}, {"violations", rep.violations},
                           {"checks", rep.checks}, {"seed", rep.seed}, {"pass", pass}}});
  } else if (kind == "balls") {
    const auto inst = parse_balls(doc);
    cfg = read_config(doc, flags);
    const auto rep = farthest_point(inst.balls, inst.query, cfg, inst.container);
    if (rep.path == FarthestPath::Unresolved) {
      throw PreconditionError("query point inside the interior case; supply a container polytope");
    }
    const auto o = sample_farthest(inst.balls, inst.query, flags.oracle_samples, cfg.seed);
    const double diff = std::abs(rep.value - o.value);
    pass = diff <= 1e-3;
    checks = json::array({{{"check", "oracle_agreement"}, {"value", rep.value}, {"oracle", o.value},
                           {"residual", diff}, {"threshold", 1e-3}, {"pass", pass}}});
  } else {
    throw SchemaError("kind: expected one of balls, subset_sum, coaxial");
  }
  for (const auto& c : checks) {
    err << c["check"].get<std::string>();
    if (c.contains("alpha")) err << " (alpha " << c["alpha"].get<double>() << ", R " << c["R"].get<double>() << ")";
    if (c.contains("skipped")) {
      err << ": skipped, " << c["skipped"].get<std::string>() << "\n";
      continue;
    }
    if (c.contains("residual")) err << ": residual " << c["residual"].get<double>();
    if (c.contains("violations")) err << ": " << c["violations"].get<std::uint64_t>() << " violations";
    err << (c["pass"].get<bool>() ? " pass" : " FAIL") << "\n";
  }
  const json rec = {{"command", "validate"}, {"instance", strip_config(doc)}, {"config", config_json(cfg)},
                    {"checks", checks}, {"pass", pass}};
  out << rec.dump() << "\n";
  return pass ? kOk : kCheckFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Farthest points over ball intersections and a subset-sum decision procedure", "farpoint"};
  app.require_subcommand(1);
  Flags flags;

  auto common = [&flags](CLI::App* sub) {
    sub->add_option("instance", flags.path, "Instance file (JSON)")->required();
    sub->add_option("--tol-bisection", flags.tol_bisection, "Bisection tolerance");
    sub->add_option("--tol-solver", flags.tol_solver, "Convex solver tolerance");
    sub->add_option("--seed", flags.seed, "Random seed (overrides SOLVER_SEED)");
  };
  auto* farthest = app.add_subcommand("farthest", "Farthest point of a ball intersection from a query point");
  common(farthest);
  farthest->add_flag("--oracle", flags.oracle, "Compare against the sampling oracle");
  farthest->add_option("--oracle-samples", flags.oracle_samples, "Samples for --oracle");

  auto* subset = app.add_subcommand("subset-sum", "Decide whether a subset sums to zero");
  common(subset);
  subset->add_flag("--brute-force", flags.brute_force, "Cross-check by enumeration (n <= 24)");

  auto* validate = app.add_subcommand("validate", "Run the construction checks for an instance");
  common(validate);
  validate->add_flag("--alpha-grid", flags.alpha_grid, "Tabulate the scaled-cover residual over a grid");
  validate->add_option("--samples", flags.samples, "Samples for the coaxial inclusion check");
  validate->add_option("--oracle-samples", flags.oracle_samples, "Samples for the balls oracle check");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    err << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }

  try {
    if (farthest->parsed()) return cmd_farthest(flags, out, err);
    if (subset->parsed()) return cmd_subset_sum(flags, out, err);
    return cmd_validate(flags, out, err);
  } catch (const SchemaError& e) {
    err << "error: " << e.what() << "\n";
    out << json{{"status", "input_error"}, {"error", e.what()}}.dump() << "\n";
    return kInputError;
  } catch (const InstanceError& e) {
    err << "error: " << e.what() << "\n";
    out << json{{"status", "input_error"}, {"error", e.what()}}.dump() << "\n";
    return kInputError;
  } catch (const std::runtime_error& e) {
    // Precondition, construction and numerical failures.
    err << "error: " << e.what() << "\n";
    out << json{{"status", "precondition"}, {"error", e.what()}}.dump() << "\n";
    return kPrecondition;
  }
}

}  // namespace farpoint::cli
