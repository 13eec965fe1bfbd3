// Command-line front end: evaluate success probabilities, run the
// optimizers and greedy heuristics, simulate learners, generate
// instances, and dump similarity tables.
//
// Exit codes: 0 success (an infeasible solve is still a success -- the
// answer is "infeasible"), 2 usage error, 3 malformed input file,
// 4 resource budget exhausted before the scan finished.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pacteach/generators.hpp"
#include "pacteach/heuristics.hpp"
#include "pacteach/instance.hpp"
#include "pacteach/io.hpp"
#include "pacteach/learner.hpp"
#include "pacteach/optimize.hpp"
#include "pacteach/probability.hpp"

namespace {

using namespace pacteach;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitFormat = 3;
constexpr int kExitBudget = 4;

int default_threads() {
  if (const char* env = std::getenv("PACTEACH_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  return 1;
}

SimilarityMode parse_mode(const std::string& mode) {
  if (mode == "id") return SimilarityMode::Identification;
  if (mode == "em") return SimilarityMode::Employment;
  throw CLI::ValidationError("--mode", "expected 'id' or 'em'");
}

Index resolve_example(const Instance& inst, const std::string& id) {
  for (Index x = 0; x < inst.num_examples(); ++x) {
    if (inst.example_ids[static_cast<std::size_t>(x)] == id) return x;
  }
  throw CLI::ValidationError("--set", "unknown example id '" + id + "'");
}

TeachingSet set_from_ids(const Instance& inst, const std::vector<std::string>& ids) {
  std::vector<Index> indices;
  indices.reserve(ids.size());
  for (const auto& id : ids) indices.push_back(resolve_example(inst, id));
  return make_teaching_set(inst, indices);
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open '" + path + "' for writing");
  out << content;
}

struct CommonArgs {
  std::string instance_path;
  std::string format = "table";
  std::string mode = "id";
};

int run_evaluate(const CommonArgs& common, const std::vector<std::string>& set_ids,
                 double q) {
  const Instance inst = load_instance_file(common.instance_path);
  const TeachingSet set = set_from_ids(inst, set_ids);
  const SimilarityMode mode = parse_mode(common.mode);
  const GoodPartition part = good_partition(inst, q, mode);
  const double p = success_probability(inst, set, part);
  if (common.format == "json") {
    std::cout << "{\"success_probability\": " << format_double(p) << "}\n";
  } else {
    std::cout << format_double(p) << "\n";
  }
  return kExitOk;
}

struct SolveArgs {
  std::string objective;
  std::optional<double> q;
  std::optional<double> p;
  std::optional<Index> k;
  std::optional<int> d;
  bool exact = false;
  SolveBudget budget;
};

int run_solve(const CommonArgs& common, const SolveArgs& args) {
  const SimilarityMode mode = parse_mode(common.mode);

  const auto usage = [&](const std::string& msg) {
    std::cerr << "solve: " << msg << "\n";
    return kExitUsage;
  };
  SolveArgs a = args;
  if (a.objective == "probable") {
    if (!a.q || !a.k) return usage("--objective probable needs --q and --k");
    if (a.p || a.d || a.exact) {
      return usage("--objective probable takes neither --p, --d nor --exact");
    }
  } else if (a.objective == "approx") {
    if (!a.p || !a.k) return usage("--objective approx needs --p and --k");
    if (a.q) return usage("--objective approx takes no --q (it searches for one)");
    if (!a.d) a.d = 6;
    if (a.exact && common.mode != "id") {
      return usage("--exact needs --mode id (plain similarity takes finitely many values)");
    }
  } else if (a.objective == "size") {
    if (!a.q || !a.p) return usage("--objective size needs --q and --p");
    if (a.k || a.d || a.exact) {
      return usage("--objective size takes neither --k, --d nor --exact");
    }
  } else {
    return usage("unknown objective '" + a.objective + "'");
  }

  const Instance inst = load_instance_file(common.instance_path);

  SolveResult result;
  if (a.objective == "probable") {
    result = probable_optimize(inst, *a.q, *a.k, mode, a.budget);
  } else if (a.objective == "approx") {
    result = approx_optimize(inst, *a.p, *a.k, *a.d, mode, a.exact, a.budget);
  } else {
    result = size_optimize(inst, *a.q, *a.p, mode, a.budget);
  }

  const GoodPartition part = good_partition(inst, result.achieved_q, mode);
  SolveEcho echo;
  echo.q = a.q;
  echo.p = a.p;
  echo.k = a.k;
  echo.d = a.d;
  echo.exact = a.exact;
  const ReportFormat fmt =
      common.format == "json" ? ReportFormat::Json : ReportFormat::Table;
  std::cout << render_solve_report(inst, result, part, echo, fmt);
  return result.budget_exhausted ? kExitBudget : kExitOk;
}

struct HeuristicArgs {
  std::string criterion = "combined";
  double alpha = 1.0;
  std::string stop = "size:1";
};

int run_heuristic(const CommonArgs& common, const HeuristicArgs& args) {
  Criterion criterion;
  if (args.criterion == "uniqueness") {
    criterion = Criterion::Uniqueness;
  } else if (args.criterion == "homogeneity") {
    criterion = Criterion::Homogeneity;
  } else if (args.criterion == "combined") {
    criterion = Criterion::Combined;
  } else {
    std::cerr << "heuristic: unknown criterion '" << args.criterion << "'\n";
    return kExitUsage;
  }

  const SimilarityMode mode = parse_mode(common.mode);
  StopRule stop = StopAtSize{1};
  bool stop_by_success = false;
  if (args.stop.rfind("size:", 0) == 0) {
    try {
      stop = StopAtSize{static_cast<Index>(std::stoll(args.stop.substr(5)))};
    } catch (const std::exception&) {
      std::cerr << "heuristic: bad --stop size value\n";
      return kExitUsage;
    }
  } else if (args.stop.rfind("prob:", 0) == 0) {
    const std::string rest = args.stop.substr(5);
    const auto at = rest.find('@');
    if (at == std::string::npos) {
      std::cerr << "heuristic: --stop prob takes the form prob:P@Q\n";
      return kExitUsage;
    }
    try {
      StopAtSuccess rule;
      rule.p = std::stod(rest.substr(0, at));
      rule.q = std::stod(rest.substr(at + 1));
      rule.mode = mode;
      stop = rule;
      stop_by_success = true;
    } catch (const std::exception&) {
      std::cerr << "heuristic: bad --stop prob:P@Q values\n";
      return kExitUsage;
    }
  } else {
    std::cerr << "heuristic: --stop must be size:K or prob:P@Q\n";
    return kExitUsage;
  }

  const Instance inst = load_instance_file(common.instance_path);
  const std::vector<HeuristicScore> scores = score_all(inst, args.alpha);
  const GreedyResult result = greedy_teaching_set(inst, criterion, args.alpha, stop);

  const auto example_name = [&](Index x) -> const std::string& {
    return inst.example_ids[static_cast<std::size_t>(x)];
  };

  if (common.format == "json") {
    std::string out = "{\n  \"criterion\": \"" + args.criterion + "\",\n";
    out += "  \"alpha\": " + format_double(args.alpha) + ",\n";
    out += "  \"scores\": [\n";
    for (std::size_t i = 0; i < scores.size(); ++i) {
      const auto& s = scores[i];
      out += "    {\"example\": \"" + example_name(s.example) + "\", \"uniqueness\": " +
             format_double(s.uniqueness) + ", \"homogeneity\": " +
             format_double(s.homogeneity) + ", \"combined\": " +
             format_double(s.combined) + "}";
      out += i + 1 < scores.size() ? ",\n" : "\n";
    }
    out += "  ],\n  \"teaching_set\": [";
    for (std::size_t i = 0; i < result.teaching_set.items.size(); ++i) {
      const auto& item = result.teaching_set.items[i];
      if (i > 0) out += ", ";
      out += "{\"example\": \"" + example_name(item.example) + "\", \"label\": " +
             std::to_string(item.label) + "}";
    }
    out += "],\n";
    out += std::string("  \"satisfied\": ") + (result.satisfied ? "true" : "false");
    if (stop_by_success) {
      out += ",\n  \"achieved_p\": " + format_double(result.achieved_p);
    }
    out += "\n}\n";
    std::cout << out;
  } else {
    std::cout << "example      uniqueness    homogeneity   combined\n";
    for (const auto& s : scores) {
      std::printf("%-12s %-13s %-13s %s\n", example_name(s.example).c_str(),
                  format_double(s.uniqueness).c_str(),
                  format_double(s.homogeneity).c_str(),
                  format_double(s.combined).c_str());
    }
    std::cout << "teaching set: ";
    for (std::size_t i = 0; i < result.teaching_set.items.size(); ++i) {
      const auto& item = result.teaching_set.items[i];
      if (i > 0) std::cout << ", ";
      std::cout << "(" << example_name(item.example) << ", " << item.label << ")";
    }
    std::cout << "\nstop rule satisfied: " << (result.satisfied ? "yes" : "no") << "\n";
    if (stop_by_success) {
      std::cout << "achieved p: " << format_double(result.achieved_p) << "\n";
    }
  }
  return kExitOk;
}

struct SimulateArgs {
  std::vector<std::string> set_ids;
  std::uint64_t trials = 10000;
  std::uint64_t seed = 0;
  std::string learner = "prudent";
  std::string tie = "worst";
  double q = 1.0;
  int threads = 1;
};

int run_simulate(const CommonArgs& common, const SimulateArgs& args) {
  if (args.learner != "prudent" && args.learner != "naive") {
    std::cerr << "simulate: --learner must be 'prudent' or 'naive'\n";
    return kExitUsage;
  }
  if (args.tie != "worst" && args.tie != "uniform") {
    std::cerr << "simulate: --tie must be 'worst' or 'uniform'\n";
    return kExitUsage;
  }
  if (args.trials == 0) {
    std::cerr << "simulate: --trials must be positive\n";
    return kExitUsage;
  }

  const Instance inst = load_instance_file(common.instance_path);
  const TeachingSet set = set_from_ids(inst, args.set_ids);
  const SimilarityMode mode = parse_mode(common.mode);
  const GoodPartition part = good_partition(inst, args.q, mode);

  MonteCarloEstimate est;
  if (args.learner == "prudent" && args.tie == "worst") {
    est = monte_carlo_success(inst, set, part, args.trials, args.seed, args.threads);
  } else {
    // Same per-trial seeding as the worst-case estimator, so these runs
    // are reproducible too; they just count a different success flag.
    std::uint64_t hits = 0;
    for (std::uint64_t t = 0; t < args.trials; ++t) {
      SplitMix64 rng(trial_seed(args.seed, t));
      LearnerOutcome outcome;
      if (args.learner == "prudent") {
        outcome = run_prudent(inst, set, part, rng, TieRule::Uniform);
      } else {
        outcome = run_naive(inst, set, rng, &part);
      }
      if (outcome.was_good) ++hits;
    }
    est.trials = args.trials;
    est.successes = hits;
    est.estimate = static_cast<double>(hits) / static_cast<double>(args.trials);
    est.std_error = std::sqrt(est.estimate * (1.0 - est.estimate) /
                              static_cast<double>(args.trials));
  }

  if (common.format == "json") {
    std::cout << "{\"estimate\": " << format_double(est.estimate)
              << ", \"std_error\": " << format_double(est.std_error)
              << ", \"trials\": " << est.trials << ", \"successes\": " << est.successes
              << "}\n";
  } else {
    std::cout << "estimate:  " << format_double(est.estimate) << "\n"
              << "std error: " << format_double(est.std_error) << "\n"
              << "trials:    " << est.trials << "\n"
              << "successes: " << est.successes << "\n";
  }
  return kExitOk;
}

struct GenArgs {
  std::string family;
  std::string out = "-";
  // multiples
  std::vector<int> ks = {5, 7, 11, 13, 17};
  int x_max = 1000;
  std::optional<int> target_k;
  std::string gamma = "zero";
  // circles / random
  Index n_concepts = 3;
  Index n_examples = 20;
  std::string error_model = "zero";
  std::uint64_t seed = 0;
  Index target_index = 0;
  double density = 0.5;
  double gamma_max = 0.3;
};

int run_gen(const GenArgs& args) {
  Instance inst;
  if (args.family == "multiples") {
    GammaSource gamma = GammaSource::zero();
    if (args.gamma == "zero") {
      // default
    } else if (args.gamma.rfind("const:", 0) == 0) {
      try {
        gamma = GammaSource::constant_rate(std::stod(args.gamma.substr(6)));
      } catch (const std::exception&) {
        std::cerr << "gen: bad --gamma const value\n";
        return kExitUsage;
      }
    } else if (args.gamma.rfind("file:", 0) == 0) {
      const std::string path = args.gamma.substr(5);
      gamma = GammaSource::from_matrix(load_gamma_matrix_file(
          path, static_cast<Index>(args.ks.size()), args.x_max));
    } else {
      std::cerr << "gen: --gamma must be zero, const:G or file:PATH\n";
      return kExitUsage;
    }
    const int target = args.target_k ? *args.target_k : args.ks.front();
    inst = gen_multiples(args.ks, args.x_max, target, gamma);
  } else if (args.family == "circles") {
    CirclesSpec spec;
    spec.n_concepts = args.n_concepts;
    spec.n_examples = args.n_examples;
    spec.seed = args.seed;
    spec.target = args.target_index;
    if (args.error_model == "zero") {
      spec.error = ZeroError{};
    } else if (args.error_model.rfind("band:", 0) == 0) {
      const std::string rest = args.error_model.substr(5);
      const auto colon = rest.find(':');
      if (colon == std::string::npos) {
        std::cerr << "gen: --error band takes the form band:WIDTH:GAMMA0\n";
        return kExitUsage;
      }
      try {
        spec.error = BoundaryBandError{std::stod(rest.substr(0, colon)),
                                       std::stod(rest.substr(colon + 1))};
      } catch (const std::exception&) {
        std::cerr << "gen: bad --error band values\n";
        return kExitUsage;
      }
    } else if (args.error_model.rfind("dist:", 0) == 0) {
      try {
        spec.error = DistanceProportionalError{std::stod(args.error_model.substr(5))};
      } catch (const std::exception&) {
        std::cerr << "gen: bad --error dist value\n";
        return kExitUsage;
      }
    } else {
      std::cerr << "gen: --error must be zero, band:W:G or dist:S\n";
      return kExitUsage;
    }
    inst = gen_circles(spec);
  } else if (args.family == "random") {
    RandomSpec spec;
    spec.n_concepts = args.n_concepts;
    spec.n_examples = args.n_examples;
    spec.density = args.density;
    spec.gamma_max = args.gamma_max;
    spec.seed = args.seed;
    inst = gen_random(spec);
  } else {
    std::cerr << "gen: unknown family '" << args.family << "'\n";
    return kExitUsage;
  }

  write_output(args.out, serialize_instance(inst));
  return kExitOk;
}

int run_simmatrix(const CommonArgs& common, const std::string& out_path) {
  const Instance inst = load_instance_file(common.instance_path);
  const SimilarityMode mode = parse_mode(common.mode);
  write_output(out_path, similarity_csv(inst, mode));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"teaching-set solver for learners with noisy consistency checks"};
  app.require_subcommand(1);

  CommonArgs common;
  const auto add_common = [&](CLI::App* sub, bool with_mode = true) {
    sub->add_option("--instance", common.instance_path, "instance file (JSON)")
        ->required();
    sub->add_option("--format", common.format, "output format")
        ->check(CLI::IsMember({"table", "json"}));
    if (with_mode) {
      sub->add_option("--mode", common.mode, "similarity mode")
          ->check(CLI::IsMember({"id", "em"}));
    }
  };

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "success probability of a given set");
  std::vector<std::string> eval_set;
  double eval_q = 1.0;
  add_common(evaluate);
  evaluate->add_option("--set", eval_set, "comma-separated example ids")
      ->required()
      ->delimiter(',');
  evaluate->add_option("--q", eval_q, "similarity threshold")->required();

  // solve
  auto* solve = app.add_subcommand("solve", "optimize a teaching set");
  SolveArgs solve_args;
  double solve_q = 0.0, solve_p = 0.0;
  Index solve_k = 0;
  int solve_d = 0;
  add_common(solve);
  solve->add_option("--objective", solve_args.objective, "probable | approx | size")
      ->required();
  auto* opt_q = solve->add_option("--q", solve_q, "similarity threshold");
  auto* opt_p = solve->add_option("--p", solve_p, "success level");
  auto* opt_k = solve->add_option("--k", solve_k, "teaching set size bound");
  auto* opt_d = solve->add_option("--d", solve_d, "threshold grid decimals");
  solve->add_flag("--exact", solve_args.exact,
                  "search actual similarity values instead of the grid");
  solve->add_option("--max-subsets", solve_args.budget.max_subsets,
                    "stop after this many candidate sets (0 = no cap)");
  solve->add_option("--max-seconds", solve_args.budget.max_seconds,
                    "wall-clock cap in seconds (0 = no cap)");
  solve->add_option("--threads", solve_args.budget.threads,
                    "worker threads (default: PACTEACH_THREADS or 1)");

  // heuristic
  auto* heuristic = app.add_subcommand("heuristic", "greedy teaching-set selection");
  HeuristicArgs heur_args;
  add_common(heuristic);
  heuristic->add_option("--criterion", heur_args.criterion,
                        "uniqueness | homogeneity | combined");
  heuristic->add_option("--alpha", heur_args.alpha, "weight of homogeneity in combined");
  heuristic->add_option("--stop", heur_args.stop, "size:K or prob:P@Q");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo learner runs");
  SimulateArgs sim_args;
  add_common(simulate);
  simulate->add_option("--set", sim_args.set_ids, "comma-separated example ids")
      ->required()
      ->delimiter(',');
  simulate->add_option("--trials", sim_args.trials, "number of runs");
  simulate->add_option("--seed", sim_args.seed, "master seed");
  simulate->add_option("--learner", sim_args.learner, "prudent | naive");
  simulate->add_option("--tie", sim_args.tie, "worst | uniform");
  simulate->add_option("--q", sim_args.q, "similarity threshold for the split");
  simulate->add_option("--threads", sim_args.threads, "worker threads");

  // gen
  auto* gen = app.add_subcommand("gen", "generate an instance file");
  GenArgs gen_args;
  int gen_target_k = 0;
  gen->add_option("--family", gen_args.family, "multiples | circles | random")
      ->required();
  gen->add_option("--out", gen_args.out, "output path ('-' = stdout)");
  gen->add_option("--ks", gen_args.ks, "divisors (multiples family)")->delimiter(',');
  gen->add_option("--xmax", gen_args.x_max, "largest example (multiples family)");
  auto* opt_target_k = gen->add_option("--target-k", gen_target_k,
                                       "divisor of the target concept");
  gen->add_option("--gamma", gen_args.gamma,
                  "zero | const:G | file:PATH (multiples family)");
  gen->add_option("--concepts", gen_args.n_concepts, "concept count");
  gen->add_option("--examples", gen_args.n_examples, "example count");
  gen->add_option("--error", gen_args.error_model,
                  "zero | band:W:G | dist:S (circles family)");
  gen->add_option("--seed", gen_args.seed, "generator seed");
  gen->add_option("--target-index", gen_args.target_index, "target concept index");
  gen->add_option("--density", gen_args.density, "P[label = 1] (random family)");
  gen->add_option("--gamma-max", gen_args.gamma_max,
                  "error rates uniform in [0, gamma-max] (random family)");

  // simmatrix
  auto* simmatrix = app.add_subcommand("simmatrix", "concept similarity table (CSV)");
  std::string simmatrix_out = "-";
  add_common(simmatrix);
  simmatrix->add_option("--out", simmatrix_out, "output path ('-' = stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (app.got_subcommand(evaluate)) {
      return run_evaluate(common, eval_set, eval_q);
    }
    if (app.got_subcommand(solve)) {
      if (opt_q->count()) solve_args.q = solve_q;
      if (opt_p->count()) solve_args.p = solve_p;
      if (opt_k->count()) solve_args.k = solve_k;
      if (opt_d->count()) solve_args.d = solve_d;
      if (!solve->count("--threads")) solve_args.budget.threads = default_threads();
      return run_solve(common, solve_args);
    }
    if (app.got_subcommand(heuristic)) {
      return run_heuristic(common, heur_args);
    }
    if (app.got_subcommand(simulate)) {
      if (!simulate->count("--threads")) sim_args.threads = default_threads();
      return run_simulate(common, sim_args);
    }
    if (app.got_subcommand(gen)) {
      if (opt_target_k->count()) gen_args.target_k = gen_target_k;
      return run_gen(gen_args);
    }
    if (app.got_subcommand(simmatrix)) {
      return run_simmatrix(common, simmatrix_out);
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const FormatError& e) {
    std::cerr << e.what() << "\n";
    return kExitFormat;
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitUsage;
}
