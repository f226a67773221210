#include "adcover/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "adcover/adaptrp.hpp"
#include "adcover/io.hpp"
#include "adcover/oracle.hpp"

namespace adcover {

namespace {

using Clock = std::chrono::steady_clock;

OracleLimits parse_limits(const std::string& spec) {
  OracleLimits lim;
  if (spec.empty()) return lim;
  std::istringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("bad --limits entry: " + item);
    const std::string key = item.substr(0, eq);
    const std::string val = item.substr(eq + 1);
    if (key == "n")
      lim.max_vertices = std::stoi(val);
    else if (key == "m")
      lim.max_scenarios = std::stoi(val);
    else if (key == "ms")
      lim.time_budget_ms = std::stod(val);
    else
      throw std::invalid_argument("bad --limits key: " + key);
  }
  return lim;
}

OracleLimits default_limits() {
  if (const char* env = std::getenv("ADCOVER_LIMITS")) return parse_limits(env);
  return {};
}

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(Clock::now() -
                                                                               start)
      .count();
}

double log_87(double m) { return std::log(m) / std::log(8.0 / 7.0); }

// Largest per-phase latency-vs-optimum ratio over the recorded phases.
double measured_phase_ratio(const CoverInstance& inst, const std::vector<IsoPhaseRecord>& phases,
                            const OracleLimits& limits) {
  double rho = 1.0;
  for (const auto& rec : phases) {
    const CoverInstance sub = restrict_to(inst, rec.sub);
    const double opt = opt_isolation_exact(sub, limits).value;
    if (opt > kTol) rho = std::max(rho, rec.tour_latency / opt);
  }
  return rho;
}

struct SolveOptions {
  std::string path;
  std::string objective = "auto";
  std::string oracle = "auto";
  bool exact_check = false;
  std::string limits_spec;
  double beta = 1.25;
  int gso_seeds = 3;
  std::string strategy_out;
  std::string report_out;
  std::string dot_out;
  std::optional<std::uint64_t> seed;
};

void emit_report(const RunReport& report, const std::string& report_out, std::ostream& out) {
  const std::string text = serialize_report(report);
  if (report_out.empty() || report_out == "-")
    out << text;
  else
    write_file_atomic(report_out, text);
}

int cmd_solve(const SolveOptions& opt, std::ostream& out) {
  const auto start = Clock::now();
  const std::string text = read_file(opt.path);
  const DocumentKind kind = sniff_kind(text);
  const OracleLimits limits =
      opt.limits_spec.empty() ? default_limits() : parse_limits(opt.limits_spec);
  LpgstConfig config;
  config.beta = opt.beta;
  config.seed_size = opt.gso_seeds;

  RunReport report;
  report.instance_digest = digest(text);
  if (opt.seed) report.seed = opt.seed;
  std::string strategy_text;
  std::string dot_text;

  if (kind == DocumentKind::OdtInstance || (kind == DocumentKind::Unknown && opt.objective == "odt")) {
    const OdtInstance inst = parse_odt(text);
    std::vector<IsoPhaseRecord> phases;
    IsoPhaseSink sink = [&](const IsoPhaseRecord& r) { phases.push_back(r); };
    const TestStrategy strategy = odt_solve(inst, &sink, config);
    report.solver = "odt_solve[star]";
    report.objective = "odt";
    report.value = eval_test_strategy(inst, strategy);
    if (opt.exact_check) {
      report.oracle_value = opt_odt_exact(inst, limits).value;
      if (*report.oracle_value > kTol) report.ratio = report.value / *report.oracle_value;
      OracleLimits star_limits = limits;
      star_limits.max_vertices = 64;  // reduced star metrics carry one vertex per outcome
      const OdtReduction red = odt_to_isolation(inst);
      const double rho = measured_phase_ratio(red.instance, phases, star_limits);
      report.bound_ratio = 2.0 * rho * log_87(std::max<double>(2, inst.diseases()));
    }
    strategy_text = serialize_test_strategy(strategy);
    if (!opt.dot_out.empty()) dot_text = export_test_strategy_dot(inst, strategy);
  } else {
    const CoverInstance inst = parse_instance(text);
    const std::string objective =
        opt.objective == "auto" ? to_string(inst.objective) : opt.objective;
    const GsoOracle oracle = GsoOracle::by_name(opt.oracle, opt.gso_seeds);
    StrategyTree tree;
    std::vector<IsoPhaseRecord> phases;
    IsoPhaseSink sink = [&](const IsoPhaseRecord& r) { phases.push_back(r); };
    if (objective == "isolation") {
      tree = iso_solve(inst, oracle, config, &sink);
      report.value = eval_isolation(inst, tree);
      report.solver = "iso_solve[" + oracle.resolve(inst.metric, inst.root).name() + "]";
      if (opt.exact_check) {
        report.oracle_value = opt_isolation_exact(inst, limits).value;
        if (*report.oracle_value > kTol) report.ratio = report.value / *report.oracle_value;
        const double rho = measured_phase_ratio(inst, phases, limits);
        report.bound_ratio = 2.0 * rho * log_87(std::max<double>(2, inst.dist.size()));
      }
    } else if (objective == "adaptsp") {
      tree = adaptsp_solve(inst, oracle, config, &sink);
      report.value = eval_adaptsp(inst, tree);
      report.solver = "adaptsp_solve[" + oracle.resolve(inst.metric, inst.root).name() + "]";
      if (opt.exact_check) {
        report.oracle_value = opt_adaptsp_exact(inst, limits).value;
        if (*report.oracle_value > kTol) report.ratio = report.value / *report.oracle_value;
      }
    } else if (objective == "adaptrp") {
      tree = adaptrp_solve(inst, oracle);
      report.value = eval_adaptrp(inst, tree);
      report.solver = "adaptrp_solve[" + oracle.resolve(inst.metric, inst.root).name() + "]";
      if (opt.exact_check) {
        report.oracle_value = opt_adaptrp_exact(inst, limits).value;
        if (*report.oracle_value > kTol) report.ratio = report.value / *report.oracle_value;
      }
    } else {
      throw std::invalid_argument("unknown objective: " + objective);
    }
    report.objective = objective;
    strategy_text = serialize_strategy(tree);
    if (!opt.dot_out.empty()) dot_text = export_dot(tree, &inst.metric);
  }

  const std::string strategy_path =
      opt.strategy_out.empty() ? opt.path + ".strategy.json" : opt.strategy_out;
  if (strategy_path != "-") write_file_atomic(strategy_path, strategy_text);
  if (!opt.dot_out.empty()) write_file_atomic(opt.dot_out, dot_text);
  report.wall_ms = elapsed_ms(start);
  emit_report(report, "", out);
  return kOk;
}

int cmd_eval(const std::string& instance_path, const std::string& strategy_path,
             std::ostream& out, std::ostream& err) {
  const auto start = Clock::now();
  const std::string itext = read_file(instance_path);
  const std::string stext = read_file(strategy_path);
  RunReport report;
  report.instance_digest = digest(itext);
  report.solver = "eval";
  if (sniff_kind(itext) == DocumentKind::OdtInstance) {
    const OdtInstance inst = parse_odt(itext);
    const TestStrategy strategy = parse_test_strategy(stext);
    report.objective = "odt";
    report.value = eval_test_strategy(inst, strategy);
  } else {
    const CoverInstance inst = parse_instance(itext);
    const StrategyTree tree = parse_strategy(stext);
    auto structural = tree.validate(inst.metric.size(), inst.root);
    if (!structural.empty()) {
      std::string msg = "strategy does not fit the instance:";
      for (const auto& e : structural) msg += "\n  " + e;
      throw std::invalid_argument(msg);
    }
    report.objective = to_string(inst.objective);
    auto violations = check_feasible(inst, tree);
    if (!violations.empty()) {
      err << "strategy infeasible for " << report.objective << ":\n";
      for (const auto& v : violations) err << "  " << v.what << "\n";
      return kInfeasible;
    }
    switch (inst.objective) {
      case Objective::Isolation: report.value = eval_isolation(inst, tree); break;
      case Objective::AdapTsp: report.value = eval_adaptsp(inst, tree); break;
      case Objective::AdapTrp: report.value = eval_adaptrp(inst, tree); break;
    }
  }
  report.wall_ms = elapsed_ms(start);
  emit_report(report, "", out);
  return kOk;
}

struct GenOptions {
  std::string kind;
  std::string out = "-";
  int n = 5;
  int m = 4;
  std::uint64_t seed = 1;
  std::string objective = "isolation";
  int dist_max = 12;
  double density = 0.45;
  int weight_max = 8;
  bool skew = false;
  std::string gst_path;
  std::string scale = "auto";
  int tests = 4;
  int outcomes = 2;
};

int cmd_gen(const GenOptions& opt, std::ostream& out) {
  std::string text;
  if (opt.kind == "paper-star") {
    text = serialize_instance(gen_paper_star(opt.n));
  } else if (opt.kind == "trp-star") {
    text = serialize_instance(gen_trp_star(opt.n));
  } else if (opt.kind == "random") {
    RandomParams params;
    params.dist_max = opt.dist_max;
    params.density = opt.density;
    params.weight_max = opt.weight_max;
    params.skew = opt.skew;
    params.objective = objective_from_string(opt.objective);
    text = serialize_instance(gen_random(opt.seed, opt.n, opt.m, params));
  } else if (opt.kind == "hardness") {
    if (opt.gst_path.empty())
      throw std::invalid_argument("gen hardness requires --gst <file>");
    const GstInstance gst = parse_gst(read_file(opt.gst_path));
    const double L = opt.scale == "auto" ? default_hardness_scale(gst) : std::stod(opt.scale);
    text = serialize_instance(gst_to_adaptsp(gst, L));
  } else if (opt.kind == "random-gst") {
    text = serialize_gst(gen_random_gst(opt.seed, opt.n, opt.m, opt.dist_max));
  } else if (opt.kind == "random-odt") {
    // Random separable ODT instance; rejection-sampled tests.
    Rng rng(opt.seed);
    OdtInstance inst;
    std::vector<std::int64_t> w(opt.m);
    for (int i = 0; i < opt.m; ++i)
      w[i] = opt.skew ? (std::int64_t{1} << std::min(i, 20)) : rng.uniform_int(1, opt.weight_max);
    std::int64_t total = 0;
    for (auto x : w) total += x;
    for (auto x : w) inst.priors.push_back(static_cast<double>(x) / static_cast<double>(total));
    inst.prior_weights = std::move(w);
    int guard = 0;
    while (static_cast<int>(inst.tests.size()) < opt.tests && ++guard < 10000) {
      OdtInstance::Test t;
      t.cost = rng.uniform_int(1, opt.dist_max);
      if (opt.outcomes > 2 && rng.coin(0.5)) {
        const int l = rng.uniform_int(3, opt.outcomes);
        t.multiway = true;
        t.parts.assign(l, {});
        for (int d = 0; d < opt.m; ++d) t.parts[rng.uniform_int(0, l - 1)].push_back(d);
        bool ok = false;
        for (const auto& p : t.parts)
          if (static_cast<int>(p.size()) != opt.m && !p.empty()) ok = true;
        if (!ok) continue;
      } else {
        for (int d = 0; d < opt.m; ++d)
          if (rng.coin(0.5)) t.subset.push_back(d);
        if (t.subset.empty() || static_cast<int>(t.subset.size()) == opt.m) continue;
      }
      inst.tests.push_back(std::move(t));
      if (static_cast<int>(inst.tests.size()) == opt.tests && !validate_odt(inst).empty())
        inst.tests.pop_back();  // keep sampling until the set separates
    }
    auto errs = validate_odt(inst);
    if (!errs.empty())
      throw std::invalid_argument("could not sample a separable ODT instance with these parameters");
    text = serialize_odt(inst);
  } else {
    throw std::invalid_argument("unknown generator kind: " + opt.kind);
  }
  if (opt.out == "-")
    out << text;
  else
    write_file_atomic(opt.out, text);
  return kOk;
}

bool read_answer(std::istream& in, std::ostream& out, const std::string& prompt,
                 const std::vector<std::string>& yes, const std::vector<std::string>& no) {
  std::string tok;
  while (true) {
    out << prompt << std::flush;
    if (!(in >> tok)) throw std::invalid_argument("input ended before the walk finished");
    for (const auto& y : yes)
      if (tok == y) return true;
    for (const auto& n : no)
      if (tok == n) return false;
    out << "please answer y/n\n";
  }
}

int cmd_walk(const std::string& instance_path, const std::string& strategy_path, std::istream& in,
             std::ostream& out) {
  const std::string itext = read_file(instance_path);
  const std::string stext = read_file(strategy_path);
  if (sniff_kind(itext) == DocumentKind::OdtInstance) {
    const OdtInstance inst = parse_odt(itext);
    const TestStrategy strategy = parse_test_strategy(stext);
    int id = strategy.root;
    double cost = 0.0;
    while (!strategy.nodes[id].is_leaf) {
      const auto& nd = strategy.nodes[id];
      const auto& t = inst.tests[nd.test];
      cost += t.cost;
      int k;
      if (t.multiway) {
        while (true) {
          out << "run test " << nd.test << " (cost " << t.cost << "); outcome? [0-"
              << t.outcomes() - 1 << "] " << std::flush;
          std::string tok;
          if (!(in >> tok)) throw std::invalid_argument("input ended before the walk finished");
          try {
            k = std::stoi(tok);
          } catch (...) {
            k = -1;
          }
          if (k >= 0 && k < t.outcomes()) break;
          out << "please answer an outcome index\n";
        }
      } else {
        k = read_answer(in, out,
                        "run test " + std::to_string(nd.test) + " (cost " +
                            std::to_string(t.cost) + "); pass? [y/n] ",
                        {"y", "yes", "1", "pass"}, {"n", "no", "0", "fail"})
                ? 1
                : 0;
      }
      out << "  accumulated cost: " << cost << "\n";
      id = nd.children[k];
    }
    out << "diagnosis: disease " << strategy.nodes[id].disease << "\n";
    out << "total cost: " << cost << "\n";
    return kOk;
  }

  const CoverInstance inst = parse_instance(itext);
  const StrategyTree tree = parse_strategy(stext);
  auto structural = tree.validate(inst.metric.size(), inst.root);
  if (!structural.empty()) {
    std::string msg = "strategy does not fit the instance:";
    for (const auto& e : structural) msg += "\n  " + e;
    throw std::invalid_argument(msg);
  }
  int id = tree.root;
  int pos = inst.root;
  double travelled = 0.0;
  std::vector<int> demands_seen;
  while (tree.at(id).kind != StrategyTree::Node::Kind::Leaf) {
    const auto& nd = tree.at(id);
    travelled += inst.metric.dist(pos, nd.vertex);
    pos = nd.vertex;
    if (nd.kind == StrategyTree::Node::Kind::Waypoint) {
      out << "travel to " << inst.metric.label(nd.vertex) << " (travelled " << travelled << ")\n";
      id = nd.child;
      continue;
    }
    const bool bit = read_answer(
        in, out,
        "at " + inst.metric.label(nd.vertex) + " (travelled " + std::to_string(travelled) +
            "); demand? [y/n] ",
        {"y", "yes", "1"}, {"n", "no", "0"});
    if (bit) demands_seen.push_back(nd.vertex);
    id = bit ? nd.yes : nd.no;
  }
  travelled += inst.metric.dist(pos, inst.root);
  const int scenario = tree.at(id).scenario;
  out << "inferred scenario: " << (scenario >= 0 ? std::to_string(scenario) : "-") << "\n";
  out << "total cost (including the return leg): " << travelled << "\n";
  return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"adaptive covering solvers: isolation, adaptive TSP/TRP, decision trees"};
  app.require_subcommand(1);

  SolveOptions sopt;
  auto* solve = app.add_subcommand("solve", "run a solver on an instance file");
  solve->add_option("instance", sopt.path, "instance file")->required();
  solve->add_option("--objective", sopt.objective,
                    "isolation|adaptsp|adaptrp|odt (default: from the file)");
  solve->add_option("--oracle", sopt.oracle, "GSO oracle: auto|exact|star");
  solve->add_flag("--exact-check", sopt.exact_check, "also run the exact oracle and report the ratio");
  solve->add_option("--limits", sopt.limits_spec, "oracle limits, e.g. n=10,m=10,ms=60000");
  solve->add_option("--beta", sopt.beta, "geometric budget scale (default 1.25)");
  solve->add_option("--gso-seeds", sopt.gso_seeds, "star-oracle enumeration depth (default 3)");
  solve->add_option("--strategy-out", sopt.strategy_out, "strategy output path (default <instance>.strategy.json)");
  solve->add_option("--dot-out", sopt.dot_out, "write a DOT rendering of the strategy");
  std::uint64_t seed_value = 0;
  auto* seed_opt = solve->add_option("--seed", seed_value, "seed recorded in the report");

  std::string eval_instance, eval_strategy;
  auto* eval = app.add_subcommand("eval", "evaluate a strategy file against an instance");
  eval->add_option("instance", eval_instance)->required();
  eval->add_option("strategy", eval_strategy)->required();

  GenOptions gopt;
  auto* gen = app.add_subcommand("gen", "generate instance files");
  gen->add_option("kind", gopt.kind, "paper-star|trp-star|random|random-gst|random-odt|hardness")
      ->required();
  gen->add_option("--out", gopt.out, "output path ('-' = stdout)");
  gen->add_option("--n", gopt.n, "vertex/leaf count");
  gen->add_option("--m", gopt.m, "scenario/disease/group count");
  gen->add_option("--seed", gopt.seed, "generator seed");
  gen->add_option("--objective", gopt.objective, "objective tag for random instances");
  gen->add_option("--dist-max", gopt.dist_max, "max edge weight / test cost");
  gen->add_option("--density", gopt.density, "scenario membership probability");
  gen->add_option("--weight-max", gopt.weight_max, "max probability weight");
  gen->add_flag("--skew", gopt.skew, "exponentially skewed probabilities");
  gen->add_option("--gst", gopt.gst_path, "GST instance for the hardness reduction");
  gen->add_option("--scale", gopt.scale, "hardness scale L, or 'auto'");
  gen->add_option("--tests", gopt.tests, "test count for random-odt");
  gen->add_option("--outcomes", gopt.outcomes, "max outcomes per test for random-odt");

  std::string walk_instance, walk_strategy;
  auto* walk = app.add_subcommand("walk", "execute a strategy interactively");
  walk->add_option("instance", walk_instance)->required();
  walk->add_option("strategy", walk_strategy)->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << "error: " << e.what() << "\n";
    return kInvalid;
  }

  try {
    if (*solve) {
      if (*seed_opt) sopt.seed = seed_value;
      return cmd_solve(sopt, out);
    }
    if (*eval) return cmd_eval(eval_instance, eval_strategy, out, err);
    if (*gen) return cmd_gen(gopt, out);
    if (*walk) return cmd_walk(walk_instance, walk_strategy, in, out);
  } catch (const FeasibilityError& e) {
    err << "infeasible: " << e.what() << "\n";
    return kInfeasible;
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << "\n";
    return kInfeasible;
  } catch (const LimitError& e) {
    err << "limits: " << e.what() << "\n";
    return kLimits;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInvalid;
  }
  return kInvalid;
}

}  // namespace adcover
