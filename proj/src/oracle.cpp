#include "adcover/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <unordered_map>

namespace adcover {

namespace {

using Clock = std::chrono::steady_clock;

struct Deadline {
  Clock::time_point start = Clock::now();
  double budget_ms;
  mutable int ticker = 0;
  explicit Deadline(double ms) : budget_ms(ms) {}
  void check() const {
    if ((++ticker & 0xFFF) != 0) return;
    const double ms =
        std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(Clock::now() - start)
            .count();
    if (ms > budget_ms) throw LimitError("oracle time budget exceeded");
  }
};

void check_limits(const CoverInstance& inst, const OracleLimits& limits) {
  auto errs = validate_instance(inst);
  if (!errs.empty()) {
    std::string msg = "oracle: invalid instance:";
    for (const auto& e : errs) msg += "\n  " + e;
    throw std::invalid_argument(msg);
  }
  if (inst.metric.size() > limits.max_vertices)
    throw LimitError("oracle limit exceeded: n=" + std::to_string(inst.metric.size()) + " > " +
                     std::to_string(limits.max_vertices));
  if (inst.dist.size() > limits.max_scenarios)
    throw LimitError("oracle limit exceeded: m=" + std::to_string(inst.dist.size()) + " > " +
                     std::to_string(limits.max_scenarios));
  if (inst.dist.size() > 13) throw LimitError("oracle: at most 13 scenarios are supported");
}

// State keys pack (visited set, consistent set, current vertex).
std::uint64_t pack_key(int u, std::uint32_t c, std::uint64_t vis) {
  return (vis << 18) | (static_cast<std::uint64_t>(c) << 5) | static_cast<std::uint64_t>(u);
}

// Scenario-membership masks per vertex, and vertex masks per scenario.
struct Masks {
  int n = 0, m = 0;
  std::vector<std::uint32_t> f_of_vertex;    // vertex -> scenarios containing it
  std::vector<std::uint64_t> verts_of_scen;  // scenario -> vertex bitmask
  std::vector<double> mass_of;               // scenario -> probability
  double mass(std::uint32_t c) const {
    double s = 0.0;
    while (c) {
      s += mass_of[__builtin_ctz(c)];
      c &= c - 1;
    }
    return s;
  }
};

Masks build_masks(const CoverInstance& inst) {
  Masks mk;
  mk.n = inst.metric.size();
  mk.m = inst.dist.size();
  mk.f_of_vertex.assign(mk.n, 0);
  mk.verts_of_scen.assign(mk.m, 0);
  mk.mass_of = inst.dist.probs;
  for (int i = 0; i < mk.m; ++i)
    for (int v : inst.dist.scenarios[i]) {
      mk.f_of_vertex[v] |= (1u << i);
      mk.verts_of_scen[i] |= (std::uint64_t{1} << v);
    }
  return mk;
}

// ---------------------------------------------------------------------------
// Isolation

struct IsoSolver {
  const CoverInstance& inst;
  const Masks mk;
  Deadline deadline;
  std::unordered_map<std::uint64_t, std::pair<double, int>> memo;  // -> (value, split vertex)

  IsoSolver(const CoverInstance& i, const OracleLimits& lim)
      : inst(i), mk(build_masks(i)), deadline(lim.time_budget_ms) {}

  std::uint64_t key(int u, std::uint32_t c) const {
    return (static_cast<std::uint64_t>(u) << 32) | c;
  }

  double solve(int u, std::uint32_t c) {
    if (__builtin_popcount(c) == 1)
      return mk.mass_of[__builtin_ctz(c)] * inst.metric.dist(u, inst.root);
    const auto it = memo.find(key(u, c));
    if (it != memo.end()) return it->second.first;
    deadline.check();
    double best = std::numeric_limits<double>::infinity();
    int best_v = -1;
    const double mass = mk.mass(c);
    for (int v = 0; v < mk.n; ++v) {
      const std::uint32_t split = mk.f_of_vertex[v] & c;
      if (split == 0 || split == c) continue;
      const double val = mass * inst.metric.dist(u, v) + solve(v, split) + solve(v, c & ~split);
      if (val < best - kTol * std::max(1.0, std::fabs(val))) {
        best = val;
        best_v = v;
      }
    }
    memo.emplace(key(u, c), std::make_pair(best, best_v));
    return best;
  }

  int rebuild(StrategyTree& tree, int u, std::uint32_t c) {
    if (__builtin_popcount(c) == 1) return tree.add_leaf(__builtin_ctz(c));
    const int v = memo.at(key(u, c)).second;
    const std::uint32_t split = mk.f_of_vertex[v] & c;
    const int yes = rebuild(tree, v, split);
    const int no = rebuild(tree, v, c & ~split);
    return tree.add_observe(v, yes, no);
  }
};

// ---------------------------------------------------------------------------
// AdapTSP

struct TspSolver {
  const CoverInstance& inst;
  const Masks mk;
  Deadline deadline;
  struct Entry {
    double value;
    int vertex;
  };
  std::unordered_map<std::uint64_t, Entry> memo;

  TspSolver(const CoverInstance& i, const OracleLimits& lim)
      : inst(i), mk(build_masks(i)), deadline(lim.time_budget_ms) {}

  std::uint64_t key(int u, std::uint32_t c, std::uint64_t vis) const {
    return pack_key(u, c, vis);
  }

  bool done(std::uint32_t c, std::uint64_t vis) const {
    if (__builtin_popcount(c) != 1) return false;
    return (mk.verts_of_scen[__builtin_ctz(c)] & ~vis) == 0;
  }

  double solve(int u, std::uint32_t c, std::uint64_t vis) {
    if (done(c, vis)) return mk.mass(c) * inst.metric.dist(u, inst.root);
    const auto it = memo.find(key(u, c, vis));
    if (it != memo.end()) return it->second.value;
    deadline.check();
    double best = std::numeric_limits<double>::infinity();
    int best_v = -1;
    const double mass = mk.mass(c);
    for (int v = 0; v < mk.n; ++v) {
      if (vis & (std::uint64_t{1} << v)) continue;
      const std::uint32_t split = mk.f_of_vertex[v] & c;
      if (split == 0) continue;  // neither informative nor demanded by any consistent scenario
      const std::uint64_t nvis = vis | (std::uint64_t{1} << v);
      double val = mass * inst.metric.dist(u, v);
      if (split == c) {
        val += solve(v, c, nvis);
      } else {
        val += solve(v, split, nvis) + solve(v, c & ~split, nvis);
      }
      if (val < best - kTol * std::max(1.0, std::fabs(val))) {
        best = val;
        best_v = v;
      }
    }
    memo.emplace(key(u, c, vis), Entry{best, best_v});
    return best;
  }

  int rebuild(StrategyTree& tree, int u, std::uint32_t c, std::uint64_t vis) {
    if (done(c, vis)) return tree.add_leaf(__builtin_ctz(c));
    const int v = memo.at(key(u, c, vis)).vertex;
    const std::uint32_t split = mk.f_of_vertex[v] & c;
    const std::uint64_t nvis = vis | (std::uint64_t{1} << v);
    if (split == c) return tree.add_waypoint(v, rebuild(tree, v, c, nvis));
    const int yes = rebuild(tree, v, split, nvis);
    const int no = rebuild(tree, v, c & ~split, nvis);
    return tree.add_observe(v, yes, no);
  }
};

// ---------------------------------------------------------------------------
// AdapTRP

struct TrpSolver {
  const CoverInstance& inst;
  const Masks mk;
  Deadline deadline;
  struct Entry {
    double value;
    int vertex;
  };
  std::unordered_map<std::uint64_t, Entry> memo;

  TrpSolver(const CoverInstance& i, const OracleLimits& lim)
      : inst(i), mk(build_masks(i)), deadline(lim.time_budget_ms) {}

  std::uint64_t key(int u, std::uint32_t c, std::uint64_t vis) const {
    return pack_key(u, c, vis);
  }

  double pending_weight(std::uint32_t c, std::uint64_t vis) const {
    double w = 0.0;
    std::uint32_t x = c;
    while (x) {
      const int i = __builtin_ctz(x);
      w += mk.mass_of[i] * __builtin_popcountll(mk.verts_of_scen[i] & ~vis);
      x &= x - 1;
    }
    return w;
  }

  double solve(int u, std::uint32_t c, std::uint64_t vis) {
    const double pending = pending_weight(c, vis);
    if (pending <= 0.0) return 0.0;
    const auto it = memo.find(key(u, c, vis));
    if (it != memo.end()) return it->second.value;
    deadline.check();
    double best = std::numeric_limits<double>::infinity();
    int best_v = -1;
    for (int v = 0; v < mk.n; ++v) {
      if (vis & (std::uint64_t{1} << v)) continue;
      const std::uint32_t split = mk.f_of_vertex[v] & c;
      if (split == 0) continue;
      const std::uint64_t nvis = vis | (std::uint64_t{1} << v);
      double val = pending * inst.metric.dist(u, v);
      if (split == c) {
        val += solve(v, c, nvis);
      } else {
        val += solve(v, split, nvis) + solve(v, c & ~split, nvis);
      }
      if (val < best - kTol * std::max(1.0, std::fabs(val))) {
        best = val;
        best_v = v;
      }
    }
    memo.emplace(key(u, c, vis), Entry{best, best_v});
    return best;
  }

  int rebuild(StrategyTree& tree, int u, std::uint32_t c, std::uint64_t vis) {
    if (pending_weight(c, vis) <= 0.0) {
      // Any consistent scenario may be reported; pick the lowest for
      // determinism (labels are optional for adaptrp trees).
      return tree.add_leaf(__builtin_ctz(c));
    }
    const int v = memo.at(key(u, c, vis)).vertex;
    const std::uint32_t split = mk.f_of_vertex[v] & c;
    const std::uint64_t nvis = vis | (std::uint64_t{1} << v);
    if (split == c) return tree.add_waypoint(v, rebuild(tree, v, c, nvis));
    const int yes = rebuild(tree, v, split, nvis);
    const int no = rebuild(tree, v, c & ~split, nvis);
    return tree.add_observe(v, yes, no);
  }
};

StrategyTree rooted(StrategyTree tree, int node, int root) {
  tree.root = node;
  return ensure_rooted(std::move(tree), root);
}

// ---------------------------------------------------------------------------
// Unrestricted reference searches

enum class Mode { Isolation, AdapTsp, AdapTrp };

struct FreeSolver {
  const CoverInstance& inst;
  const Masks mk;
  Mode mode;
  Deadline deadline;
  std::unordered_map<std::uint64_t, double> memo;

  FreeSolver(const CoverInstance& i, Mode md, const OracleLimits& lim)
      : inst(i), mk(build_masks(i)), mode(md), deadline(lim.time_budget_ms) {}

  std::uint64_t key(int u, std::uint32_t c, std::uint64_t vis) const {
    return pack_key(u, c, vis);
  }

  bool done(std::uint32_t c, std::uint64_t vis) const {
    switch (mode) {
      case Mode::Isolation: return __builtin_popcount(c) == 1;
      case Mode::AdapTsp:
        return __builtin_popcount(c) == 1 &&
               (mk.verts_of_scen[__builtin_ctz(c)] & ~vis) == 0;
      case Mode::AdapTrp: {
        std::uint32_t x = c;
        while (x) {
          if (mk.verts_of_scen[__builtin_ctz(x)] & ~vis) return false;
          x &= x - 1;
        }
        return true;
      }
    }
    return true;
  }

  double terminal(int u, std::uint32_t c) const {
    if (mode == Mode::AdapTrp) return 0.0;
    return mk.mass(c) * inst.metric.dist(u, inst.root);
  }

  double edge_weight(std::uint32_t c, std::uint64_t vis) const {
    if (mode != Mode::AdapTrp) return mk.mass(c);
    double w = 0.0;
    std::uint32_t x = c;
    while (x) {
      const int i = __builtin_ctz(x);
      w += mk.mass_of[i] * __builtin_popcountll(mk.verts_of_scen[i] & ~vis);
      x &= x - 1;
    }
    return w;
  }

  double solve(int u, std::uint32_t c, std::uint64_t vis) {
    if (done(c, vis)) return terminal(u, c);
    const auto it = memo.find(key(u, c, vis));
    if (it != memo.end()) return it->second;
    deadline.check();
    double best = std::numeric_limits<double>::infinity();
    for (int v = 0; v < mk.n; ++v) {
      if (vis & (std::uint64_t{1} << v)) continue;
      const std::uint32_t split = mk.f_of_vertex[v] & c;
      const std::uint64_t nvis = vis | (std::uint64_t{1} << v);
      double val = edge_weight(c, vis) * inst.metric.dist(u, v);
      if (split == 0 || split == c) {
        val += solve(v, c, nvis);
      } else {
        val += solve(v, split, nvis) + solve(v, c & ~split, nvis);
      }
      best = std::min(best, val);
    }
    memo.emplace(key(u, c, vis), best);
    return best;
  }
};

double run_free(const CoverInstance& inst, Mode mode, const OracleLimits& limits) {
  check_limits(inst, limits);
  if (inst.metric.size() > 18) throw LimitError("unrestricted search: too many vertices");
  FreeSolver fs(inst, mode, limits);
  const std::uint32_t all = (1u << inst.dist.size()) - 1;
  const std::uint64_t vis0 = std::uint64_t{1} << inst.root;
  // The start observes the root for free.
  const std::uint32_t at_root = fs.mk.f_of_vertex[inst.root] & all;
  double total = 0.0;
  if (at_root != 0) total += fs.solve(inst.root, at_root, vis0);
  if ((all & ~at_root) != 0) total += fs.solve(inst.root, all & ~at_root, vis0);
  return total;
}

}  // namespace

OracleResult opt_isolation_exact(const CoverInstance& inst, const OracleLimits& limits) {
  check_limits(inst, limits);
  if (inst.dist.size() == 1) {
    OracleResult res;
    res.value = 0.0;
    res.tree.root = res.tree.add_leaf(0);
    return res;
  }
  IsoSolver solver(inst, limits);
  const std::uint32_t all = (1u << inst.dist.size()) - 1;
  OracleResult res;
  res.value = solver.solve(inst.root, all);
  const int node = solver.rebuild(res.tree, inst.root, all);
  res.tree = rooted(std::move(res.tree), node, inst.root);
  return res;
}

OracleResult opt_adaptsp_exact(const CoverInstance& inst, const OracleLimits& limits) {
  check_limits(inst, limits);
  if (inst.metric.size() > 18) throw LimitError("adaptsp oracle: at most 18 vertices");
  TspSolver solver(inst, limits);
  const std::uint32_t all = (1u << inst.dist.size()) - 1;
  const std::uint64_t vis0 = std::uint64_t{1} << inst.root;
  // The demand bit at the root is visible for free before any travel.
  const std::uint32_t at_root = solver.mk.f_of_vertex[inst.root] & all;
  OracleResult res;
  if (at_root == 0 || at_root == all) {
    res.value = solver.solve(inst.root, all, vis0);
    const int node = solver.rebuild(res.tree, inst.root, all, vis0);
    res.tree = rooted(std::move(res.tree), node, inst.root);
  } else {
    res.value = solver.solve(inst.root, at_root, vis0) +
                solver.solve(inst.root, all & ~at_root, vis0);
    const int yes = solver.rebuild(res.tree, inst.root, at_root, vis0);
    const int no = solver.rebuild(res.tree, inst.root, all & ~at_root, vis0);
    res.tree.root = res.tree.add_observe(inst.root, yes, no);
  }
  return res;
}

OracleResult opt_adaptrp_exact(const CoverInstance& inst, const OracleLimits& limits) {
  check_limits(inst, limits);
  if (inst.metric.size() > 18) throw LimitError("adaptrp oracle: at most 18 vertices");
  TrpSolver solver(inst, limits);
  const std::uint32_t all = (1u << inst.dist.size()) - 1;
  const std::uint64_t vis0 = std::uint64_t{1} << inst.root;
  const std::uint32_t at_root = solver.mk.f_of_vertex[inst.root] & all;
  OracleResult res;
  if (at_root == 0 || at_root == all) {
    res.value = solver.solve(inst.root, all, vis0);
    const int node = solver.rebuild(res.tree, inst.root, all, vis0);
    res.tree = rooted(std::move(res.tree), node, inst.root);
  } else {
    res.value = solver.solve(inst.root, at_root, vis0) +
                solver.solve(inst.root, all & ~at_root, vis0);
    const int yes = solver.rebuild(res.tree, inst.root, at_root, vis0);
    const int no = solver.rebuild(res.tree, inst.root, all & ~at_root, vis0);
    res.tree.root = res.tree.add_observe(inst.root, yes, no);
  }
  return res;
}

double opt_isolation_unrestricted(const CoverInstance& inst, const OracleLimits& limits) {
  return run_free(inst, Mode::Isolation, limits);
}
double opt_adaptsp_unrestricted(const CoverInstance& inst, const OracleLimits& limits) {
  return run_free(inst, Mode::AdapTsp, limits);
}
double opt_adaptrp_unrestricted(const CoverInstance& inst, const OracleLimits& limits) {
  return run_free(inst, Mode::AdapTrp, limits);
}

TourOracleResult opt_gso_exact(const GsoInstance& inst, const OracleLimits& limits) {
  std::vector<int> rel;
  for (int v = 0; v < inst.metric.size(); ++v) {
    bool in_group = false;
    for (const auto& g : inst.groups)
      if (std::find(g.begin(), g.end(), v) != g.end()) in_group = true;
    if (in_group && v != inst.root) rel.push_back(v);
  }
  if (static_cast<int>(rel.size()) > limits.max_vertices)
    throw LimitError("gso enumeration oracle: too many group vertices");
  TourOracleResult best;
  best.tour = Tour::loop(inst.root);
  best.value = profit(inst, best.tour);
  double best_len = 0.0;
  std::vector<int> seq;
  std::vector<char> used(inst.metric.size(), 0);
  Deadline deadline(limits.time_budget_ms);
  // Depth-first over all vertex sequences within budget.
  std::function<void(int, double)> go = [&](int u, double len) {
    deadline.check();
    for (int v : rel) {
      if (used[v]) continue;
      const double to = len + inst.metric.dist(u, v);
      const double closed = to + inst.metric.dist(v, inst.root);
      if (!nearly_leq(closed, inst.budget)) continue;
      used[v] = 1;
      seq.push_back(v);
      Tour t;
      t.vertices.push_back(inst.root);
      t.vertices.insert(t.vertices.end(), seq.begin(), seq.end());
      t.vertices.push_back(inst.root);
      const double p = profit(inst, t);
      if (p > best.value + kTol ||
          (nearly_equal(p, best.value) && closed < best_len - kTol)) {
        best.value = p;
        best.tour = t;
        best_len = closed;
      }
      go(v, to);
      seq.pop_back();
      used[v] = 0;
    }
  };
  go(inst.root, 0.0);
  return best;
}

TourOracleResult opt_lpgst_exact(const LpgstInstance& inst, const OracleLimits& limits) {
  std::vector<int> rel;
  for (int v = 0; v < inst.metric.size(); ++v) {
    bool in_group = false;
    for (const auto& g : inst.groups)
      if (std::find(g.begin(), g.end(), v) != g.end()) in_group = true;
    if (in_group && v != inst.root) rel.push_back(v);
  }
  if (static_cast<int>(rel.size()) > limits.max_vertices)
    throw LimitError("lpgst enumeration oracle: too many group vertices");
  TourOracleResult best;
  best.value = std::numeric_limits<double>::infinity();
  Deadline deadline(limits.time_budget_ms);
  std::vector<int> seq;
  std::vector<char> used(inst.metric.size(), 0);
  auto consider = [&]() {
    Tour t;
    t.vertices.push_back(inst.root);
    t.vertices.insert(t.vertices.end(), seq.begin(), seq.end());
    t.vertices.push_back(inst.root);
    if (covered_groups(inst, t) < inst.target) return;
    const double lat = lpgst_latency(inst, t);
    if (lat < best.value - kTol * std::max(1.0, lat)) {
      best.value = lat;
      best.tour = t;
    }
  };
  std::function<void()> go = [&]() {
    deadline.check();
    consider();
    for (int v : rel) {
      if (used[v]) continue;
      used[v] = 1;
      seq.push_back(v);
      go();
      seq.pop_back();
      used[v] = 0;
    }
  };
  go();
  if (!std::isfinite(best.value))
    throw InfeasibleError("lpgst enumeration oracle: target coverage unattainable");
  return best;
}

namespace {

struct OdtSolver {
  const OdtInstance& inst;
  Deadline deadline;
  struct Entry {
    double value;
    int test;
  };
  std::unordered_map<std::uint32_t, Entry> memo;

  OdtSolver(const OdtInstance& i, const OracleLimits& lim)
      : inst(i), deadline(lim.time_budget_ms) {}

  double mass(std::uint32_t c) const {
    double s = 0.0;
    while (c) {
      s += inst.priors[__builtin_ctz(c)];
      c &= c - 1;
    }
    return s;
  }

  std::uint32_t part_mask(const OdtInstance::Test& t, int outcome, std::uint32_t c) const {
    std::uint32_t out = 0;
    std::uint32_t x = c;
    while (x) {
      const int d = __builtin_ctz(x);
      if (t.outcome_of(d) == outcome) out |= (1u << d);
      x &= x - 1;
    }
    return out;
  }

  double solve(std::uint32_t c) {
    if (__builtin_popcount(c) <= 1) return 0.0;
    const auto it = memo.find(c);
    if (it != memo.end()) return it->second.value;
    deadline.check();
    double best = std::numeric_limits<double>::infinity();
    int best_t = -1;
    const double m = mass(c);
    for (std::size_t j = 0; j < inst.tests.size(); ++j) {
      const auto& t = inst.tests[j];
      bool splits = false;
      for (int k = 0; k < t.outcomes() && !splits; ++k) {
        const std::uint32_t part = part_mask(t, k, c);
        if (part != 0 && part != c) splits = true;
      }
      if (!splits) continue;  // an uninformative test only adds cost
      double val = m * t.cost;
      for (int k = 0; k < t.outcomes(); ++k) {
        const std::uint32_t part = part_mask(t, k, c);
        if (part) val += solve(part);
      }
      if (val < best - kTol * std::max(1.0, std::fabs(val))) {
        best = val;
        best_t = static_cast<int>(j);
      }
    }
    if (best_t < 0)
      throw InfeasibleError("odt oracle: consistent disease set cannot be split further");
    memo.emplace(c, Entry{best, best_t});
    return best;
  }

  int rebuild(TestStrategy& out, std::uint32_t c) {
    if (__builtin_popcount(c) <= 1)
      return out.add_leaf(c ? __builtin_ctz(c) : -1);
    const int j = memo.at(c).test;
    const auto& t = inst.tests[j];
    std::vector<int> children(t.outcomes(), -1);
    for (int k = 0; k < t.outcomes(); ++k) {
      const std::uint32_t part = part_mask(t, k, c);
      children[k] = part ? rebuild(out, part) : out.add_leaf(-1);
    }
    return out.add_test(j, std::move(children));
  }
};

}  // namespace

OdtOracleResult opt_odt_exact(const OdtInstance& inst, const OracleLimits& limits) {
  auto errs = validate_odt(inst);
  if (!errs.empty()) {
    std::string msg = "odt oracle: invalid instance:";
    for (const auto& e : errs) msg += "\n  " + e;
    throw std::invalid_argument(msg);
  }
  if (inst.diseases() > limits.max_scenarios)
    throw LimitError("odt oracle: too many diseases");
  OdtSolver solver(inst, limits);
  const std::uint32_t all = (1u << inst.diseases()) - 1;
  OdtOracleResult res;
  res.value = solver.solve(all);
  res.strategy.root = solver.rebuild(res.strategy, all);
  return res;
}

}  // namespace adcover
