#include "adcover/odt.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace adcover {

int OdtInstance::Test::outcome_of(int disease) const {
  if (!multiway)
    return std::binary_search(subset.begin(), subset.end(), disease) ? 1 : 0;
  for (std::size_t k = 0; k < parts.size(); ++k)
    if (std::binary_search(parts[k].begin(), parts[k].end(), disease))
      return static_cast<int>(k);
  return -1;
}

std::vector<std::string> validate_odt(const OdtInstance& inst) {
  std::vector<std::string> errs;
  const int m = inst.diseases();
  if (m == 0) errs.push_back("no diseases");
  double sum = 0.0;
  for (int i = 0; i < m; ++i) {
    if (!(inst.priors[i] > 0)) errs.push_back("prior " + std::to_string(i) + " is not positive");
    sum += inst.priors[i];
  }
  if (m > 0 && !nearly_equal(sum, 1.0))
    errs.push_back("priors sum to " + std::to_string(sum) + ", not 1");
  for (std::size_t j = 0; j < inst.tests.size(); ++j) {
    const auto& t = inst.tests[j];
    if (!(t.cost >= 0)) errs.push_back("test " + std::to_string(j) + " has negative cost");
    if (!std::is_sorted(t.subset.begin(), t.subset.end()))
      errs.push_back("test " + std::to_string(j) + " subset is not sorted");
    for (const auto& part : t.parts)
      if (!std::is_sorted(part.begin(), part.end()))
        errs.push_back("test " + std::to_string(j) + " has an unsorted part");
    if (t.multiway) {
      std::vector<char> seen(m, 0);
      for (const auto& part : t.parts)
        for (int d : part) {
          if (d < 0 || d >= m) {
            errs.push_back("test " + std::to_string(j) + " names an unknown disease");
          } else if (seen[d]++) {
            errs.push_back("test " + std::to_string(j) + " parts overlap at disease " +
                           std::to_string(d));
          }
        }
      for (int d = 0; d < m; ++d)
        if (!seen[d])
          errs.push_back("test " + std::to_string(j) + " parts miss disease " +
                         std::to_string(d));
    } else {
      for (int d : t.subset)
        if (d < 0 || d >= m)
          errs.push_back("test " + std::to_string(j) + " names an unknown disease");
    }
  }
  // Separability: every disease pair must be split by some test.
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b) {
      bool split = false;
      for (const auto& t : inst.tests)
        if (t.outcome_of(a) != t.outcome_of(b)) {
          split = true;
          break;
        }
      if (!split)
        errs.push_back("diseases " + std::to_string(a) + " and " + std::to_string(b) +
                       " are not separated by any test");
    }
  return errs;
}

int TestStrategy::add_test(int test, std::vector<int> children) {
  Node n;
  n.is_leaf = false;
  n.test = test;
  n.children = std::move(children);
  nodes.push_back(std::move(n));
  return static_cast<int>(nodes.size()) - 1;
}

int TestStrategy::add_leaf(int disease) {
  Node n;
  n.is_leaf = true;
  n.disease = disease;
  nodes.push_back(std::move(n));
  return static_cast<int>(nodes.size()) - 1;
}

double eval_test_strategy(const OdtInstance& inst, const TestStrategy& strategy) {
  if (strategy.root < 0) throw std::invalid_argument("test strategy has no root");
  double total = 0.0;
  for (int d = 0; d < inst.diseases(); ++d) {
    double cost = 0.0;
    int id = strategy.root;
    int guard = 0;
    while (!strategy.nodes[id].is_leaf) {
      if (++guard > static_cast<int>(strategy.nodes.size()))
        throw std::invalid_argument("malformed test strategy (cycle)");
      const auto& nd = strategy.nodes[id];
      const auto& t = inst.tests[nd.test];
      cost += t.cost;
      const int k = t.outcome_of(d);
      if (k < 0 || k >= static_cast<int>(nd.children.size()))
        throw std::invalid_argument("test node lacks a child for the realized outcome");
      id = nd.children[k];
    }
    if (strategy.nodes[id].disease != d)
      throw FeasibilityError("disease " + std::to_string(d) + " reaches a leaf labelled " +
                                 std::to_string(strategy.nodes[id].disease),
                             {{d, -1, "leaf mislabel"}});
    total += inst.priors[d] * cost;
  }
  return total;
}

OdtReduction odt_to_isolation(const OdtInstance& inst) {
  auto errs = validate_odt(inst);
  if (!errs.empty()) {
    std::string msg = "invalid ODT instance:";
    for (const auto& e : errs) msg += "\n  " + e;
    throw std::invalid_argument(msg);
  }
  OdtReduction red;
  const int m = inst.diseases();
  // Base star: one vertex per test at distance cost/2; multiway outcome
  // copies are appended afterwards at distance zero from their source.
  std::vector<double> arms;
  red.vertex_info.push_back({-1, -1});
  red.outcome_vertex.resize(inst.tests.size());
  for (std::size_t j = 0; j < inst.tests.size(); ++j) {
    arms.push_back(inst.tests[j].cost / 2.0);
    const int base_vertex = static_cast<int>(arms.size());
    if (inst.tests[j].multiway) {
      red.outcome_vertex[j].assign(inst.tests[j].parts.size(), -1);
      red.outcome_vertex[j][0] = base_vertex;
      red.vertex_info.push_back({static_cast<int>(j), 0});
    } else {
      red.outcome_vertex[j] = {-1, base_vertex};  // demand <=> pass
      red.vertex_info.push_back({static_cast<int>(j), 1});
    }
  }
  Metric metric = Metric::star(arms);
  for (std::size_t j = 0; j < inst.tests.size(); ++j) {
    if (!inst.tests[j].multiway) continue;
    for (std::size_t k = 1; k < inst.tests[j].parts.size(); ++k) {
      metric = metric.with_twin(red.outcome_vertex[j][0]);
      red.outcome_vertex[j][k] = metric.size() - 1;
      red.vertex_info.push_back({static_cast<int>(j), static_cast<int>(k)});
    }
  }

  CoverInstance ci;
  ci.metric = std::move(metric);
  ci.root = 0;
  ci.objective = Objective::Isolation;
  std::vector<std::vector<int>> scenarios(m);
  for (int d = 0; d < m; ++d) {
    for (std::size_t j = 0; j < inst.tests.size(); ++j) {
      const int k = inst.tests[j].outcome_of(d);
      if (inst.tests[j].multiway) {
        scenarios[d].push_back(red.outcome_vertex[j][k]);
      } else if (k == 1) {
        scenarios[d].push_back(red.outcome_vertex[j][1]);
      }
    }
    std::sort(scenarios[d].begin(), scenarios[d].end());
  }
  ci.dist.scenarios = std::move(scenarios);
  ci.dist.probs = inst.priors;
  ci.dist.weights = inst.prior_weights;
  auto ierrs = validate_instance(ci);
  if (!ierrs.empty()) {
    std::string msg = "odt reduction produced an invalid instance:";
    for (const auto& e : ierrs) msg += "\n  " + e;
    throw std::invalid_argument(msg);
  }
  red.instance = std::move(ci);
  return red;
}

namespace {

struct Mapper {
  const StrategyTree& tree;
  const OdtInstance& inst;
  const OdtReduction& red;
  TestStrategy out;

  // Follows Waypoints (free on the star when they return to the center) and
  // resolves copy-observations of `known_test` whose outcome is already
  // fixed, without charging the test again (zero travel between copies).
  int skip_resolved(int id, int known_test, int known_outcome) const {
    int guard = 0;
    while (true) {
      if (++guard > tree.node_count() + 1)
        throw std::invalid_argument("malformed strategy tree (cycle)");
      const auto& nd = tree.at(id);
      if (nd.kind == StrategyTree::Node::Kind::Leaf) return id;
      if (nd.kind == StrategyTree::Node::Kind::Waypoint) {
        if (nd.vertex != red.instance.root)
          throw std::invalid_argument("strategy waypoints a non-center vertex " +
                                      std::to_string(nd.vertex));
        // Travelling to the center ends any zero-cost copy run.
        return id;
      }
      const auto [t, k] = red.vertex_info[nd.vertex];
      if (t == known_test && known_test >= 0) {
        id = (k == known_outcome) ? nd.yes : nd.no;
        continue;
      }
      return id;
    }
  }

  int map(int id) {
    const auto& nd = tree.at(id);
    switch (nd.kind) {
      case StrategyTree::Node::Kind::Leaf:
        return out.add_leaf(nd.scenario);
      case StrategyTree::Node::Kind::Waypoint: {
        if (nd.vertex != red.instance.root)
          throw std::invalid_argument("strategy waypoints a non-center vertex " +
                                      std::to_string(nd.vertex));
        return map(nd.child);
      }
      case StrategyTree::Node::Kind::Observe:
        break;
    }
    const auto [t, k0] = red.vertex_info[nd.vertex];
    if (t < 0) {
      // Observation at the center: no disease has demand there.
      return map(nd.no);
    }
    const auto& test = inst.tests[t];
    const int l = test.outcomes();
    std::vector<int> children(l, -1);
    // Walk the consecutive (zero travel) run of copy observations of test t.
    std::set<int> open;
    for (int k = 0; k < l; ++k) open.insert(k);
    int cur = id;
    while (true) {
      const auto& run = tree.at(cur);
      const int rk = red.vertex_info[run.vertex].second;
      open.erase(rk);
      // yes: the outcome is rk; resolve further same-test copies for free.
      children[rk] = map(skip_resolved(run.yes, t, rk));
      if (open.size() == 1) {
        // All but one outcome excluded: the no branch determines the rest.
        const int rest = *open.begin();
        children[rest] = map(skip_resolved(run.no, t, rest));
        open.clear();
        break;
      }
      // Chase the no branch through copies whose outcome is already excluded
      // (their yes side is unreachable and the hop costs nothing).
      int next = run.no;
      while (tree.at(next).kind == StrategyTree::Node::Kind::Observe) {
        const auto [nt, nk] = red.vertex_info[tree.at(next).vertex];
        if (nt == t && !open.count(nk))
          next = tree.at(next).no;
        else
          break;
      }
      const auto& nnd = tree.at(next);
      if (nnd.kind == StrategyTree::Node::Kind::Observe &&
          red.vertex_info[nnd.vertex].first == t &&
          open.count(red.vertex_info[nnd.vertex].second)) {
        cur = next;
        continue;
      }
      // The run ends with outcomes still open; they all share the
      // continuation, which is mapped once per outcome (trees do not share
      // subtrees).
      for (int rest : open) children[rest] = map(next);
      open.clear();
      break;
    }
    return out.add_test(t, std::move(children));
  }
};

}  // namespace

TestStrategy strategy_from_isolation(const StrategyTree& tree, const OdtInstance& inst,
                                     const OdtReduction& red) {
  for (const auto& nd : tree.nodes)
    if (nd.kind == StrategyTree::Node::Kind::Observe &&
        (nd.vertex < 0 || nd.vertex >= static_cast<int>(red.vertex_info.size())))
      throw std::invalid_argument("strategy observes a vertex outside the reduced instance");
  Mapper mapper{tree, inst, red, {}};
  mapper.out.root = mapper.map(tree.root);
  return std::move(mapper.out);
}

TestStrategy odt_solve(const OdtInstance& inst, const IsoPhaseSink* sink,
                       const LpgstConfig& config) {
  const OdtReduction red = odt_to_isolation(inst);
  const StrategyTree tree = iso_solve(red.instance, GsoOracle::star(config.seed_size), config,
                                      sink);
  return strategy_from_isolation(tree, inst, red);
}

std::string export_test_strategy_dot(const OdtInstance& inst, const TestStrategy& strategy) {
  std::ostringstream os;
  os << "digraph test_strategy {\n";
  for (int id = 0; id < static_cast<int>(strategy.nodes.size()); ++id) {
    const auto& nd = strategy.nodes[id];
    if (nd.is_leaf) {
      os << "  n" << id << " [shape=plaintext,label=\""
         << (nd.disease >= 0 ? "disease " + std::to_string(nd.disease) : "-") << "\"];\n";
    } else {
      os << "  n" << id << " [shape=ellipse,label=\"test " << nd.test << " (cost "
         << inst.tests[nd.test].cost << ")\"];\n";
      for (std::size_t k = 0; k < nd.children.size(); ++k) {
        os << "  n" << id << " -> n" << nd.children[k] << " [label=\"";
        if (inst.tests[nd.test].multiway)
          os << "outcome " << k;
        else
          os << (k == 1 ? "pass" : "fail");
        os << "\"];\n";
      }
    }
  }
  os << "}\n";
  return os.str();
}

}  // namespace adcover
