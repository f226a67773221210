#include "adcover/strategy.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

namespace adcover {

int StrategyTree::add_observe(int vertex, int yes, int no) {
  Node n;
  n.kind = Node::Kind::Observe;
  n.vertex = vertex;
  n.yes = yes;
  n.no = no;
  nodes.push_back(n);
  return static_cast<int>(nodes.size()) - 1;
}

int StrategyTree::add_waypoint(int vertex, int child) {
  Node n;
  n.kind = Node::Kind::Waypoint;
  n.vertex = vertex;
  n.child = child;
  nodes.push_back(n);
  return static_cast<int>(nodes.size()) - 1;
}

int StrategyTree::add_leaf(int scenario) {
  Node n;
  n.kind = Node::Kind::Leaf;
  n.scenario = scenario;
  nodes.push_back(n);
  return static_cast<int>(nodes.size()) - 1;
}

std::vector<std::string> StrategyTree::validate(int n, int instance_root,
                                                std::vector<std::string>* warnings,
                                                bool require_root_label) const {
  std::vector<std::string> errs;
  if (root < 0 || root >= node_count()) {
    errs.push_back("root id out of range");
    return errs;
  }
  const Node& r = nodes[root];
  if (require_root_label && r.kind != Node::Kind::Leaf && r.vertex != instance_root)
    errs.push_back("root node is at vertex " + std::to_string(r.vertex) +
                   ", expected instance root " + std::to_string(instance_root));
  std::vector<int> state(nodes.size(), 0);  // 0 unseen, 1 on stack, 2 done
  // Iterative DFS detecting cycles/shared nodes and range errors.
  struct Frame {
    int id;
    int stage;
  };
  std::vector<Frame> stack{{root, 0}};
  std::vector<std::vector<int>> path_vertices;
  while (!stack.empty()) {
    auto [id, stage] = stack.back();
    stack.pop_back();
    if (id < 0 || id >= node_count()) {
      errs.push_back("child id out of range");
      continue;
    }
    const Node& nd = nodes[id];
    if (stage == 0) {
      if (state[id] == 1 || state[id] == 2) {
        errs.push_back("node " + std::to_string(id) + " reached twice (cycle or shared subtree)");
        continue;
      }
      state[id] = 1;
      stack.push_back({id, 1});
      if (nd.kind == Node::Kind::Observe) {
        if (nd.vertex < 0 || nd.vertex >= n)
          errs.push_back("observe vertex out of range at node " + std::to_string(id));
        if (nd.yes < 0 || nd.no < 0) {
          errs.push_back("observe node " + std::to_string(id) + " is missing a child");
        } else {
          stack.push_back({nd.yes, 0});
          stack.push_back({nd.no, 0});
        }
      } else if (nd.kind == Node::Kind::Waypoint) {
        if (nd.vertex < 0 || nd.vertex >= n)
          errs.push_back("waypoint vertex out of range at node " + std::to_string(id));
        if (nd.child < 0)
          errs.push_back("waypoint node " + std::to_string(id) + " is missing its child");
        else
          stack.push_back({nd.child, 0});
      }
    } else {
      state[id] = 2;
    }
  }
  if (warnings) {
    // A vertex observed twice on one root-leaf path branches deterministically
    // the second time; legal, but worth flagging.
    std::vector<int> seen;
    std::function<void(int)> walk = [&](int id) {
      const Node& nd = nodes[id];
      if (nd.kind == Node::Kind::Leaf) return;
      if (nd.kind == Node::Kind::Waypoint) {
        walk(nd.child);
        return;
      }
      if (std::find(seen.begin(), seen.end(), nd.vertex) != seen.end())
        warnings->push_back("vertex " + std::to_string(nd.vertex) +
                            " observed twice on one path (node " + std::to_string(id) + ")");
      seen.push_back(nd.vertex);
      walk(nd.yes);
      walk(nd.no);
      seen.pop_back();
    };
    if (errs.empty()) walk(root);
  }
  return errs;
}

StrategyTree ensure_rooted(StrategyTree tree, int instance_root) {
  const auto& r = tree.at(tree.root);
  if (r.kind != StrategyTree::Node::Kind::Leaf && r.vertex != instance_root)
    tree.root = tree.add_waypoint(instance_root, tree.root);
  return tree;
}

TracedPath trace(const StrategyTree& tree, const std::vector<int>& demand) {
  TracedPath out;
  if (tree.root < 0) throw std::invalid_argument("strategy tree has no root");
  int id = tree.root;
  int guard = 0;
  const int limit = tree.node_count() + 1;
  while (true) {
    if (++guard > limit) throw std::invalid_argument("malformed strategy tree (cycle)");
    const auto& nd = tree.at(id);
    if (nd.kind == StrategyTree::Node::Kind::Leaf) {
      out.leaf = id;
      return out;
    }
    out.vertices.push_back(nd.vertex);
    if (nd.kind == StrategyTree::Node::Kind::Waypoint) {
      id = nd.child;
      continue;
    }
    const bool bit = std::binary_search(demand.begin(), demand.end(), nd.vertex);
    out.observations.emplace_back(nd.vertex, bit);
    id = bit ? nd.yes : nd.no;
    if (id < 0) throw std::invalid_argument("observe node missing child");
  }
}

std::vector<FeasibilityViolation> check_feasible(const CoverInstance& inst,
                                                 const StrategyTree& tree) {
  std::vector<FeasibilityViolation> out;
  const int m = inst.dist.size();
  if (inst.objective == Objective::Isolation) {
    std::vector<int> leaf_of(m);
    for (int i = 0; i < m; ++i) {
      const auto path = trace(tree, inst.dist.scenarios[i]);
      leaf_of[i] = path.leaf;
      const int label = tree.at(path.leaf).scenario;
      if (label >= 0 && label != i)
        out.push_back({i, -1,
                       "scenario " + std::to_string(i) + " reaches a leaf labelled " +
                           std::to_string(label)});
    }
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j)
        if (leaf_of[i] == leaf_of[j])
          out.push_back({j, -1,
                         "scenarios " + std::to_string(i) + " and " + std::to_string(j) +
                             " share leaf node " + std::to_string(leaf_of[i])});
  } else {
    for (int i = 0; i < m; ++i) {
      const auto path = trace(tree, inst.dist.scenarios[i]);
      for (int v : inst.dist.scenarios[i]) {
        if (v == inst.root) continue;  // the path starts there
        if (std::find(path.vertices.begin(), path.vertices.end(), v) == path.vertices.end())
          out.push_back({i, v,
                         "scenario " + std::to_string(i) + " never visits demand vertex " +
                             std::to_string(v)});
      }
    }
  }
  return out;
}

namespace {

void require_feasible(const CoverInstance& inst, const StrategyTree& tree, const char* objective) {
  auto violations = check_feasible(inst, tree);
  if (!violations.empty()) {
    std::string msg = std::string("strategy infeasible for ") + objective + ":";
    for (const auto& v : violations) msg += "\n  " + v.what;
    throw FeasibilityError(msg, std::move(violations));
  }
}

}  // namespace

double scenario_tour_length(const CoverInstance& inst, const StrategyTree& tree, int scenario) {
  const auto path = trace(tree, inst.dist.scenarios[scenario]);
  double len = 0.0;
  int pos = inst.root;
  for (int v : path.vertices) {
    len += inst.metric.dist(pos, v);
    pos = v;
  }
  len += inst.metric.dist(pos, inst.root);
  return len;
}

double scenario_latency(const CoverInstance& inst, const StrategyTree& tree, int scenario) {
  const auto path = trace(tree, inst.dist.scenarios[scenario]);
  const auto& demand = inst.dist.scenarios[scenario];
  double len = 0.0;
  double total = 0.0;
  std::set<int> pending(demand.begin(), demand.end());
  pending.erase(inst.root);  // arrival 0
  int pos = inst.root;
  for (int v : path.vertices) {
    len += inst.metric.dist(pos, v);
    pos = v;
    if (pending.erase(v)) total += len;
  }
  if (!pending.empty())
    throw FeasibilityError("scenario " + std::to_string(scenario) +
                               " has unvisited demand vertices; latency undefined",
                           {{scenario, *pending.begin(), "unvisited demand vertex"}});
  return total;
}

double eval_isolation(const CoverInstance& inst, const StrategyTree& tree) {
  require_feasible(CoverInstance{inst.metric, inst.root, inst.dist, Objective::Isolation}, tree,
                   "isolation");
  double e = 0.0;
  for (int i = 0; i < inst.dist.size(); ++i)
    e += inst.dist.probs[i] * scenario_tour_length(inst, tree, i);
  return e;
}

double eval_adaptsp(const CoverInstance& inst, const StrategyTree& tree) {
  require_feasible(CoverInstance{inst.metric, inst.root, inst.dist, Objective::AdapTsp}, tree,
                   "adaptsp");
  double e = 0.0;
  for (int i = 0; i < inst.dist.size(); ++i)
    e += inst.dist.probs[i] * scenario_tour_length(inst, tree, i);
  return e;
}

double eval_adaptrp(const CoverInstance& inst, const StrategyTree& tree) {
  require_feasible(CoverInstance{inst.metric, inst.root, inst.dist, Objective::AdapTrp}, tree,
                   "adaptrp");
  double e = 0.0;
  for (int i = 0; i < inst.dist.size(); ++i)
    e += inst.dist.probs[i] * scenario_latency(inst, tree, i);
  return e;
}

std::string export_dot(const StrategyTree& tree, const Metric* metric) {
  std::ostringstream os;
  os << "digraph strategy {\n";
  if (tree.root >= 0) {
    // Deterministic ids: preorder, no branch taken first.
    std::vector<int> order;
    std::vector<int> renumber(tree.nodes.size(), -1);
    std::vector<int> stack{tree.root};
    while (!stack.empty()) {
      const int id = stack.back();
      stack.pop_back();
      renumber[id] = static_cast<int>(order.size());
      order.push_back(id);
      const auto& nd = tree.at(id);
      if (nd.kind == StrategyTree::Node::Kind::Observe) {
        stack.push_back(nd.yes);
        stack.push_back(nd.no);
      } else if (nd.kind == StrategyTree::Node::Kind::Waypoint) {
        stack.push_back(nd.child);
      }
    }
    auto vertex_name = [&](int v) {
      return metric ? metric->label(v) : "v" + std::to_string(v);
    };
    for (int id : order) {
      const auto& nd = tree.at(id);
      const int me = renumber[id];
      switch (nd.kind) {
        case StrategyTree::Node::Kind::Observe:
          os << "  n" << me << " [shape=ellipse,label=\"observe " << vertex_name(nd.vertex)
             << "\"];\n";
          os << "  n" << me << " -> n" << renumber[nd.yes] << " [label=\"yes\"];\n";
          os << "  n" << me << " -> n" << renumber[nd.no] << " [label=\"no\"];\n";
          break;
        case StrategyTree::Node::Kind::Waypoint:
          os << "  n" << me << " [shape=box,label=\"go " << vertex_name(nd.vertex) << "\"];\n";
          os << "  n" << me << " -> n" << renumber[nd.child] << ";\n";
          break;
        case StrategyTree::Node::Kind::Leaf:
          os << "  n" << me << " [shape=plaintext,label=\""
             << (nd.scenario >= 0 ? "scenario " + std::to_string(nd.scenario) : "-") << "\"];\n";
          break;
      }
    }
  }
  os << "}\n";
  return os.str();
}

}  // namespace adcover
