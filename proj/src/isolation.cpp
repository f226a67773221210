#include "adcover/isolation.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace adcover {

FlipSets flip_sets(const CoverInstance& inst, const SubInstance& sub) {
  const int n = inst.metric.size();
  const int g = static_cast<int>(sub.members.size());
  FlipSets out;
  out.d_sets.resize(n);
  out.flipped.assign(n, 0);
  out.x_groups.resize(g);
  for (int v = 0; v < n; ++v) {
    std::vector<int> f;
    for (int k = 0; k < g; ++k) {
      const auto& sc = inst.dist.scenarios[sub.members[k]];
      if (std::binary_search(sc.begin(), sc.end(), v)) f.push_back(k);
    }
    if (2 * static_cast<int>(f.size()) <= g) {
      out.d_sets[v] = std::move(f);
    } else {
      out.flipped[v] = 1;
      std::vector<int> d;
      std::size_t fi = 0;
      for (int k = 0; k < g; ++k) {
        if (fi < f.size() && f[fi] == k) {
          ++fi;
        } else {
          d.push_back(k);
        }
      }
      out.d_sets[v] = std::move(d);
    }
    for (int k : out.d_sets[v]) out.x_groups[k].push_back(v);
  }
  return out;
}

PartitionResult partition(const CoverInstance& inst, const SubInstance& sub,
                          const GsoOracle& oracle, const LpgstConfig& config) {
  const int g = static_cast<int>(sub.members.size());
  if (g < 2) throw std::invalid_argument("partition requires at least two scenarios");
  PartitionResult res;
  res.flips = flip_sets(inst, sub);

  LpgstInstance lp;
  lp.metric = inst.metric;
  lp.root = inst.root;
  lp.groups = res.flips.x_groups;
  lp.weights = sub.q;
  lp.target = g - 1;
  try {
    res.lpgst = lpgst_solve(lp, oracle, config);
  } catch (const InfeasibleError& e) {
    // Tracing any isolation strategy to its all-flips-excluded leaf covers
    // |M|-1 of the flip groups, so the sweep must find a feasible tour;
    // surface a diagnostic instead of degrading.
    throw InfeasibleError(std::string("partition: LPGST sweep failed unexpectedly (") +
                          e.what() + ")");
  }
  res.tour = res.lpgst.tour;

  res.positions.assign(res.tour.vertices.begin(), res.tour.vertices.end() - 1);
  std::vector<char> assigned(g, 0);
  for (int v : res.positions) {
    std::vector<int> part;
    for (int k : res.flips.d_sets[v])
      if (!assigned[k]) {
        assigned[k] = 1;
        part.push_back(k);
      }
    res.parts.push_back(std::move(part));
  }
  std::vector<int> rest;
  for (int k = 0; k < g; ++k)
    if (!assigned[k]) rest.push_back(k);
  res.parts.push_back(std::move(rest));
  for (const auto& part : res.parts) {
    double mass = 0.0;
    for (int k : part) mass += sub.q[k];
    res.part_mass.push_back(mass);
  }
  return res;
}

namespace {

SubInstance renormalized(const SubInstance& sub, const std::vector<int>& local_part,
                         double mass) {
  SubInstance out;
  for (int k : local_part) {
    out.members.push_back(sub.members[k]);
    out.q.push_back(sub.q[k] / mass);
  }
  return out;
}

struct IsoBuilder {
  const CoverInstance& inst;
  const GsoOracle& oracle;
  const LpgstConfig& config;
  const IsoPhaseSink* sink;
  StrategyTree tree;

  int build(const SubInstance& sub, int depth) {
    if (sub.members.size() == 1) return tree.add_leaf(sub.members[0]);
    PartitionResult pr = partition(inst, sub, oracle, config);
    if (sink && *sink) {
      IsoPhaseRecord rec;
      rec.sub = sub;
      rec.depth = depth;
      rec.tour = pr.tour;
      rec.tour_latency = pr.lpgst.latency;
      for (const auto& part : pr.parts) {
        std::vector<int> global;
        for (int k : part) global.push_back(sub.members[k]);
        rec.parts.push_back(std::move(global));
      }
      rec.part_mass = pr.part_mass;
      (*sink)(rec);
    }
    // Chain the observation nodes back to front; the stop branch at position
    // k returns to the root and recurses on P_k, the other branch walks on.
    const int t = static_cast<int>(pr.positions.size());
    int next = subtree_for(pr, t, sub, depth);  // remainder part
    for (int k = t - 1; k >= 0; --k) {
      const int v = pr.positions[k];
      const int stop = subtree_for(pr, k, sub, depth);
      // Demand certifies membership in D_v when D_v = F_v; absence does when
      // D_v = M \ F_v.
      const int yes = pr.flips.flipped[v] ? next : stop;
      const int no = pr.flips.flipped[v] ? stop : next;
      next = tree.add_observe(v, yes, no);
    }
    return next;
  }

  int subtree_for(const PartitionResult& pr, int k, const SubInstance& sub, int depth) {
    const auto& part = pr.parts[k];
    if (part.empty()) return tree.add_leaf(-1);  // unreachable for scenarios in M
    const int child = build(renormalized(sub, part, pr.part_mass[k]), depth + 1);
    return tree.add_waypoint(inst.root, child);
  }
};

}  // namespace

StrategyTree iso_solve(const CoverInstance& inst, const GsoOracle& oracle,
                       const LpgstConfig& config, const IsoPhaseSink* sink) {
  auto errs = validate_instance(inst);
  if (!errs.empty()) {
    std::string msg = "iso_solve: invalid instance:";
    for (const auto& e : errs) msg += "\n  " + e;
    throw std::invalid_argument(msg);
  }
  IsoBuilder builder{inst, oracle, config, sink, {}};
  const SubInstance whole = SubInstance::whole(inst.dist.size(), inst.dist.probs);
  builder.tree.root = builder.build(whole, 0);
  return std::move(builder.tree);
}

StrategyTree adaptsp_solve(const CoverInstance& inst, const GsoOracle& oracle,
                           const LpgstConfig& config, const IsoPhaseSink* sink) {
  StrategyTree tree = iso_solve(inst, oracle, config, sink);
  // At each leaf the traveller is back at the root knowing the scenario; add
  // a TSP sweep over the demand vertices its path has not already visited.
  struct Walker {
    const CoverInstance& inst;
    StrategyTree& tree;
    void walk(int id, std::set<int>& visited) {
      auto node = tree.at(id);  // copy: the vector may grow below
      switch (node.kind) {
        case StrategyTree::Node::Kind::Observe: {
          auto v = visited;
          v.insert(node.vertex);
          walk(node.yes, v);
          walk(node.no, v);
          break;
        }
        case StrategyTree::Node::Kind::Waypoint: {
          auto v = visited;
          v.insert(node.vertex);
          walk(node.child, v);
          break;
        }
        case StrategyTree::Node::Kind::Leaf: {
          if (node.scenario < 0) return;
          std::vector<int> remaining;
          for (int v : inst.dist.scenarios[node.scenario])
            if (!visited.count(v) && v != inst.root) remaining.push_back(v);
          if (remaining.empty()) return;
          const Tour t = tsp_tour(inst.metric, inst.root, remaining);
          // Rebuild the leaf as a waypoint chain through the tour interior
          // (t.vertices[1 .. size-2]); the evaluator adds the return leg.
          int cur = tree.add_leaf(node.scenario);
          for (int idx = static_cast<int>(t.vertices.size()) - 2; idx >= 2; --idx)
            cur = tree.add_waypoint(t.vertices[idx], cur);
          tree.nodes[id].kind = StrategyTree::Node::Kind::Waypoint;
          tree.nodes[id].vertex = t.vertices[1];
          tree.nodes[id].child = cur;
          tree.nodes[id].scenario = -1;
          break;
        }
      }
    }
  };
  Walker w{inst, tree};
  std::set<int> visited{inst.root};
  w.walk(tree.root, visited);
  return ensure_rooted(std::move(tree), inst.root);
}

}  // namespace adcover
