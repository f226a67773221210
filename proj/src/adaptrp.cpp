#include "adcover/adaptrp.hpp"

#include <algorithm>
#include <set>

namespace adcover {

TrpGroups trp_groups(const CoverInstance& inst, const SubInstance& sub) {
  const int g = static_cast<int>(sub.members.size());
  TrpGroups out;
  std::set<int> support;
  for (int k = 0; k < g; ++k)
    for (int v : inst.dist.scenarios[sub.members[k]]) support.insert(v);
  auto freq = [&](int v) {
    int c = 0;
    for (int k = 0; k < g; ++k) {
      const auto& sc = inst.dist.scenarios[sub.members[k]];
      if (std::binary_search(sc.begin(), sc.end(), v)) ++c;
    }
    return c;
  };
  std::set<int> high;
  for (int v : support) {
    if (2 * freq(v) <= g) {
      out.s_low.push_back(v);
    } else {
      out.s_high.push_back(v);
      high.insert(v);
    }
  }
  out.x_vertices.resize(g);
  out.x_weights.resize(g);
  for (int k = 0; k < g; ++k) {
    const auto& sc = inst.dist.scenarios[sub.members[k]];
    int low_count = 0;
    for (int v : sc) {
      if (!support.count(v)) continue;
      if (!high.count(v)) {
        out.x_vertices[k].push_back(v);  // S_L cap S_i
        ++low_count;
      }
    }
    for (int v : out.s_high)
      if (!std::binary_search(sc.begin(), sc.end(), v))
        out.x_vertices[k].push_back(v);  // S_H minus S_i
    std::sort(out.x_vertices[k].begin(), out.x_vertices[k].end());
    out.x_weights[k] = low_count * sub.q[k];
    for (int v : sc)
      if (high.count(v)) out.y_groups.push_back({k, v});
  }
  return out;
}

TrpPartitionResult partn_lat(const CoverInstance& inst, const SubInstance& sub,
                             const GsoOracle& oracle) {
  const int g = static_cast<int>(sub.members.size());
  if (g < 2) throw std::invalid_argument("partn_lat requires at least two scenarios");
  TrpPartitionResult res;
  res.groups = trp_groups(inst, sub);

  // Latency group Steiner instance: positive-weight mains plus all Y groups.
  std::vector<std::vector<int>> groups;
  std::vector<double> weights;
  for (int k = 0; k < g; ++k) {
    if (res.groups.x_weights[k] > 0.0) {
      groups.push_back(res.groups.x_vertices[k]);
      weights.push_back(res.groups.x_weights[k]);
    }
  }
  for (const auto& y : res.groups.y_groups) {
    std::vector<int> verts = res.groups.x_vertices[y.member];
    verts.insert(std::lower_bound(verts.begin(), verts.end(), y.vertex), y.vertex);
    verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
    groups.push_back(std::move(verts));
    weights.push_back(sub.q[y.member]);
  }
  res.full_tour = groups.empty() ? Tour::loop(inst.root)
                                 : latency_gst_solve(inst.metric, inst.root, groups, weights,
                                                     oracle);
  {
    LpgstInstance li;
    li.metric = inst.metric;
    li.root = inst.root;
    li.groups = groups;
    li.weights = weights;
    li.target = static_cast<int>(groups.size());
    res.gst_latency = groups.empty() ? 0.0 : lpgst_latency(li, res.full_tour);
  }

  // Scenario k is covered at the position of the first X_k-vertex.
  const auto& seq = res.full_tour.vertices;
  const int interior = static_cast<int>(seq.size()) - 1;  // positions 0..interior-1
  std::vector<int> covered_at(g, -1);
  for (int k = 0; k < g; ++k) {
    for (int p = 0; p < interior; ++p) {
      if (std::binary_search(res.groups.x_vertices[k].begin(), res.groups.x_vertices[k].end(),
                             seq[p])) {
        covered_at[k] = p;
        break;
      }
    }
  }
  // Truncate at the first position after which fewer than half the scenarios
  // are uncovered. At most one scenario (the one equal to S_H) can stay
  // uncovered forever; if the rule never fires we keep the whole tour, which
  // the above forces to leave at most one scenario uncovered.
  int cut = interior - 1;
  {
    std::vector<int> uncovered_after(interior, 0);
    for (int k = 0; k < g; ++k)
      for (int p = 0; p < interior; ++p)
        if (covered_at[k] < 0 || covered_at[k] > p) ++uncovered_after[p];
    bool found = false;
    for (int p = 0; p < interior; ++p) {
      if (2 * uncovered_after[p] < g) {
        cut = p;
        found = true;
        break;
      }
    }
    if (!found) {
      int final_uncovered = 0;
      for (int k = 0; k < g; ++k)
        if (covered_at[k] < 0) ++final_uncovered;
      if (final_uncovered > 1)
        throw InfeasibleError(
            "partn_lat: more than one scenario left uncoverable; this contradicts the "
            "construction (diagnostic: " +
            std::to_string(final_uncovered) + " of " + std::to_string(g) + " uncovered)");
    }
  }

  res.positions.assign(seq.begin(), seq.begin() + cut + 1);
  res.tour.vertices = res.positions;
  res.tour.vertices.push_back(inst.root);
  res.parts.assign(res.positions.size() + 1, {});
  for (int k = 0; k < g; ++k) {
    if (covered_at[k] >= 0 && covered_at[k] <= cut) {
      res.parts[covered_at[k]].push_back(k);
    } else {
      res.parts.back().push_back(k);
    }
  }
  for (const auto& part : res.parts) {
    double mass = 0.0;
    for (int k : part) mass += sub.q[k];
    res.part_mass.push_back(mass);
  }
  return res;
}

namespace {

struct TrpBuilder {
  const CoverInstance& original;
  const GsoOracle& oracle;
  const TrpPhaseSink* sink;
  StrategyTree tree;

  // `inst` carries the current scenario sets (visited vertices removed);
  // sub.members index the original instance, sub.q the renormalized masses.
  int build(const CoverInstance& inst, const SubInstance& sub, int depth) {
    if (sub.members.size() == 1) {
      const int member = sub.members[0];
      const auto& remaining = inst.dist.scenarios[0];
      const auto order = min_latency_order(inst.metric, inst.root, remaining);
      int cur = tree.add_leaf(member);
      for (auto it = order.rbegin(); it != order.rend(); ++it)
        cur = tree.add_waypoint(*it, cur);
      return cur;
    }
    const SubInstance local = local_view(inst, sub);
    TrpPartitionResult pr = partn_lat(inst, local, oracle);
    if (sink && *sink) {
      TrpPhaseRecord rec;
      rec.instance = inst;
      rec.sub = sub;
      rec.depth = depth;
      rec.part = pr;
      (*sink)(rec);
    }
    const int t = static_cast<int>(pr.positions.size());
    int next = subtree_for(pr, t, inst, sub, depth);
    std::set<int> high(pr.groups.s_high.begin(), pr.groups.s_high.end());
    std::set<int> low(pr.groups.s_low.begin(), pr.groups.s_low.end());
    for (int k = t - 1; k >= 0; --k) {
      const int v = pr.positions[k];
      const int stop = subtree_for(pr, k, inst, sub, depth);
      int yes, no;
      if (low.count(v)) {
        yes = stop;  // demand at a low vertex certifies coverage
        no = next;
      } else if (high.count(v)) {
        yes = next;  // absence of demand at a high vertex certifies coverage
        no = stop;
      } else {
        // Outside the current support the bit was fixed by an earlier phase
        // (all surviving scenarios agree on it), so one branch is dead.
        const auto& sc0 = original.dist.scenarios[sub.members[0]];
        const bool bit = std::binary_search(sc0.begin(), sc0.end(), v);
        yes = bit ? next : stop;
        no = bit ? stop : next;
      }
      next = tree.add_observe(v, yes, no);
    }
    return next;
  }

  SubInstance local_view(const CoverInstance& inst, const SubInstance& sub) const {
    SubInstance local;
    local.members.resize(sub.members.size());
    for (std::size_t i = 0; i < sub.members.size(); ++i)
      local.members[i] = static_cast<int>(i);
    local.q = sub.q;
    (void)inst;
    return local;
  }

  int subtree_for(const TrpPartitionResult& pr, int k, const CoverInstance& inst,
                  const SubInstance& sub, int depth) {
    const auto& part = pr.parts[k];
    if (part.empty()) return tree.add_leaf(-1);
    // Vertices visited on the traversal up to and including position k (the
    // whole truncated tour when k is the remainder part).
    std::set<int> visited{inst.root};
    const int upto = std::min<int>(k, static_cast<int>(pr.positions.size()) - 1);
    for (int p = 0; p <= upto; ++p) visited.insert(pr.positions[p]);

    CoverInstance next_inst;
    next_inst.metric = inst.metric;
    next_inst.root = inst.root;
    next_inst.objective = Objective::AdapTrp;
    SubInstance next_sub;
    for (int local_id : part) {
      std::vector<int> sc;
      for (int v : inst.dist.scenarios[local_id])
        if (!visited.count(v)) sc.push_back(v);
      next_inst.dist.scenarios.push_back(std::move(sc));
      next_inst.dist.probs.push_back(sub.q[local_id] / pr.part_mass[k]);
      next_sub.members.push_back(sub.members[local_id]);
      next_sub.q.push_back(sub.q[local_id] / pr.part_mass[k]);
    }
    const int child = build(next_inst, next_sub, depth + 1);
    return tree.add_waypoint(inst.root, child);
  }
};

}  // namespace

StrategyTree adaptrp_solve(const CoverInstance& inst, const GsoOracle& oracle,
                           const TrpPhaseSink* sink) {
  auto errs = validate_instance(inst);
  if (!errs.empty()) {
    std::string msg = "adaptrp_solve: invalid instance:";
    for (const auto& e : errs) msg += "\n  " + e;
    throw std::invalid_argument(msg);
  }
  TrpBuilder builder{inst, oracle, sink, {}};
  CoverInstance working = inst;
  working.objective = Objective::AdapTrp;
  SubInstance whole = SubInstance::whole(inst.dist.size(), inst.dist.probs);
  builder.tree.root = builder.build(working, whole, 0);
  return ensure_rooted(std::move(builder.tree), inst.root);
}

}  // namespace adcover
