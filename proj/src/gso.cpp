#include "adcover/gso.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>

namespace adcover {

namespace {

constexpr int kExactVertexCap = 15;

using Bits = std::vector<std::uint64_t>;

Bits make_bits(int g) { return Bits((g + 63) / 64, 0); }

void set_bit(Bits& b, int i) { b[i / 64] |= (std::uint64_t{1} << (i % 64)); }

void or_into(Bits& into, const Bits& from) {
  for (std::size_t w = 0; w < into.size(); ++w) into[w] |= from[w];
}

double bits_profit(const Bits& b, const std::vector<double>& profits) {
  double s = 0.0;
  for (std::size_t w = 0; w < b.size(); ++w) {
    std::uint64_t x = b[w];
    while (x) {
      const int bit = __builtin_ctzll(x);
      s += profits[w * 64 + bit];
      x &= x - 1;
    }
  }
  return s;
}

void check_instance(const GsoInstance& inst) {
  const int n = inst.metric.size();
  if (inst.root < 0 || inst.root >= n) throw std::invalid_argument("gso: root out of range");
  if (inst.groups.size() != inst.profits.size())
    throw std::invalid_argument("gso: groups/profits length mismatch");
  if (inst.budget < 0) throw std::invalid_argument("gso: negative budget");
  for (const auto& g : inst.groups)
    for (int v : g)
      if (v < 0 || v >= n) throw std::invalid_argument("gso: group vertex out of range");
  for (double p : inst.profits)
    if (!(p >= 0)) throw std::invalid_argument("gso: negative profit");
}

// Vertex -> bitset of groups containing it.
std::vector<Bits> vertex_group_bits(const GsoInstance& inst) {
  const int g = static_cast<int>(inst.groups.size());
  std::vector<Bits> vb(inst.metric.size(), make_bits(g));
  for (int i = 0; i < g; ++i)
    for (int v : inst.groups[i]) set_bit(vb[v], i);
  return vb;
}

}  // namespace

std::vector<std::string> gso_warnings(const GsoInstance& inst) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < inst.groups.size(); ++i)
    if (inst.groups[i].empty())
      out.push_back("group " + std::to_string(i) +
                    " is empty: it can never be covered and always pays the tour length");
  return out;
}

double profit(const GsoInstance& inst, const Tour& tour) {
  check_instance(inst);
  double s = 0.0;
  for (std::size_t i = 0; i < inst.groups.size(); ++i) {
    bool hit = false;
    for (int v : inst.groups[i]) {
      if (v == inst.root ||
          std::find(tour.vertices.begin(), tour.vertices.end(), v) != tour.vertices.end()) {
        hit = true;
        break;
      }
    }
    if (hit) s += inst.profits[i];
  }
  return s;
}

Tour gso_exact(const GsoInstance& inst) {
  check_instance(inst);
  const int n = inst.metric.size();
  const int g = static_cast<int>(inst.groups.size());
  const double B = inst.budget;

  // Only vertices that occur in some group can change the profit, and under
  // the triangle inequality a detour through any other vertex never shortens
  // a tour, so the search is restricted to them.
  std::vector<int> rel;
  {
    std::vector<char> in(n, 0);
    for (const auto& grp : inst.groups)
      for (int v : grp)
        if (v != inst.root) in[v] = 1;
    for (int v = 0; v < n; ++v)
      if (in[v]) rel.push_back(v);
  }
  const int k = static_cast<int>(rel.size());
  if (k > kExactVertexCap)
    throw LimitError("gso_exact: " + std::to_string(k) + " group vertices exceed the cap of " +
                     std::to_string(kExactVertexCap));

  const auto vb = vertex_group_bits(inst);
  Bits base = make_bits(g);
  for (int i = 0; i < g; ++i)
    if (std::find(inst.groups[i].begin(), inst.groups[i].end(), inst.root) !=
        inst.groups[i].end())
      set_bit(base, i);

  const double inf = std::numeric_limits<double>::infinity();
  const std::size_t nmask = std::size_t{1} << k;
  // dp[mask][j]: shortest open path root -> ... -> rel[j] visiting exactly mask.
  std::vector<double> dp(nmask * k, inf);
  std::vector<int> par(nmask * k, -1);
  for (int j = 0; j < k; ++j) dp[(std::size_t{1} << j) * k + j] = inst.metric.dist(inst.root, rel[j]);
  for (std::size_t mask = 1; mask < nmask; ++mask) {
    for (int j = 0; j < k; ++j) {
      const double cur = dp[mask * k + j];
      if (!(mask & (std::size_t{1} << j)) || cur == inf) continue;
      if (cur > B * (1 + kTol) + kTol) continue;  // cannot possibly close within budget
      for (int t = 0; t < k; ++t) {
        if (mask & (std::size_t{1} << t)) continue;
        const std::size_t nm = mask | (std::size_t{1} << t);
        const double cand = cur + inst.metric.dist(rel[j], rel[t]);
        if (cand < dp[nm * k + t] - kTol * std::max(1.0, std::fabs(cand))) {
          dp[nm * k + t] = cand;
          par[nm * k + t] = j;
        }
      }
    }
  }

  // Coverage per mask, built incrementally from the lowest set bit.
  std::vector<Bits> cover(nmask);
  cover[0] = base;
  for (std::size_t mask = 1; mask < nmask; ++mask) {
    const int low = __builtin_ctzll(mask);
    cover[mask] = cover[mask ^ (std::size_t{1} << low)];
    or_into(cover[mask], vb[rel[low]]);
  }

  auto reconstruct = [&](std::size_t mask, int last) {
    std::vector<int> seq;
    std::size_t m = mask;
    int j = last;
    while (j >= 0) {
      seq.push_back(rel[j]);
      const int p = par[m * k + j];
      m ^= (std::size_t{1} << j);
      j = p;
    }
    std::reverse(seq.begin(), seq.end());
    // The metric is symmetric, so a path and its reverse cost the same;
    // canonicalize to the lexicographically smaller of the two.
    std::vector<int> rev(seq.rbegin(), seq.rend());
    if (rev < seq) seq = std::move(rev);
    Tour t;
    t.vertices.push_back(inst.root);
    t.vertices.insert(t.vertices.end(), seq.begin(), seq.end());
    t.vertices.push_back(inst.root);
    return t;
  };

  double best_profit = bits_profit(base, inst.profits);
  double best_len = 0.0;
  std::size_t best_mask = 0;
  int best_last = -1;
  for (std::size_t mask = 1; mask < nmask; ++mask) {
    double closed = inf;
    int last = -1;
    for (int j = 0; j < k; ++j) {
      if (!(mask & (std::size_t{1} << j)) || dp[mask * k + j] == inf) continue;
      const double cand = dp[mask * k + j] + inst.metric.dist(rel[j], inst.root);
      if (cand < closed - kTol * std::max(1.0, std::fabs(cand))) {
        closed = cand;
        last = j;
      }
    }
    if (last < 0 || !nearly_leq(closed, B)) continue;
    const double p = bits_profit(cover[mask], inst.profits);
    const bool better =
        p > best_profit + kTol ||
        (nearly_equal(p, best_profit) && closed < best_len - kTol * std::max(1.0, closed));
    bool tie_lex = false;
    if (!better && nearly_equal(p, best_profit) && nearly_equal(closed, best_len) &&
        best_last >= 0) {
      tie_lex = reconstruct(mask, last).vertices < reconstruct(best_mask, best_last).vertices;
    }
    if (better || tie_lex) {
      best_profit = p;
      best_len = closed;
      best_mask = mask;
      best_last = last;
    }
  }
  if (best_last < 0) return Tour::loop(inst.root);
  return reconstruct(best_mask, best_last);
}

StarView detect_star(const Metric& m, int root) {
  StarView view;
  const int n = m.size();
  if (root < 0 || root >= n) {
    view.reason = "root out of range";
    return view;
  }
  std::vector<int> cluster_of(n, -1);
  std::vector<std::vector<int>> members;
  for (int v = 0; v < n; ++v) {
    for (std::size_t c = 0; c < members.size(); ++c) {
      if (nearly_equal(m.dist(members[c][0], v), 0.0)) {
        cluster_of[v] = static_cast<int>(c);
        break;
      }
    }
    if (cluster_of[v] < 0) {
      cluster_of[v] = static_cast<int>(members.size());
      members.push_back({});
    }
    members[cluster_of[v]].push_back(v);
  }
  const int center = cluster_of[root];
  std::vector<double> arm(members.size(), 0.0);
  for (std::size_t c = 0; c < members.size(); ++c) arm[c] = m.dist(root, members[c][0]);
  for (std::size_t a = 0; a < members.size(); ++a) {
    for (std::size_t b = a + 1; b < members.size(); ++b) {
      if (static_cast<int>(a) == center || static_cast<int>(b) == center) continue;
      if (!nearly_equal(m.dist(members[a][0], members[b][0]), arm[a] + arm[b])) {
        view.reason = "distance between clusters " + std::to_string(a) + " and " +
                      std::to_string(b) + " is not the sum of their arms";
        return view;
      }
    }
  }
  view.ok = true;
  view.cluster_of = std::move(cluster_of);
  view.members = std::move(members);
  view.arm = std::move(arm);
  view.center = center;
  return view;
}

double star_profit_factor() { return 1.0 / (1.0 - std::exp(-1.0)); }

Tour gso_star(const GsoInstance& inst, int seed_size) {
  check_instance(inst);
  const auto view = detect_star(inst.metric, inst.root);
  if (!view.ok) throw std::invalid_argument("gso_star: not a weighted star: " + view.reason);
  const int g = static_cast<int>(inst.groups.size());
  const auto vb = vertex_group_bits(inst);

  // Knapsack items are the non-center clusters; taking one costs its round
  // trip from the center, so any selection with total cost <= B yields a tour
  // of length <= B.
  std::vector<int> items;
  for (std::size_t c = 0; c < view.members.size(); ++c)
    if (static_cast<int>(c) != view.center) items.push_back(static_cast<int>(c));
  const int ni = static_cast<int>(items.size());
  std::vector<double> cost(ni);
  std::vector<Bits> imask(ni, make_bits(g));
  for (int i = 0; i < ni; ++i) {
    cost[i] = 2.0 * view.arm[items[i]];
    for (int v : view.members[items[i]]) or_into(imask[i], vb[v]);
  }
  Bits base = make_bits(g);
  for (int v : view.members[view.center]) or_into(base, vb[v]);

  struct Sel {
    std::vector<int> picked;  // item indices, ascending
    Bits covered;
    double cost = 0.0;
    double profit = 0.0;
  };
  auto mk_sel = [&](const std::vector<int>& picked) {
    Sel s;
    s.picked = picked;
    s.covered = base;
    for (int i : picked) {
      or_into(s.covered, imask[i]);
      s.cost += cost[i];
    }
    s.profit = bits_profit(s.covered, inst.profits);
    return s;
  };
  auto marginal = [&](const Sel& s, int i) {
    Bits merged = s.covered;
    or_into(merged, imask[i]);
    return bits_profit(merged, inst.profits) - s.profit;
  };
  auto greedy_complete = [&](Sel s) {
    std::vector<char> in(ni, 0);
    for (int i : s.picked) in[i] = 1;
    while (true) {
      int pick = -1;
      double pick_density = -1.0;
      bool pick_free = false;
      for (int i = 0; i < ni; ++i) {
        if (in[i]) continue;
        if (!nearly_leq(s.cost + cost[i], inst.budget)) continue;
        const double gain = marginal(s, i);
        if (!(gain > kTol)) continue;
        if (cost[i] <= kTol) {
          // Free item with positive gain: always take, lowest index first.
          if (!pick_free || i < pick) {
            pick = i;
            pick_density = std::numeric_limits<double>::infinity();
            pick_free = true;
          }
          continue;
        }
        if (pick_free) continue;
        const double density = gain / cost[i];
        if (density > pick_density + kTol) {
          pick = i;
          pick_density = density;
        }
      }
      if (pick < 0) break;
      in[pick] = 1;
      s.picked.push_back(pick);
      or_into(s.covered, imask[pick]);
      s.cost += cost[pick];
      s.profit = bits_profit(s.covered, inst.profits);
    }
    std::sort(s.picked.begin(), s.picked.end());
    return s;
  };

  Sel best = mk_sel({});
  auto consider = [&](const Sel& s) {
    if (s.profit > best.profit + kTol ||
        (nearly_equal(s.profit, best.profit) &&
         (s.cost < best.cost - kTol || (nearly_equal(s.cost, best.cost) && s.picked < best.picked))))
      best = s;
  };

  // Partial enumeration: every feasible selection of up to seed_size items is
  // considered as-is, and the full-size seeds are greedily completed.
  std::vector<int> seed;
  std::function<void(int, double)> enumerate = [&](int from, double used) {
    if (!seed.empty()) {
      Sel s = mk_sel(seed);
      consider(s);
      if (static_cast<int>(seed.size()) == seed_size) consider(greedy_complete(s));
    }
    if (static_cast<int>(seed.size()) >= seed_size) return;
    for (int i = from; i < ni; ++i) {
      if (!nearly_leq(used + cost[i], inst.budget)) continue;
      seed.push_back(i);
      enumerate(i + 1, used + cost[i]);
      seed.pop_back();
    }
  };
  enumerate(0, 0.0);
  consider(greedy_complete(mk_sel({})));

  Tour t;
  t.vertices.push_back(inst.root);
  // Free center-cluster companions that add coverage come first.
  Bits have = make_bits(g);
  for (int i = 0; i < g; ++i)
    if (std::find(inst.groups[i].begin(), inst.groups[i].end(), inst.root) !=
        inst.groups[i].end())
      set_bit(have, i);
  for (int v : view.members[view.center]) {
    if (v == inst.root) continue;
    Bits merged = have;
    or_into(merged, vb[v]);
    if (bits_profit(merged, inst.profits) > bits_profit(have, inst.profits) + kTol) {
      t.vertices.push_back(v);
      have = merged;
    }
  }
  for (int i : best.picked)
    for (int v : view.members[items[i]]) t.vertices.push_back(v);
  t.vertices.push_back(inst.root);
  return t;
}

GsoOracle GsoOracle::exact() { return GsoOracle(Kind::Exact, "exact", 1.0, 1.0, 0); }

GsoOracle GsoOracle::star(int seed_size) {
  return GsoOracle(Kind::Star, "star", star_profit_factor(), 1.0, seed_size);
}

GsoOracle GsoOracle::auto_select(int seed_size) {
  return GsoOracle(Kind::Auto, "auto", star_profit_factor(), 1.0, seed_size);
}

GsoOracle GsoOracle::by_name(const std::string& name, int seed_size) {
  if (name == "exact") return exact();
  if (name == "star") return star(seed_size);
  if (name == "auto") return auto_select(seed_size);
  throw std::invalid_argument("unknown GSO oracle: " + name);
}

GsoOracle GsoOracle::resolve(const Metric& m, int root) const {
  if (kind_ != Kind::Auto) return *this;
  return detect_star(m, root).ok ? star(seeds_) : exact();
}

Tour GsoOracle::solve(const GsoInstance& inst) const {
  switch (kind_) {
    case Kind::Exact: return gso_exact(inst);
    case Kind::Star: return gso_star(inst, seeds_);
    case Kind::Auto: return resolve(inst.metric, inst.root).solve(inst);
  }
  throw std::logic_error("unreachable");
}

}  // namespace adcover
