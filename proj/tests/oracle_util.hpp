// Test-only reference oracles, kept independent of the library's solvers:
// plain enumerations with no pruning cleverness.
#ifndef ADCOVER_TESTS_ORACLE_UTIL_HPP
#define ADCOVER_TESTS_ORACLE_UTIL_HPP

#include <algorithm>
#include <limits>
#include <numeric>
#include <vector>

#include "adcover/gso.hpp"
#include "adcover/instance.hpp"
#include "adcover/lpgst.hpp"

namespace adcover::testutil {

/// Minimum closed-tour length over all permutations of `targets`.
inline double brute_tsp(const Metric& m, int root, std::vector<int> targets) {
  std::sort(targets.begin(), targets.end());
  targets.erase(std::remove(targets.begin(), targets.end(), root), targets.end());
  targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
  if (targets.empty()) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  do {
    double len = m.dist(root, targets.front());
    for (std::size_t i = 1; i < targets.size(); ++i) len += m.dist(targets[i - 1], targets[i]);
    len += m.dist(targets.back(), root);
    best = std::min(best, len);
  } while (std::next_permutation(targets.begin(), targets.end()));
  return best;
}

/// Minimum sum of arrival times over all visit orders of `targets` (paths
/// from root, no return).
inline double brute_min_latency(const Metric& m, int root, std::vector<int> targets) {
  std::sort(targets.begin(), targets.end());
  targets.erase(std::remove(targets.begin(), targets.end(), root), targets.end());
  if (targets.empty()) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  do {
    double len = 0.0, total = 0.0;
    int pos = root;
    for (int v : targets) {
      len += m.dist(pos, v);
      total += len;
      pos = v;
    }
    best = std::min(best, total);
  } while (std::next_permutation(targets.begin(), targets.end()));
  return best;
}

/// Max profit over every subset of non-root vertices whose index-order tour
/// fits the budget. Exact on plain weighted stars, where tour length does
/// not depend on the visit order.
inline double enum_star_gso_opt(const GsoInstance& inst) {
  std::vector<int> verts;
  for (int v = 0; v < inst.metric.size(); ++v)
    if (v != inst.root) verts.push_back(v);
  const int k = static_cast<int>(verts.size());
  double best = 0.0;
  for (int mask = 0; mask < (1 << k); ++mask) {
    Tour t;
    t.vertices.push_back(inst.root);
    for (int i = 0; i < k; ++i)
      if (mask & (1 << i)) t.vertices.push_back(verts[i]);
    t.vertices.push_back(inst.root);
    if (!nearly_leq(t.length(inst.metric), inst.budget)) continue;
    best = std::max(best, profit(inst, t));
  }
  return best;
}

/// Minimum length of an r-tour covering every group (vertex sequences over
/// the group vertices, all orders).
inline double brute_gst_opt(const Metric& m, int root, const std::vector<std::vector<int>>& groups) {
  std::vector<int> rel;
  for (const auto& g : groups)
    for (int v : g)
      if (v != root && std::find(rel.begin(), rel.end(), v) == rel.end()) rel.push_back(v);
  std::sort(rel.begin(), rel.end());
  double best = std::numeric_limits<double>::infinity();
  const int k = static_cast<int>(rel.size());
  for (int mask = 0; mask < (1 << k); ++mask) {
    std::vector<int> chosen;
    for (int i = 0; i < k; ++i)
      if (mask & (1 << i)) chosen.push_back(rel[i]);
    bool covers = true;
    for (const auto& g : groups) {
      bool hit = std::find(g.begin(), g.end(), root) != g.end();
      for (int v : chosen) hit = hit || std::find(g.begin(), g.end(), v) != g.end();
      if (!hit) {
        covers = false;
        break;
      }
    }
    if (!covers) continue;
    std::sort(chosen.begin(), chosen.end());
    do {
      double len = 0.0;
      int pos = root;
      for (int v : chosen) {
        len += m.dist(pos, v);
        pos = v;
      }
      len += m.dist(pos, root);
      best = std::min(best, len);
    } while (std::next_permutation(chosen.begin(), chosen.end()));
  }
  return best;
}

/// Deterministic stream of random CoverInstances for property suites.
inline CoverInstance random_cover(std::uint64_t seed, int n, int m, Objective objective,
                                  bool skew = false) {
  RandomParams params;
  params.objective = objective;
  params.skew = skew;
  return gen_random(seed, n, m, params);
}

}  // namespace adcover::testutil

#endif  // ADCOVER_TESTS_ORACLE_UTIL_HPP
