#ifndef ADCOVER_ISOLATION_HPP
#define ADCOVER_ISOLATION_HPP

#include <functional>

#include "adcover/instance.hpp"
#include "adcover/lpgst.hpp"
#include "adcover/strategy.hpp"

namespace adcover {

/// The flip construction: F_v = {i in M : v in S_i}, D_v = F_v when
/// |F_v| <= |M|/2 and M \ F_v otherwise, and X_i = {v : i in D_v}.
/// Members are indexed locally (0..|M|-1) in SubInstance order.
struct FlipSets {
  std::vector<std::vector<int>> d_sets;  // per vertex, local member ids, sorted
  std::vector<char> flipped;             // per vertex: D_v == M \ F_v
  std::vector<std::vector<int>> x_groups;  // per local member, vertex list
};

FlipSets flip_sets(const CoverInstance& inst, const SubInstance& sub);

/// One recursion step: the LPGST tour over the flip groups with weights q and
/// target |M|-1, and the induced partition of M. parts[k] holds the local
/// member ids certified at tour position k (position 0 is the root itself);
/// parts.back() is the remainder.
struct PartitionResult {
  Tour tour;                    // closed r-tour
  std::vector<int> positions;   // tour.vertices without the final root
  std::vector<std::vector<int>> parts;  // positions.size() + 1 entries, local ids
  std::vector<double> part_mass;
  LpgstResult lpgst;
  FlipSets flips;
};

PartitionResult partition(const CoverInstance& inst, const SubInstance& sub,
                          const GsoOracle& oracle, const LpgstConfig& config = {});

/// Instrumentation record emitted once per recursion node (phase).
struct IsoPhaseRecord {
  SubInstance sub;
  int depth = 0;
  Tour tour;
  double tour_latency = 0.0;  // latency of the partition tour w.r.t. the LPGST instance
  std::vector<std::vector<int>> parts;  // global scenario ids
  std::vector<double> part_mass;
};
using IsoPhaseSink = std::function<void(const IsoPhaseRecord&)>;

/// The divide-and-conquer isolation solver. Builds an isolation-feasible
/// strategy tree; the observation at tour position v stops (returns to the
/// root and recurses) exactly when the observed bit certifies membership in
/// D_v. Recursion depth is at most ceil(log_{8/7} m) + 1.
StrategyTree iso_solve(const CoverInstance& inst, const GsoOracle& oracle,
                       const LpgstConfig& config = {}, const IsoPhaseSink* sink = nullptr);

/// Isolation followed by a TSP sweep over the not-yet-visited vertices of the
/// identified scenario; feasible for AdapTSP by construction.
StrategyTree adaptsp_solve(const CoverInstance& inst, const GsoOracle& oracle,
                           const LpgstConfig& config = {}, const IsoPhaseSink* sink = nullptr);

}  // namespace adcover

#endif  // ADCOVER_ISOLATION_HPP
