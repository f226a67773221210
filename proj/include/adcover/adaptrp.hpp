#ifndef ADCOVER_ADAPTRP_HPP
#define ADCOVER_ADAPTRP_HPP

#include <functional>

#include "adcover/instance.hpp"
#include "adcover/lpgst.hpp"
#include "adcover/strategy.hpp"

namespace adcover {

/// Group construction for the latency partition step. S_L holds the demand
/// vertices appearing in at most half of the scenarios, S_H the rest. Each
/// scenario i gets a main group X_i = (S_L cap S_i) + (S_H minus S_i) with
/// weight |S_i cap S_L| q_i, and one group Y_i^v = {v} + X_i with weight q_i
/// for every v in S_i cap S_H.
struct TrpGroups {
  std::vector<int> s_low;
  std::vector<int> s_high;
  std::vector<std::vector<int>> x_vertices;  // per local member
  std::vector<double> x_weights;
  struct YGroup {
    int member;  // local id
    int vertex;
  };
  std::vector<YGroup> y_groups;  // weight q_member, vertices {vertex} + X_member
};

TrpGroups trp_groups(const CoverInstance& inst, const SubInstance& sub);

/// PartnLat: the full-coverage latency group Steiner tour over the groups
/// above (zero-weight mains are dropped from the instance but still drive
/// the partition), truncated at the first vertex after which fewer than half
/// the scenarios remain uncovered. parts[k] holds the members whose first
/// X_i-vertex is tour position k; parts.back() the still-uncovered ones.
struct TrpPartitionResult {
  Tour full_tour;              // untruncated latency-GST tour
  Tour tour;                   // truncated traversal tour
  std::vector<int> positions;  // tour.vertices without the final root
  std::vector<std::vector<int>> parts;  // positions.size() + 1 entries, local ids
  std::vector<double> part_mass;
  double gst_latency = 0.0;  // latency objective of full_tour w.r.t. the group instance
  TrpGroups groups;
};

TrpPartitionResult partn_lat(const CoverInstance& inst, const SubInstance& sub,
                             const GsoOracle& oracle);

struct TrpPhaseRecord {
  CoverInstance instance;  // scenarios as seen at this node (visited vertices removed)
  SubInstance sub;         // members are ids into the original instance
  int depth = 0;
  TrpPartitionResult part;
};
using TrpPhaseSink = std::function<void(const TrpPhaseRecord&)>;

/// Interleaved isolate-and-cover solver for expected latency. Stops the
/// traversal at the first vertex whose observation certifies coverage
/// (demand at an S_L vertex, or no demand at an S_H vertex), removes the
/// vertices visited so far from the surviving scenarios, and recurses; a
/// single surviving scenario is finished in min-latency order.
StrategyTree adaptrp_solve(const CoverInstance& inst, const GsoOracle& oracle,
                           const TrpPhaseSink* sink = nullptr);

}  // namespace adcover

#endif  // ADCOVER_ADAPTRP_HPP
