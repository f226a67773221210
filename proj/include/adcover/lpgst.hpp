#ifndef ADCOVER_LPGST_HPP
#define ADCOVER_LPGST_HPP

#include <vector>

#include "adcover/gso.hpp"

namespace adcover {

/// Partial latency group Steiner: find an r-tour covering at least `target`
/// of the groups while minimizing the weighted-arrival latency objective.
struct LpgstInstance {
  Metric metric;
  int root = 0;
  std::vector<std::vector<int>> groups;
  std::vector<double> weights;
  int target = 0;  // h <= g
};

struct LpgstConfig {
  double beta = 1.25;   // geometric budget scale
  double rho = -1.0;    // padding factor; < 0 means "use the oracle's length factor"
  int max_levels = 128; // hard cap on the budget sweep
  int seed_size = 3;    // star-oracle enumeration depth
};

/// The latency objective: covered groups pay their weighted arrival time,
/// uncovered groups pay the full tour length.
double lpgst_latency(const LpgstInstance& inst, const Tour& tour);

/// Number of groups the tour covers.
int covered_groups(const LpgstInstance& inst, const Tour& tour);

struct LpgstResult {
  Tour tour;
  double latency = 0.0;         // objective of the emitted tour
  double padded_latency = 0.0;  // uncovered charge raised to rho * beta^level
  int level = 0;                // budget level the winning candidate came from
  int covered = 0;
};

/// Geometric-phase solver. For every budget level l it runs per-phase GSO
/// with residual weighted profits (budgets beta^2..beta^(l+1)), a final
/// unit-profit GSO at budget beta^l, and keeps the minimum-latency candidate
/// among {phases, phases+final, final} that covers at least
/// ceil(target / oracle-profit-factor) groups. Throws InfeasibleError when no
/// level yields the required coverage.
LpgstResult lpgst_solve(const LpgstInstance& inst, const GsoOracle& oracle,
                        const LpgstConfig& config = {});

/// Full-coverage latency group Steiner: doubling budget phases, repeated
/// until every group is covered, swept over geometric starting budgets with
/// the minimum-latency run kept. Requires every group to be non-empty.
Tour latency_gst_solve(const Metric& metric, int root,
                       const std::vector<std::vector<int>>& groups,
                       const std::vector<double>& weights, const GsoOracle& oracle);

}  // namespace adcover

#endif  // ADCOVER_LPGST_HPP
