#ifndef ADCOVER_ORACLE_HPP
#define ADCOVER_ORACLE_HPP

#include "adcover/lpgst.hpp"
#include "adcover/odt.hpp"
#include "adcover/strategy.hpp"

namespace adcover {

struct OracleLimits {
  int max_vertices = 14;
  int max_scenarios = 12;
  double time_budget_ms = 120000.0;
};

struct OracleResult {
  double value = 0.0;
  StrategyTree tree;  // witness; re-evaluates to `value`
};

/// Exact optimal isolation cost by memoized search over (current vertex,
/// consistent scenario set). Only informative vertices are ever visited:
/// under the triangle inequality a detour through an uninformative vertex
/// never helps, the one modelling assumption (tested against the
/// unrestricted search below).
OracleResult opt_isolation_exact(const CoverInstance& inst, const OracleLimits& limits = {});

/// Exact AdapTSP optimum; the state adds the visited-vertex set and ends
/// once a single consistent scenario remains with all demands visited.
OracleResult opt_adaptsp_exact(const CoverInstance& inst, const OracleLimits& limits = {});

/// Exact AdapTRP optimum; traversal of an edge is charged once per
/// still-unvisited demand vertex of each consistent scenario.
OracleResult opt_adaptrp_exact(const CoverInstance& inst, const OracleLimits& limits = {});

/// Reference searches with no candidate restriction (any unvisited vertex
/// may be observed); exponential, for cross-checking the oracles above on
/// tiny instances.
double opt_isolation_unrestricted(const CoverInstance& inst, const OracleLimits& limits = {});
double opt_adaptsp_unrestricted(const CoverInstance& inst, const OracleLimits& limits = {});
double opt_adaptrp_unrestricted(const CoverInstance& inst, const OracleLimits& limits = {});

struct TourOracleResult {
  double value = 0.0;
  Tour tour;
};

/// Exhaustive enumeration over r-tours without vertex repetition (pruned by
/// the budget only); independent of gso_exact's subset DP.
TourOracleResult opt_gso_exact(const GsoInstance& inst, const OracleLimits& limits = {});

/// Exhaustive minimum-latency tour covering at least inst.target groups.
TourOracleResult opt_lpgst_exact(const LpgstInstance& inst, const OracleLimits& limits = {});

struct OdtOracleResult {
  double value = 0.0;
  TestStrategy strategy;
};

/// Exact optimal decision tree by memoized recursion over consistent
/// disease sets.
OdtOracleResult opt_odt_exact(const OdtInstance& inst, const OracleLimits& limits = {});

}  // namespace adcover

#endif  // ADCOVER_ORACLE_HPP
