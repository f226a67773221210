#ifndef ADCOVER_STRATEGY_HPP
#define ADCOVER_STRATEGY_HPP

#include <string>
#include <vector>

#include "adcover/instance.hpp"

namespace adcover {

/// Adaptive strategy: a rooted tree of Observe nodes (branch on the demand
/// bit at a vertex), Waypoint nodes (travel without observing, e.g. the
/// return to the root between phases) and Leaf nodes (optionally labelled
/// with the inferred scenario).
struct StrategyTree {
  struct Node {
    enum class Kind { Observe, Waypoint, Leaf };
    Kind kind = Kind::Leaf;
    int vertex = -1;    // Observe / Waypoint
    int yes = -1;       // Observe
    int no = -1;        // Observe
    int child = -1;     // Waypoint
    int scenario = -1;  // Leaf; -1 when unlabelled / unreachable
  };

  std::vector<Node> nodes;
  int root = -1;

  int add_observe(int vertex, int yes, int no);
  int add_waypoint(int vertex, int child);
  int add_leaf(int scenario = -1);

  const Node& at(int id) const { return nodes[id]; }
  int node_count() const { return static_cast<int>(nodes.size()); }

  /// Structural errors: bad child ids, unreachable/cyclic layout, vertices
  /// out of range for `n`, or a non-leaf root not placed at `instance_root`
  /// (skipped when require_root_label is false). Warnings (duplicate
  /// observation on a path) are reported separately.
  std::vector<std::string> validate(int n, int instance_root,
                                    std::vector<std::string>* warnings = nullptr,
                                    bool require_root_label = true) const;
};

/// Wraps the tree in a Waypoint at `instance_root` when its root node sits
/// elsewhere, so every solver output satisfies the root-label invariant.
StrategyTree ensure_rooted(StrategyTree tree, int instance_root);

/// Path traced by Definition-1 branching for a fixed demand set.
struct TracedPath {
  std::vector<int> vertices;  // Observe and Waypoint vertices, in visit order
  int leaf = -1;              // node id of the reached leaf
  std::vector<std::pair<int, bool>> observations;  // (vertex, demand bit)
};

/// Follows yes at Observe(u) iff u is in `demand` (a sorted vertex set).
TracedPath trace(const StrategyTree& tree, const std::vector<int>& demand);

struct FeasibilityViolation {
  int scenario = -1;
  int vertex = -1;  // missing demand vertex, when applicable
  std::string what;
};

/// Objective-dependent feasibility: Isolation needs pairwise-distinct traced
/// leaves; AdapTSP/AdapTRP need every scenario vertex on the scenario's path.
std::vector<FeasibilityViolation> check_feasible(const CoverInstance& inst,
                                                 const StrategyTree& tree);

class FeasibilityError : public InfeasibleError {
 public:
  FeasibilityError(std::string what, std::vector<FeasibilityViolation> violations)
      : InfeasibleError(std::move(what)), violations_(std::move(violations)) {}
  const std::vector<FeasibilityViolation>& violations() const { return violations_; }

 private:
  std::vector<FeasibilityViolation> violations_;
};

/// Length of the closed tour root -> traced vertices -> root for one scenario.
double scenario_tour_length(const CoverInstance& inst, const StrategyTree& tree, int scenario);
/// Sum of first-visit arrival times of the scenario's vertices on its path.
double scenario_latency(const CoverInstance& inst, const StrategyTree& tree, int scenario);

/// Expected tour length over scenarios; throws FeasibilityError when the
/// tree is not isolation- (resp. adaptsp-) feasible.
double eval_isolation(const CoverInstance& inst, const StrategyTree& tree);
double eval_adaptsp(const CoverInstance& inst, const StrategyTree& tree);
/// Expected total latency; requires every demand vertex to be visited.
double eval_adaptrp(const CoverInstance& inst, const StrategyTree& tree);

/// DOT text with yes/no edge labels and deterministic preorder numbering.
std::string export_dot(const StrategyTree& tree, const Metric* metric = nullptr);

}  // namespace adcover

#endif  // ADCOVER_STRATEGY_HPP
