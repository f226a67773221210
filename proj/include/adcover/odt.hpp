#ifndef ADCOVER_ODT_HPP
#define ADCOVER_ODT_HPP

#include <optional>
#include <string>
#include <vector>

#include "adcover/isolation.hpp"

namespace adcover {

/// Optimal decision tree instance: m diseases with positive priors summing
/// to one, and tests that are either binary (a subset of diseases that pass)
/// or multiway (a partition of the diseases into outcome classes).
struct OdtInstance {
  std::vector<double> priors;
  std::optional<std::vector<std::int64_t>> prior_weights;

  struct Test {
    double cost = 0.0;
    bool multiway = false;
    std::vector<int> subset;                // binary: diseases that pass
    std::vector<std::vector<int>> parts;    // multiway: partition of [m]
    int outcomes() const { return multiway ? static_cast<int>(parts.size()) : 2; }
    /// Outcome index of a disease: binary tests use 0 = fail, 1 = pass.
    int outcome_of(int disease) const;
  };
  std::vector<Test> tests;

  int diseases() const { return static_cast<int>(priors.size()); }
};

/// Invariant check; an unseparated disease pair is reported as an error.
std::vector<std::string> validate_odt(const OdtInstance& inst);

/// Decision tree over tests: internal nodes carry a test and one child per
/// outcome, leaves carry a disease (or -1 when unreachable).
struct TestStrategy {
  struct Node {
    bool is_leaf = true;
    int test = -1;
    std::vector<int> children;  // per outcome
    int disease = -1;
  };
  std::vector<Node> nodes;
  int root = -1;

  int add_test(int test, std::vector<int> children);
  int add_leaf(int disease);
};

/// Expected cost: sum over diseases of prior times the total cost of the
/// tests on the disease's root-leaf path. Throws FeasibilityError when some
/// disease reaches a leaf with a different label.
double eval_test_strategy(const OdtInstance& inst, const TestStrategy& strategy);

/// The star-metric reduction. Vertex 0 is the center; a binary test becomes
/// one vertex at distance cost/2, a multiway test becomes one vertex per
/// outcome, the extra copies at distance zero from the first. Scenario i
/// holds the vertices of the outcomes disease i realizes.
struct OdtReduction {
  CoverInstance instance;
  // vertex -> (test, outcome); (-1,-1) for the center.
  std::vector<std::pair<int, int>> vertex_info;
  std::vector<std::vector<int>> outcome_vertex;  // [test][outcome] -> vertex (binary: [t][1])
};

OdtReduction odt_to_isolation(const OdtInstance& inst);

/// Maps an isolation strategy over the reduced instance back to a test
/// strategy. Runs of zero-distance copy observations of one test collapse to
/// a single multiway node; the expected costs agree exactly.
TestStrategy strategy_from_isolation(const StrategyTree& tree, const OdtInstance& inst,
                                     const OdtReduction& red);

/// End-to-end solver: reduce, run the isolation solver with the star oracle,
/// map back. `sink` receives the isolation phase records.
TestStrategy odt_solve(const OdtInstance& inst, const IsoPhaseSink* sink = nullptr,
                       const LpgstConfig& config = {});

/// DOT export with test/outcome labels.
std::string export_test_strategy_dot(const OdtInstance& inst, const TestStrategy& strategy);

}  // namespace adcover

#endif  // ADCOVER_ODT_HPP
