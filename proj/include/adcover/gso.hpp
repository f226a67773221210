#ifndef ADCOVER_GSO_HPP
#define ADCOVER_GSO_HPP

#include <memory>
#include <string>
#include <vector>

#include "adcover/metric.hpp"

namespace adcover {

/// Group Steiner orienteering: maximize the profit of covered groups with a
/// closed r-tour of length at most `budget`.
struct GsoInstance {
  Metric metric;
  int root = 0;
  std::vector<std::vector<int>> groups;
  std::vector<double> profits;
  double budget = 0.0;
};

/// Non-fatal observations about a GSO/LPGST instance (e.g. empty groups,
/// which can never be covered and always pay the full tour length).
std::vector<std::string> gso_warnings(const GsoInstance& inst);

/// Total profit of groups covered by the tour (a group counts as covered when
/// any of its vertices appears on the tour, the endpoints included).
double profit(const GsoInstance& inst, const Tour& tour);

/// Exact GSO solver. Profit-maximal tour of length <= budget; ties prefer
/// shorter tours, then the lexicographically smaller canonical sequence.
/// Runs a Held-Karp style subset DP over the vertices that occur in at least
/// one group, so it is limited to ~15 such vertices.
Tour gso_exact(const GsoInstance& inst);

/// Star-metric view: vertices grouped into zero-distance clusters around the
/// root cluster (the center). Valid when every inter-cluster distance equals
/// the sum of the two arm lengths.
struct StarView {
  bool ok = false;
  std::string reason;
  std::vector<int> cluster_of;            // vertex -> cluster id
  std::vector<std::vector<int>> members;  // cluster id -> vertices (ascending)
  std::vector<double> arm;                // cluster id -> distance from center
  int center = -1;                        // cluster id of the root
};
StarView detect_star(const Metric& m, int root);

/// The star-metric oracle: visiting a leaf cluster costs its round trip, so
/// GSO reduces to monotone submodular maximization under a knapsack
/// constraint. Solved by partial enumeration of up to `seed_size` clusters
/// followed by density-greedy completion; with seed_size 3 the returned
/// profit is at least (1 - 1/e) times the best length-B tour's profit, and
/// the tour length never exceeds the budget.
Tour gso_star(const GsoInstance& inst, int seed_size = 3);

/// Profit factor of gso_star: 1 / (1 - 1/e).
double star_profit_factor();

/// A named GSO solver together with its declared bicriteria factors
/// (profit factor a >= 1, length factor b >= 1).
class GsoOracle {
 public:
  static GsoOracle exact();
  static GsoOracle star(int seed_size = 3);
  static GsoOracle auto_select(int seed_size = 3);
  static GsoOracle by_name(const std::string& name, int seed_size = 3);

  /// For "auto": pick star when the structural check passes, exact otherwise.
  GsoOracle resolve(const Metric& m, int root) const;

  Tour solve(const GsoInstance& inst) const;
  double profit_factor() const { return a_; }
  double length_factor() const { return b_; }
  const std::string& name() const { return name_; }

 private:
  enum class Kind { Exact, Star, Auto };
  GsoOracle(Kind k, std::string name, double a, double b, int seeds)
      : kind_(k), name_(std::move(name)), a_(a), b_(b), seeds_(seeds) {}
  Kind kind_;
  std::string name_;
  double a_;
  double b_;
  int seeds_;
};

}  // namespace adcover

#endif  // ADCOVER_GSO_HPP
