#ifndef ADCOVER_INSTANCE_HPP
#define ADCOVER_INSTANCE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "adcover/metric.hpp"

namespace adcover {

enum class Objective { Isolation, AdapTsp, AdapTrp };

std::string to_string(Objective o);
Objective objective_from_string(const std::string& s);

/// Explicit demand distribution: m distinct scenarios S_i with probabilities
/// p_i > 0 summing to one. When the masses were given as integers they are
/// kept verbatim in `weights` so files round-trip exactly.
struct DemandDistribution {
  std::vector<std::vector<int>> scenarios;  // sorted vertex lists
  std::vector<double> probs;
  std::optional<std::vector<std::int64_t>> weights;

  int size() const { return static_cast<int>(scenarios.size()); }

  static DemandDistribution from_weights(std::vector<std::vector<int>> scenarios,
                                         std::vector<std::int64_t> weights);
};

/// A subset M of scenario ids with renormalized probabilities q_i (sum 1).
struct SubInstance {
  std::vector<int> members;
  std::vector<double> q;

  static SubInstance whole(int m, const std::vector<double>& probs);
  double mass_of(int local_index) const { return q[local_index]; }
};

struct CoverInstance {
  Metric metric;
  int root = 0;
  DemandDistribution dist;
  Objective objective = Objective::Isolation;
};

/// Group Steiner tree instance (used by the hardness-reduction generator).
struct GstInstance {
  Metric metric;
  int root = 0;
  std::vector<std::vector<int>> groups;
};

/// Checks every type invariant; returns human-readable errors with indices.
std::vector<std::string> validate_instance(const CoverInstance& inst);
std::vector<std::string> validate_gst(const GstInstance& inst);

/// Star metric with arms 2^1..2^(n-1), scenarios {v_i} with p_i = 2^-i plus
/// the empty scenario at 2^-(n-1).
CoverInstance gen_paper_star(int n);

/// Star with n unit arms u_1..u_n and one sqrt(n) arm v; scenario {v} with
/// probability 1 - 1/n and scenarios {v, u_i} with probability 1/n^2 each.
CoverInstance gen_trp_star(int n);

/// Group-Steiner hardness reduction: appends a zero-distance twin s of the
/// root, scenario X_i + {s} with probability 1/(gL), and {s} with 1 - 1/L.
/// Requires L >= 2 n max_distance.
CoverInstance gst_to_adaptsp(const GstInstance& gst, double L);

/// Default reduction scale: 10 * 2n * max distance, rounded up to an integer
/// so probabilities stay rational on integral metrics.
double default_hardness_scale(const GstInstance& gst);

struct RandomParams {
  int dist_max = 12;          // edge weights drawn from [1, dist_max]
  double density = 0.45;      // per-vertex scenario membership probability
  bool allow_empty = true;    // permit one empty scenario
  int weight_max = 8;         // probability weights drawn from [1, weight_max]
  bool skew = false;          // geometric 2^-i style weights instead
  Objective objective = Objective::Isolation;
};

/// Seed-deterministic random instance; requires m <= 2^n and always passes
/// validate_instance.
CoverInstance gen_random(std::uint64_t seed, int n, int m, const RandomParams& params = {});

/// Seed-deterministic random GST instance on `n` vertices with `g` groups.
GstInstance gen_random_gst(std::uint64_t seed, int n, int g, int dist_max = 10);

/// CoverInstance restricted to a scenario subset, probabilities renormalized.
CoverInstance restrict_to(const CoverInstance& inst, const SubInstance& sub);

}  // namespace adcover

#endif  // ADCOVER_INSTANCE_HPP
