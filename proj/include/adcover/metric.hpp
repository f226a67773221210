#ifndef ADCOVER_METRIC_HPP
#define ADCOVER_METRIC_HPP

#include <optional>
#include <string>
#include <vector>

#include "adcover/common.hpp"

namespace adcover {

/// One violated metric axiom, with the offending vertex indices.
struct MetricViolation {
  enum class Kind { NonFinite, Negative, NonZeroDiagonal, Asymmetric, Triangle };
  Kind kind;
  int u = -1;
  int v = -1;
  int w = -1;
  std::string message;
};

/// Finite metric space: a symmetric non-negative distance matrix with zero
/// diagonal satisfying the triangle inequality (within kTol, relative).
/// Immutable after construction.
class Metric {
 public:
  Metric() = default;

  /// Checks the three metric axioms; returns every violation found.
  static std::vector<MetricViolation> validate(const std::vector<std::vector<double>>& dist);

  /// Builds a Metric from a full matrix; throws std::invalid_argument listing
  /// the violations if validate() finds any.
  static Metric from_matrix(std::vector<std::vector<double>> dist,
                            std::vector<std::string> labels = {});

  /// All-pairs shortest-path closure of a weighted undirected graph, so
  /// callers may supply sparse graphs. Throws if some pair is unreachable.
  struct Edge {
    int u;
    int v;
    double w;
  };
  static Metric closure(int n, const std::vector<Edge>& edges,
                        std::vector<std::string> labels = {});

  /// Weighted star: vertex 0 is the center, vertex j>0 sits at arm[j-1].
  static Metric star(const std::vector<double>& arms);

  /// New metric with `count` extra vertices at distance zero from `source`
  /// (appended at the end, inheriting all of source's distances).
  Metric with_zero_copies(int source, int count) const;

  /// New metric with one extra vertex that is a zero-distance twin of
  /// `of_vertex` (distance d(u, twin) = d(u, of_vertex) for all u).
  Metric with_twin(int of_vertex) const;

  int size() const { return n_; }
  double dist(int u, int v) const { return d_[static_cast<std::size_t>(u) * n_ + v]; }

  const std::vector<std::string>& labels() const { return labels_; }
  std::string label(int v) const;

  double max_distance() const;
  /// Sum of d(u,v) over unordered pairs u < v.
  double sum_distances() const;
  /// True if every entry is integral (exact under double arithmetic).
  bool integral() const;

  const std::vector<double>& raw() const { return d_; }

 private:
  int n_ = 0;
  std::vector<double> d_;  // row-major n x n
  std::vector<std::string> labels_;
};

/// A walk through the metric, stored as the full vertex sequence. Solvers
/// produce closed r-tours (front() == back() == r); the empty sequence is the
/// degenerate zero-length tour.
struct Tour {
  std::vector<int> vertices;

  static Tour loop(int r) { return Tour{{r, r}}; }

  double length(const Metric& m) const;
  bool closed_at(int r) const {
    return !vertices.empty() && vertices.front() == r && vertices.back() == r;
  }
};

/// Per target set, the length of the shortest tour prefix containing one of
/// its vertices; a set never hit (including an empty set) is charged the full
/// tour length.
std::vector<double> arrival_times(const Metric& m, const Tour& tour,
                                  const std::vector<std::vector<int>>& targets);

/// Closed r-tour visiting every vertex of `targets`: exact Held-Karp when
/// |targets| <= 10, MST-doubling (factor <= 2) beyond that.
Tour tsp_tour(const Metric& m, int root, const std::vector<int>& targets);

/// Minimum-latency r-path order over `targets` (sum of arrival times): exact
/// subset DP when |targets| <= 10, nearest-neighbour order otherwise. Returns
/// the visit order, not a closed tour.
std::vector<int> min_latency_order(const Metric& m, int root, const std::vector<int>& targets);

}  // namespace adcover

#endif  // ADCOVER_METRIC_HPP
