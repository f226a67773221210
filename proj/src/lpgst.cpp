#include "adcover/lpgst.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace adcover {

namespace {

GsoInstance as_gso(const LpgstInstance& inst, std::vector<double> profits, double budget) {
  GsoInstance g;
  g.metric = inst.metric;
  g.root = inst.root;
  g.groups = inst.groups;
  g.profits = std::move(profits);
  g.budget = budget;
  return g;
}

// Concatenation of closed r-tours, dropping the duplicated root in between.
void append_tour(Tour& into, const Tour& next) {
  if (next.vertices.size() <= 2) return;  // empty phase
  if (into.vertices.empty()) {
    into = next;
    return;
  }
  into.vertices.insert(into.vertices.end(), next.vertices.begin() + 1, next.vertices.end());
}

std::vector<char> coverage_flags(const LpgstInstance& inst, const Tour& tour) {
  std::vector<char> covered(inst.groups.size(), 0);
  std::vector<char> on_tour(inst.metric.size(), 0);
  on_tour[inst.root] = 1;
  for (int v : tour.vertices) on_tour[v] = 1;
  for (std::size_t i = 0; i < inst.groups.size(); ++i)
    for (int v : inst.groups[i])
      if (on_tour[v]) {
        covered[i] = 1;
        break;
      }
  return covered;
}

}  // namespace

double lpgst_latency(const LpgstInstance& inst, const Tour& tour) {
  const auto arr = arrival_times(inst.metric, tour, inst.groups);
  double s = 0.0;
  for (std::size_t i = 0; i < inst.groups.size(); ++i) s += inst.weights[i] * arr[i];
  return s;
}

int covered_groups(const LpgstInstance& inst, const Tour& tour) {
  const auto f = coverage_flags(inst, tour);
  int c = 0;
  for (char x : f) c += x;
  return c;
}

LpgstResult lpgst_solve(const LpgstInstance& inst, const GsoOracle& oracle_in,
                        const LpgstConfig& config) {
  const int g = static_cast<int>(inst.groups.size());
  if (static_cast<int>(inst.weights.size()) != g)
    throw std::invalid_argument("lpgst: groups/weights length mismatch");
  if (inst.target < 0 || inst.target > g)
    throw std::invalid_argument("lpgst: target out of range");
  const GsoOracle oracle = oracle_in.resolve(inst.metric, inst.root);
  const double rho = config.rho > 0 ? config.rho : oracle.length_factor();
  const double beta = config.beta;
  if (!(beta > 1.0)) throw std::invalid_argument("lpgst: beta must exceed 1");

  const int threshold =
      static_cast<int>(std::ceil(inst.target / oracle.profit_factor() - 1e-9));

  // Budget levels 0..lmax; beta^lmax bounds the length of any simple tour.
  const double reach = std::max(1.0, 2.0 * inst.metric.sum_distances());
  int lmax = 0;
  while (std::pow(beta, lmax) < reach && lmax < config.max_levels) ++lmax;

  // Phase tours are identical across levels (phase i always starts from the
  // coverage state produced by phases 1..i-1), so compute them once.
  std::vector<Tour> phase(lmax + 1);
  std::vector<char> covered(g, 0);
  for (std::size_t i = 0; i < inst.groups.size(); ++i)
    for (int v : inst.groups[i])
      if (v == inst.root) covered[i] = 1;
  std::vector<double> residual(g, 0.0);
  for (int i = 1; i <= lmax; ++i) {
    for (int j = 0; j < g; ++j) residual[j] = covered[j] ? 0.0 : inst.weights[j];
    phase[i] = oracle.solve(as_gso(inst, residual, std::pow(beta, i + 1)));
    const auto f = coverage_flags(inst, phase[i]);
    for (int j = 0; j < g; ++j)
      if (f[j]) covered[j] = 1;
  }

  struct Candidate {
    Tour tour;
    double latency = 0.0;
    double length = 0.0;
    int level = 0;
    int covered = 0;
    int kind = 0;  // 0 phases only, 1 phases+final, 2 final only
  };
  std::optional<Candidate> best;
  auto consider = [&](Tour tour, int level, int kind) {
    if (tour.vertices.empty()) tour = Tour::loop(inst.root);
    Candidate c;
    c.covered = covered_groups(inst, tour);
    if (c.covered < threshold) return;
    c.tour = std::move(tour);
    c.latency = lpgst_latency(inst, c.tour);
    c.length = c.tour.length(inst.metric);
    c.level = level;
    c.kind = kind;
    if (!best || c.latency < best->latency - kTol * std::max(1.0, c.latency) ||
        (nearly_equal(c.latency, best->latency) &&
         (c.length < best->length - kTol * std::max(1.0, c.length) ||
          (nearly_equal(c.length, best->length) &&
           (c.level < best->level || (c.level == best->level && c.kind < best->kind))))))
      best = std::move(c);
  };

  Tour tau;  // concatenation of phase tours up to the current level
  for (int l = 0; l <= lmax; ++l) {
    if (l >= 1) append_tour(tau, phase[l]);
    const Tour sigma =
        oracle.solve(as_gso(inst, std::vector<double>(g, 1.0), std::pow(beta, l)));
    consider(tau, l, 0);
    Tour pi = tau;
    append_tour(pi, sigma);
    consider(pi, l, 1);
    consider(sigma, l, 2);
  }

  if (!best)
    throw InfeasibleError("lpgst: no budget level covered the required " +
                          std::to_string(threshold) + " of " + std::to_string(g) + " groups");

  LpgstResult res;
  res.tour = best->tour;
  res.latency = best->latency;
  res.level = best->level;
  res.covered = best->covered;
  // Padding is accounting only: uncovered groups are charged
  // max(length, rho * beta^level) instead of physically lengthening the tour.
  {
    const double pad = std::max(best->length, rho * std::pow(beta, best->level));
    const auto arr = arrival_times(inst.metric, res.tour, inst.groups);
    const auto cov = coverage_flags(inst, res.tour);
    double s = 0.0;
    for (int i = 0; i < g; ++i) s += inst.weights[i] * (cov[i] ? arr[i] : pad);
    res.padded_latency = s;
  }
  return res;
}

Tour latency_gst_solve(const Metric& metric, int root,
                       const std::vector<std::vector<int>>& groups,
                       const std::vector<double>& weights, const GsoOracle& oracle_in) {
  if (groups.size() != weights.size())
    throw std::invalid_argument("latency_gst: groups/weights length mismatch");
  for (std::size_t i = 0; i < groups.size(); ++i)
    if (groups[i].empty())
      throw InfeasibleError("latency_gst: group " + std::to_string(i) +
                            " is empty and can never be covered");
  const int g = static_cast<int>(groups.size());
  const GsoOracle oracle = oracle_in.resolve(metric, root);
  LpgstInstance inst;
  inst.metric = metric;
  inst.root = root;
  inst.groups = groups;
  inst.weights = weights;
  inst.target = g;

  // Cheapest positive round trip over group vertices fixes the budget grid;
  // everything is coverable within round_trip_all.
  double b_min = std::numeric_limits<double>::infinity();
  double round_trip_all = 0.0;
  {
    std::vector<char> seen(metric.size(), 0);
    for (const auto& grp : groups) {
      double cheapest = std::numeric_limits<double>::infinity();
      for (int v : grp) {
        cheapest = std::min(cheapest, 2.0 * metric.dist(root, v));
        if (!seen[v]) {
          seen[v] = 1;
          round_trip_all += 2.0 * metric.dist(root, v);
        }
      }
      if (cheapest > kTol) b_min = std::min(b_min, cheapest);
    }
  }
  if (!std::isfinite(b_min)) b_min = 1.0;  // every group has a free vertex

  std::optional<Tour> best;
  double best_latency = 0.0;
  for (double start = b_min; start <= 2.0 * std::max(round_trip_all, b_min) + kTol; start *= 2.0) {
    Tour tour;
    std::vector<char> covered(g, 0);
    for (int i = 0; i < g; ++i)
      for (int v : groups[i])
        if (v == root) covered[i] = 1;
    double budget = start;
    int uncovered = g;
    for (int i = 0; i < g; ++i) uncovered -= covered[i];
    int guard = 0;
    while (uncovered > 0) {
      if (++guard > 200)
        throw InfeasibleError("latency_gst: failed to cover all groups (unreachable group?)");
      std::vector<double> residual(g, 0.0);
      for (int i = 0; i < g; ++i)
        if (!covered[i]) residual[i] = std::max(weights[i], kTol);  // keep zero-weight groups visible
      const Tour t = oracle.solve(as_gso(inst, residual, budget));
      append_tour(tour, t);
      const auto f = coverage_flags(inst, tour);
      uncovered = 0;
      for (int i = 0; i < g; ++i) {
        covered[i] = f[i];
        if (!f[i]) ++uncovered;
      }
      budget *= 2.0;
    }
    if (tour.vertices.empty()) tour = Tour::loop(root);
    const double lat = lpgst_latency(inst, tour);
    if (!best || lat < best_latency - kTol * std::max(1.0, lat) ||
        (nearly_equal(lat, best_latency) &&
         tour.length(metric) < best->length(metric) - kTol)) {
      best = tour;
      best_latency = lat;
    }
  }
  return *best;
}

}  // namespace adcover
