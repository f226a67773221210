#include "adcover/instance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace adcover {

std::string to_string(Objective o) {
  switch (o) {
    case Objective::Isolation: return "isolation";
    case Objective::AdapTsp: return "adaptsp";
    case Objective::AdapTrp: return "adaptrp";
  }
  return "?";
}

Objective objective_from_string(const std::string& s) {
  if (s == "isolation") return Objective::Isolation;
  if (s == "adaptsp") return Objective::AdapTsp;
  if (s == "adaptrp") return Objective::AdapTrp;
  throw std::invalid_argument("unknown objective: " + s);
}

DemandDistribution DemandDistribution::from_weights(std::vector<std::vector<int>> scenarios,
                                                    std::vector<std::int64_t> weights) {
  DemandDistribution d;
  d.scenarios = std::move(scenarios);
  for (auto& s : d.scenarios) std::sort(s.begin(), s.end());
  std::int64_t total = 0;
  for (auto w : weights) total += w;
  d.probs.reserve(weights.size());
  for (auto w : weights) d.probs.push_back(static_cast<double>(w) / static_cast<double>(total));
  d.weights = std::move(weights);
  return d;
}

SubInstance SubInstance::whole(int m, const std::vector<double>& probs) {
  SubInstance s;
  s.members.resize(m);
  std::iota(s.members.begin(), s.members.end(), 0);
  s.q = probs;
  return s;
}

std::vector<std::string> validate_instance(const CoverInstance& inst) {
  std::vector<std::string> errs;
  const int n = inst.metric.size();
  const int m = inst.dist.size();
  if (n == 0) errs.push_back("empty metric");
  if (inst.root < 0 || inst.root >= n) errs.push_back("root out of range");
  if (m == 0) errs.push_back("no scenarios");
  if (static_cast<int>(inst.dist.probs.size()) != m)
    errs.push_back("probs/scenarios length mismatch");
  double sum = 0.0;
  for (int i = 0; i < static_cast<int>(inst.dist.probs.size()); ++i) {
    const double p = inst.dist.probs[i];
    if (!(p > 0.0)) errs.push_back("probability " + std::to_string(i) + " is not positive");
    sum += p;
  }
  if (!inst.dist.probs.empty() && !nearly_equal(sum, 1.0))
    errs.push_back("probabilities sum to " + std::to_string(sum) + ", not 1");
  std::set<std::vector<int>> seen;
  for (int i = 0; i < m; ++i) {
    auto s = inst.dist.scenarios[i];
    if (!std::is_sorted(s.begin(), s.end()))
      errs.push_back("scenario " + std::to_string(i) + " is not sorted");
    for (int v : s)
      if (v < 0 || v >= n)
        errs.push_back("scenario " + std::to_string(i) + " has out-of-range vertex " +
                       std::to_string(v));
    if (std::adjacent_find(s.begin(), s.end()) != s.end())
      errs.push_back("scenario " + std::to_string(i) + " has a repeated vertex");
    if (!seen.insert(s).second)
      errs.push_back("duplicate scenario at index " + std::to_string(i));
  }
  return errs;
}

std::vector<std::string> validate_gst(const GstInstance& inst) {
  std::vector<std::string> errs;
  const int n = inst.metric.size();
  if (inst.root < 0 || inst.root >= n) errs.push_back("root out of range");
  std::set<std::vector<int>> seen;
  for (int i = 0; i < static_cast<int>(inst.groups.size()); ++i) {
    auto g = inst.groups[i];
    std::sort(g.begin(), g.end());
    if (g.empty()) errs.push_back("group " + std::to_string(i) + " is empty");
    for (int v : g)
      if (v < 0 || v >= n)
        errs.push_back("group " + std::to_string(i) + " has out-of-range vertex");
    if (!seen.insert(g).second) errs.push_back("duplicate group at index " + std::to_string(i));
  }
  return errs;
}

namespace {

CoverInstance checked(CoverInstance inst) {
  auto errs = validate_instance(inst);
  if (!errs.empty()) {
    std::string msg = "invalid instance:";
    for (const auto& e : errs) msg += "\n  " + e;
    throw std::invalid_argument(msg);
  }
  return inst;
}

}  // namespace

CoverInstance gen_paper_star(int n) {
  if (n < 2) throw std::invalid_argument("gen_paper_star requires n >= 2");
  std::vector<double> arms(n - 1);
  for (int i = 1; i < n; ++i) arms[i - 1] = std::ldexp(1.0, i);  // 2^i
  CoverInstance inst;
  inst.metric = Metric::star(arms);
  inst.root = 0;
  std::vector<std::vector<int>> scen;
  std::vector<std::int64_t> w;
  // p_i = 2^-i as integer weights over the denominator 2^(n-1).
  for (int i = 1; i < n; ++i) {
    scen.push_back({i});
    w.push_back(static_cast<std::int64_t>(1) << (n - 1 - i));
  }
  scen.push_back({});
  w.push_back(1);
  inst.dist = DemandDistribution::from_weights(std::move(scen), std::move(w));
  inst.objective = Objective::Isolation;
  return checked(std::move(inst));
}

CoverInstance gen_trp_star(int n) {
  if (n < 1) throw std::invalid_argument("gen_trp_star requires n >= 1");
  // Vertex 1 is v at distance sqrt(n); vertices 2..n+1 are u_1..u_n at 1.
  std::vector<double> arms(n + 1, 1.0);
  arms[0] = std::sqrt(static_cast<double>(n));
  CoverInstance inst;
  inst.metric = Metric::star(arms);
  inst.root = 0;
  std::vector<std::vector<int>> scen;
  std::vector<std::int64_t> w;
  scen.push_back({1});
  w.push_back(static_cast<std::int64_t>(n) * (n - 1));  // (1 - 1/n) over n^2
  for (int i = 1; i <= n; ++i) {
    scen.push_back({1, 1 + i});
    w.push_back(1);
  }
  inst.dist = DemandDistribution::from_weights(std::move(scen), std::move(w));
  inst.objective = Objective::AdapTrp;
  return checked(std::move(inst));
}

double default_hardness_scale(const GstInstance& gst) {
  const double raw = 10.0 * 2.0 * gst.metric.size() * gst.metric.max_distance();
  return std::ceil(raw);
}

CoverInstance gst_to_adaptsp(const GstInstance& gst, double L) {
  auto errs = validate_gst(gst);
  if (!errs.empty()) {
    std::string msg = "invalid GST instance:";
    for (const auto& e : errs) msg += "\n  " + e;
    throw std::invalid_argument(msg);
  }
  const double min_scale = 2.0 * gst.metric.size() * gst.metric.max_distance();
  if (L < min_scale)
    throw std::invalid_argument("hardness scale L=" + std::to_string(L) +
                                " below required 2*n*max_distance=" + std::to_string(min_scale));
  const int g = static_cast<int>(gst.groups.size());
  CoverInstance inst;
  inst.metric = gst.metric.with_twin(gst.root);
  inst.root = gst.root;
  const int s = inst.metric.size() - 1;  // the twin vertex
  std::vector<std::vector<int>> scen;
  for (const auto& X : gst.groups) {
    std::vector<int> sc = X;
    sc.push_back(s);
    std::sort(sc.begin(), sc.end());
    scen.push_back(std::move(sc));
  }
  scen.push_back({s});
  inst.objective = Objective::AdapTsp;
  if (L == std::floor(L)) {
    // p_i = 1/(gL) for i <= g and 1 - 1/L, over the common denominator gL.
    std::vector<std::int64_t> w(g, 1);
    w.push_back(static_cast<std::int64_t>(g) * (static_cast<std::int64_t>(L) - 1));
    inst.dist = DemandDistribution::from_weights(std::move(scen), std::move(w));
  } else {
    DemandDistribution d;
    d.scenarios = std::move(scen);
    d.probs.assign(g, 1.0 / (g * L));
    d.probs.push_back(1.0 - 1.0 / L);
    inst.dist = std::move(d);
  }
  return checked(std::move(inst));
}

CoverInstance gen_random(std::uint64_t seed, int n, int m, const RandomParams& params) {
  if (n < 1 || m < 1) throw std::invalid_argument("gen_random requires n, m >= 1");
  if (n < 63 && static_cast<std::uint64_t>(m) > (1ull << n))
    throw std::invalid_argument("m scenarios cannot be distinct over " + std::to_string(n) +
                                " vertices");
  Rng rng(seed);
  // Random complete integer graph; its shortest-path closure is a metric.
  std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      d[u][v] = d[v][u] = static_cast<double>(rng.uniform_int(1, params.dist_max));
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];

  CoverInstance inst;
  inst.metric = Metric::from_matrix(std::move(d));
  inst.root = 0;
  std::set<std::vector<int>> used;
  std::vector<std::vector<int>> scen;
  bool used_empty = false;
  while (static_cast<int>(scen.size()) < m) {
    std::vector<int> s;
    for (int v = 0; v < n; ++v)
      if (rng.coin(params.density)) s.push_back(v);
    if (s.empty() && (!params.allow_empty || used_empty)) continue;
    if (!used.insert(s).second) continue;
    if (s.empty()) used_empty = true;
    scen.push_back(std::move(s));
  }
  std::vector<std::int64_t> w(m);
  for (int i = 0; i < m; ++i) {
    if (params.skew) {
      w[i] = static_cast<std::int64_t>(1) << std::min(i, 20);
    } else {
      w[i] = rng.uniform_int(1, params.weight_max);
    }
  }
  inst.dist = DemandDistribution::from_weights(std::move(scen), std::move(w));
  inst.objective = params.objective;
  return checked(std::move(inst));
}

GstInstance gen_random_gst(std::uint64_t seed, int n, int g, int dist_max) {
  Rng rng(seed);
  std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      d[u][v] = d[v][u] = static_cast<double>(rng.uniform_int(1, dist_max));
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
  GstInstance gst;
  gst.metric = Metric::from_matrix(std::move(d));
  gst.root = 0;
  std::set<std::vector<int>> used;
  while (static_cast<int>(gst.groups.size()) < g) {
    std::vector<int> grp;
    for (int v = 1; v < n; ++v)
      if (rng.coin(0.4)) grp.push_back(v);
    if (grp.empty()) continue;
    if (!used.insert(grp).second) continue;
    gst.groups.push_back(std::move(grp));
  }
  return gst;
}

CoverInstance restrict_to(const CoverInstance& inst, const SubInstance& sub) {
  CoverInstance out;
  out.metric = inst.metric;
  out.root = inst.root;
  out.objective = inst.objective;
  DemandDistribution d;
  for (std::size_t k = 0; k < sub.members.size(); ++k) {
    d.scenarios.push_back(inst.dist.scenarios[sub.members[k]]);
    d.probs.push_back(sub.q[k]);
  }
  out.dist = std::move(d);
  return out;
}

}  // namespace adcover
