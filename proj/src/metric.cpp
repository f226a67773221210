#include "adcover/metric.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>

namespace adcover {

namespace {

std::string violation_text(const MetricViolation& v) { return v.message; }

}  // namespace

std::vector<MetricViolation> Metric::validate(const std::vector<std::vector<double>>& dist) {
  std::vector<MetricViolation> out;
  const int n = static_cast<int>(dist.size());
  for (int u = 0; u < n; ++u) {
    if (static_cast<int>(dist[u].size()) != n) {
      out.push_back({MetricViolation::Kind::NonFinite, u, -1, -1,
                     "row " + std::to_string(u) + " is not of length n"});
      return out;
    }
  }
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      const double x = dist[u][v];
      if (!std::isfinite(x)) {
        out.push_back({MetricViolation::Kind::NonFinite, u, v, -1,
                       "non-finite entry at (" + std::to_string(u) + "," + std::to_string(v) + ")"});
      } else if (x < 0) {
        out.push_back({MetricViolation::Kind::Negative, u, v, -1,
                       "negative entry at (" + std::to_string(u) + "," + std::to_string(v) + ")"});
      }
    }
  }
  if (!out.empty()) return out;
  for (int u = 0; u < n; ++u) {
    if (dist[u][u] != 0.0) {
      out.push_back({MetricViolation::Kind::NonZeroDiagonal, u, u, -1,
                     "nonzero diagonal at " + std::to_string(u)});
    }
  }
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (!nearly_equal(dist[u][v], dist[v][u])) {
        out.push_back({MetricViolation::Kind::Asymmetric, u, v, -1,
                       "asymmetric at (" + std::to_string(u) + "," + std::to_string(v) + ")"});
      }
    }
  }
  if (!out.empty()) return out;
  for (int u = 0; u < n; ++u) {
    for (int w = 0; w < n; ++w) {
      if (u == w) continue;
      for (int v = 0; v < n; ++v) {
        if (v == u || v == w) continue;
        if (!nearly_leq(dist[u][w], dist[u][v] + dist[v][w])) {
          std::ostringstream os;
          os << "triangle violated on (" << u << "," << w << "," << v << "): " << dist[u][w]
             << " > " << dist[u][v] << " + " << dist[v][w];
          out.push_back({MetricViolation::Kind::Triangle, u, w, v, os.str()});
        }
      }
    }
  }
  return out;
}

Metric Metric::from_matrix(std::vector<std::vector<double>> dist, std::vector<std::string> labels) {
  auto violations = validate(dist);
  if (!violations.empty()) {
    std::string msg = "not a metric:";
    for (const auto& v : violations) msg += "\n  " + violation_text(v);
    throw std::invalid_argument(msg);
  }
  Metric m;
  m.n_ = static_cast<int>(dist.size());
  m.d_.resize(static_cast<std::size_t>(m.n_) * m.n_);
  for (int u = 0; u < m.n_; ++u)
    for (int v = 0; v < m.n_; ++v) m.d_[static_cast<std::size_t>(u) * m.n_ + v] = dist[u][v];
  m.labels_ = std::move(labels);
  return m;
}

Metric Metric::closure(int n, const std::vector<Edge>& edges, std::vector<std::string> labels) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, inf));
  for (int u = 0; u < n; ++u) d[u][u] = 0.0;
  for (const auto& e : edges) {
    if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n)
      throw std::invalid_argument("edge endpoint out of range");
    if (e.w < 0) throw std::invalid_argument("negative edge weight");
    d[e.u][e.v] = std::min(d[e.u][e.v], e.w);
    d[e.v][e.u] = std::min(d[e.v][e.u], e.w);
  }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      if (!std::isfinite(d[u][v]))
        throw std::invalid_argument("graph is disconnected: no path between " +
                                    std::to_string(u) + " and " + std::to_string(v));
  return from_matrix(std::move(d), std::move(labels));
}

Metric Metric::star(const std::vector<double>& arms) {
  for (double w : arms)
    if (!(w >= 0)) throw std::invalid_argument("negative star arm length");
  const int n = static_cast<int>(arms.size()) + 1;
  std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
  for (int i = 1; i < n; ++i) {
    d[0][i] = d[i][0] = arms[i - 1];
    for (int j = i + 1; j < n; ++j) d[i][j] = d[j][i] = arms[i - 1] + arms[j - 1];
  }
  return from_matrix(std::move(d));
}

Metric Metric::with_zero_copies(int source, int count) const {
  if (source < 0 || source >= n_) throw std::invalid_argument("copy source out of range");
  Metric m = *this;
  for (int c = 0; c < count; ++c) m = m.with_twin(source);
  return m;
}

Metric Metric::with_twin(int of_vertex) const {
  if (of_vertex < 0 || of_vertex >= n_) throw std::invalid_argument("twin source out of range");
  Metric m;
  m.n_ = n_ + 1;
  m.d_.assign(static_cast<std::size_t>(m.n_) * m.n_, 0.0);
  for (int u = 0; u < n_; ++u)
    for (int v = 0; v < n_; ++v) m.d_[static_cast<std::size_t>(u) * m.n_ + v] = dist(u, v);
  for (int u = 0; u < n_; ++u) {
    const double x = dist(u, of_vertex);
    m.d_[static_cast<std::size_t>(u) * m.n_ + n_] = x;
    m.d_[static_cast<std::size_t>(n_) * m.n_ + u] = x;
  }
  if (!labels_.empty()) {
    m.labels_ = labels_;
    m.labels_.push_back(labels_[of_vertex] + "'");
  }
  return m;
}

std::string Metric::label(int v) const {
  if (v >= 0 && v < static_cast<int>(labels_.size()) && !labels_[v].empty()) return labels_[v];
  return "v" + std::to_string(v);
}

double Metric::max_distance() const {
  double mx = 0.0;
  for (double x : d_) mx = std::max(mx, x);
  return mx;
}

double Metric::sum_distances() const {
  double s = 0.0;
  for (int u = 0; u < n_; ++u)
    for (int v = u + 1; v < n_; ++v) s += dist(u, v);
  return s;
}

bool Metric::integral() const {
  for (double x : d_)
    if (x != std::floor(x)) return false;
  return true;
}

double Tour::length(const Metric& m) const {
  double s = 0.0;
  for (std::size_t i = 1; i < vertices.size(); ++i) s += m.dist(vertices[i - 1], vertices[i]);
  return s;
}

std::vector<double> arrival_times(const Metric& m, const Tour& tour,
                                  const std::vector<std::vector<int>>& targets) {
  const double total = tour.length(m);
  std::vector<double> out(targets.size(), total);
  // prefix[i] = distance travelled when vertices[i] is reached
  std::vector<double> prefix(tour.vertices.size(), 0.0);
  for (std::size_t i = 1; i < tour.vertices.size(); ++i)
    prefix[i] = prefix[i - 1] + m.dist(tour.vertices[i - 1], tour.vertices[i]);
  for (std::size_t t = 0; t < targets.size(); ++t) {
    for (std::size_t i = 0; i < tour.vertices.size(); ++i) {
      if (std::find(targets[t].begin(), targets[t].end(), tour.vertices[i]) != targets[t].end()) {
        out[t] = prefix[i];
        break;
      }
    }
  }
  return out;
}

namespace {

// Exact TSP cycle via Held-Karp over {root} + pts. Ties resolved toward
// lower vertex indices so results are deterministic.
Tour held_karp(const Metric& m, int root, const std::vector<int>& pts) {
  const int k = static_cast<int>(pts.size());
  if (k == 0) return Tour::loop(root);
  const int full = (1 << k) - 1;
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> dp(1 << k, std::vector<double>(k, inf));
  std::vector<std::vector<int>> par(1 << k, std::vector<int>(k, -1));
  for (int j = 0; j < k; ++j) dp[1 << j][j] = m.dist(root, pts[j]);
  for (int mask = 1; mask <= full; ++mask) {
    for (int j = 0; j < k; ++j) {
      if (!(mask & (1 << j)) || dp[mask][j] == inf) continue;
      for (int t = 0; t < k; ++t) {
        if (mask & (1 << t)) continue;
        const int nmask = mask | (1 << t);
        const double cand = dp[mask][j] + m.dist(pts[j], pts[t]);
        if (cand < dp[nmask][t] - kTol * std::max(1.0, std::fabs(cand))) {
          dp[nmask][t] = cand;
          par[nmask][t] = j;
        }
      }
    }
  }
  double best = inf;
  int last = -1;
  for (int j = 0; j < k; ++j) {
    const double cand = dp[full][j] + m.dist(pts[j], root);
    if (cand < best - kTol * std::max(1.0, std::fabs(cand))) {
      best = cand;
      last = j;
    }
  }
  std::vector<int> order;
  int mask = full, j = last;
  while (j >= 0) {
    order.push_back(pts[j]);
    const int p = par[mask][j];
    mask ^= 1 << j;
    j = p;
  }
  std::reverse(order.begin(), order.end());
  Tour t;
  t.vertices.push_back(root);
  t.vertices.insert(t.vertices.end(), order.begin(), order.end());
  t.vertices.push_back(root);
  return t;
}

Tour mst_doubling(const Metric& m, int root, const std::vector<int>& pts) {
  std::vector<int> nodes;
  nodes.push_back(root);
  for (int v : pts) nodes.push_back(v);
  const int k = static_cast<int>(nodes.size());
  // Prim's algorithm over the induced complete graph.
  std::vector<bool> in(k, false);
  std::vector<double> key(k, std::numeric_limits<double>::infinity());
  std::vector<int> parent(k, -1);
  key[0] = 0.0;
  for (int it = 0; it < k; ++it) {
    int best = -1;
    for (int i = 0; i < k; ++i)
      if (!in[i] && (best == -1 || key[i] < key[best])) best = i;
    in[best] = true;
    for (int i = 0; i < k; ++i) {
      if (in[i]) continue;
      const double w = m.dist(nodes[best], nodes[i]);
      if (w < key[i]) {
        key[i] = w;
        parent[i] = best;
      }
    }
  }
  std::vector<std::vector<int>> children(k);
  for (int i = 1; i < k; ++i) children[parent[i]].push_back(i);
  Tour t;
  t.vertices.push_back(root);
  // Preorder walk, shortcutting repeated vertices.
  std::vector<int> stack{0};
  std::vector<int> order;
  while (!stack.empty()) {
    const int cur = stack.back();
    stack.pop_back();
    order.push_back(cur);
    for (auto it = children[cur].rbegin(); it != children[cur].rend(); ++it) stack.push_back(*it);
  }
  for (int idx : order)
    if (idx != 0) t.vertices.push_back(nodes[idx]);
  t.vertices.push_back(root);
  return t;
}

}  // namespace

Tour tsp_tour(const Metric& m, int root, const std::vector<int>& targets) {
  std::vector<int> pts;
  for (int v : targets) {
    if (v < 0 || v >= m.size()) throw std::invalid_argument("tsp target out of range");
    if (v != root && std::find(pts.begin(), pts.end(), v) == pts.end()) pts.push_back(v);
  }
  std::sort(pts.begin(), pts.end());
  if (pts.size() <= 10) return held_karp(m, root, pts);
  return mst_doubling(m, root, pts);
}

std::vector<int> min_latency_order(const Metric& m, int root, const std::vector<int>& targets) {
  std::vector<int> pts;
  for (int v : targets)
    if (v != root && std::find(pts.begin(), pts.end(), v) == pts.end()) pts.push_back(v);
  std::sort(pts.begin(), pts.end());
  const int k = static_cast<int>(pts.size());
  if (k == 0) return {};
  if (k > 10) {
    // Nearest-neighbour fallback; ties toward lower index.
    std::vector<int> order;
    std::vector<bool> used(k, false);
    int cur = root;
    for (int step = 0; step < k; ++step) {
      int best = -1;
      for (int i = 0; i < k; ++i) {
        if (used[i]) continue;
        if (best == -1 || m.dist(cur, pts[i]) < m.dist(cur, pts[best]) - kTol) best = i;
      }
      used[best] = true;
      order.push_back(pts[best]);
      cur = pts[best];
    }
    return order;
  }
  // Subset DP for the travelling-repairman path: traversing an edge charges
  // its length once per vertex not yet reached.
  const int full = (1 << k) - 1;
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> dp(1 << k, std::vector<double>(k, inf));
  std::vector<std::vector<int>> par(1 << k, std::vector<int>(k, -1));
  for (int j = 0; j < k; ++j) dp[1 << j][j] = m.dist(root, pts[j]) * k;
  for (int mask = 1; mask <= full; ++mask) {
    const int visited = __builtin_popcount(static_cast<unsigned>(mask));
    for (int j = 0; j < k; ++j) {
      if (!(mask & (1 << j)) || dp[mask][j] == inf) continue;
      for (int t = 0; t < k; ++t) {
        if (mask & (1 << t)) continue;
        const double cand = dp[mask][j] + m.dist(pts[j], pts[t]) * (k - visited);
        const int nmask = mask | (1 << t);
        if (cand < dp[nmask][t] - kTol * std::max(1.0, std::fabs(cand))) {
          dp[nmask][t] = cand;
          par[nmask][t] = j;
        }
      }
    }
  }
  double best = inf;
  int last = -1;
  for (int j = 0; j < k; ++j)
    if (dp[full][j] < best - kTol * std::max(1.0, std::fabs(dp[full][j]))) {
      best = dp[full][j];
      last = j;
    }
  std::vector<int> order;
  int mask = full, j = last;
  while (j >= 0) {
    order.push_back(pts[j]);
    const int p = par[mask][j];
    mask ^= 1 << j;
    j = p;
  }
  std::reverse(order.begin(), order.end());
  return order;
}

}  // namespace adcover
