#include "adcover/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace adcover {

namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kInstanceSchema = "adcover-instance-v1";
constexpr const char* kGstSchema = "adcover-gst-v1";
constexpr const char* kStrategySchema = "adcover-strategy-v1";
constexpr const char* kOdtSchema = "adcover-odt-v1";
constexpr const char* kTestStrategySchema = "adcover-test-strategy-v1";
constexpr const char* kReportSchema = "adcover-report-v1";

// Numbers that are integral are written as integers so integer-weighted
// documents round-trip byte for byte.
Json num(double x) {
  if (std::isfinite(x) && x == std::floor(x) && std::fabs(x) < 9.0e15)
    return Json(static_cast<std::int64_t>(x));
  return Json(x);
}

Json matrix_json(const Metric& m) {
  Json rows = Json::array();
  for (int u = 0; u < m.size(); ++u) {
    Json row = Json::array();
    for (int v = 0; v < m.size(); ++v) row.push_back(num(m.dist(u, v)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Metric metric_from_json(const Json& j) {
  std::vector<std::string> labels;
  if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
  if (j.contains("dist")) {
    auto rows = j.at("dist").get<std::vector<std::vector<double>>>();
    return Metric::from_matrix(std::move(rows), std::move(labels));
  }
  if (j.contains("edges")) {
    const int n = j.at("n").get<int>();
    std::vector<Metric::Edge> edges;
    for (const auto& e : j.at("edges"))
      edges.push_back({e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<double>()});
    return Metric::closure(n, edges, std::move(labels));
  }
  throw std::invalid_argument("instance document needs either \"dist\" or \"edges\"");
}

Json scenarios_json(const DemandDistribution& d) {
  Json out = Json::array();
  for (const auto& s : d.scenarios) out.push_back(s);
  return out;
}

void check_schema(const Json& j, const char* expected) {
  if (!j.contains("schema") || j.at("schema").get<std::string>() != expected)
    throw std::invalid_argument(std::string("document is not a ") + expected);
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

std::string serialize_instance(const CoverInstance& inst) {
  Json j;
  j["schema"] = kInstanceSchema;
  j["n"] = inst.metric.size();
  j["root"] = inst.root;
  j["dist"] = matrix_json(inst.metric);
  if (!inst.metric.labels().empty()) j["labels"] = inst.metric.labels();
  j["scenarios"] = scenarios_json(inst.dist);
  if (inst.dist.weights) {
    j["probs"] = *inst.dist.weights;
  } else {
    Json probs = Json::array();
    for (double p : inst.dist.probs) probs.push_back(p);
    j["probs"] = std::move(probs);
  }
  j["objective"] = to_string(inst.objective);
  return j.dump(2) + "\n";
}

CoverInstance parse_instance(const std::string& text) {
  const Json j = parse_json(text);
  check_schema(j, kInstanceSchema);
  CoverInstance inst;
  inst.metric = metric_from_json(j);
  if (j.contains("n") && j.at("n").get<int>() != inst.metric.size())
    throw std::invalid_argument("field n disagrees with the distance matrix size");
  inst.root = j.at("root").get<int>();
  auto scen = j.at("scenarios").get<std::vector<std::vector<int>>>();
  const auto& probs = j.at("probs");
  bool integral = true;
  for (const auto& p : probs)
    if (!p.is_number_integer()) integral = false;
  if (integral) {
    inst.dist =
        DemandDistribution::from_weights(std::move(scen), probs.get<std::vector<std::int64_t>>());
  } else {
    inst.dist.scenarios = std::move(scen);
    for (auto& s : inst.dist.scenarios) std::sort(s.begin(), s.end());
    inst.dist.probs = probs.get<std::vector<double>>();
  }
  inst.objective = objective_from_string(j.value("objective", std::string("isolation")));
  auto errs = validate_instance(inst);
  if (!errs.empty()) {
    std::string msg = "invalid instance:";
    for (const auto& e : errs) msg += "\n  " + e;
    throw std::invalid_argument(msg);
  }
  return inst;
}

std::string serialize_gst(const GstInstance& inst) {
  Json j;
  j["schema"] = kGstSchema;
  j["n"] = inst.metric.size();
  j["root"] = inst.root;
  j["dist"] = matrix_json(inst.metric);
  Json groups = Json::array();
  for (const auto& g : inst.groups) groups.push_back(g);
  j["groups"] = std::move(groups);
  return j.dump(2) + "\n";
}

GstInstance parse_gst(const std::string& text) {
  const Json j = parse_json(text);
  check_schema(j, kGstSchema);
  GstInstance inst;
  inst.metric = metric_from_json(j);
  inst.root = j.at("root").get<int>();
  inst.groups = j.at("groups").get<std::vector<std::vector<int>>>();
  auto errs = validate_gst(inst);
  if (!errs.empty()) {
    std::string msg = "invalid GST instance:";
    for (const auto& e : errs) msg += "\n  " + e;
    throw std::invalid_argument(msg);
  }
  return inst;
}

namespace {

Json node_json(const StrategyTree& tree, int id) {
  const auto& nd = tree.at(id);
  Json j;
  switch (nd.kind) {
    case StrategyTree::Node::Kind::Observe:
      j["kind"] = "observe";
      j["vertex"] = nd.vertex;
      j["yes"] = node_json(tree, nd.yes);
      j["no"] = node_json(tree, nd.no);
      break;
    case StrategyTree::Node::Kind::Waypoint:
      j["kind"] = "waypoint";
      j["vertex"] = nd.vertex;
      j["next"] = node_json(tree, nd.child);
      break;
    case StrategyTree::Node::Kind::Leaf:
      j["kind"] = "leaf";
      if (nd.scenario >= 0) j["scenario"] = nd.scenario;
      break;
  }
  return j;
}

int node_from_json(const Json& j, StrategyTree& tree) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "observe") {
    const int yes = node_from_json(j.at("yes"), tree);
    const int no = node_from_json(j.at("no"), tree);
    return tree.add_observe(j.at("vertex").get<int>(), yes, no);
  }
  if (kind == "waypoint") {
    const int child = node_from_json(j.at("next"), tree);
    return tree.add_waypoint(j.at("vertex").get<int>(), child);
  }
  if (kind == "leaf") return tree.add_leaf(j.value("scenario", -1));
  throw std::invalid_argument("unknown strategy node kind: " + kind);
}

}  // namespace

std::string serialize_strategy(const StrategyTree& tree) {
  Json j;
  j["schema"] = kStrategySchema;
  j["root"] = node_json(tree, tree.root);
  return j.dump(2) + "\n";
}

StrategyTree parse_strategy(const std::string& text) {
  const Json j = parse_json(text);
  check_schema(j, kStrategySchema);
  StrategyTree tree;
  tree.root = node_from_json(j.at("root"), tree);
  return tree;
}

std::string serialize_odt(const OdtInstance& inst) {
  Json j;
  j["schema"] = kOdtSchema;
  if (inst.prior_weights) {
    j["diseases"] = *inst.prior_weights;
  } else {
    Json pri = Json::array();
    for (double p : inst.priors) pri.push_back(p);
    j["diseases"] = std::move(pri);
  }
  Json tests = Json::array();
  for (const auto& t : inst.tests) {
    Json tj;
    tj["cost"] = num(t.cost);
    if (t.multiway) {
      Json parts = Json::array();
      for (const auto& p : t.parts) parts.push_back(p);
      tj["parts"] = std::move(parts);
    } else {
      tj["subset"] = t.subset;
    }
    tests.push_back(std::move(tj));
  }
  j["tests"] = std::move(tests);
  return j.dump(2) + "\n";
}

OdtInstance parse_odt(const std::string& text) {
  const Json j = parse_json(text);
  check_schema(j, kOdtSchema);
  OdtInstance inst;
  const auto& pri = j.at("diseases");
  bool integral = true;
  for (const auto& p : pri)
    if (!p.is_number_integer()) integral = false;
  if (integral) {
    auto w = pri.get<std::vector<std::int64_t>>();
    std::int64_t total = 0;
    for (auto x : w) total += x;
    for (auto x : w) inst.priors.push_back(static_cast<double>(x) / static_cast<double>(total));
    inst.prior_weights = std::move(w);
  } else {
    inst.priors = pri.get<std::vector<double>>();
  }
  for (const auto& tj : j.at("tests")) {
    OdtInstance::Test t;
    t.cost = tj.at("cost").get<double>();
    if (tj.contains("parts")) {
      t.multiway = true;
      t.parts = tj.at("parts").get<std::vector<std::vector<int>>>();
      for (auto& p : t.parts) std::sort(p.begin(), p.end());
    } else {
      t.subset = tj.at("subset").get<std::vector<int>>();
      std::sort(t.subset.begin(), t.subset.end());
    }
    inst.tests.push_back(std::move(t));
  }
  auto errs = validate_odt(inst);
  if (!errs.empty()) {
    std::string msg = "invalid ODT instance:";
    for (const auto& e : errs) msg += "\n  " + e;
    throw std::invalid_argument(msg);
  }
  return inst;
}

namespace {

Json ts_node_json(const TestStrategy& s, int id) {
  const auto& nd = s.nodes[id];
  Json j;
  if (nd.is_leaf) {
    j["kind"] = "disease";
    if (nd.disease >= 0) j["disease"] = nd.disease;
  } else {
    j["kind"] = "test";
    j["test"] = nd.test;
    Json children = Json::array();
    for (int c : nd.children) children.push_back(ts_node_json(s, c));
    j["children"] = std::move(children);
  }
  return j;
}

int ts_node_from_json(const Json& j, TestStrategy& s) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "disease") return s.add_leaf(j.value("disease", -1));
  if (kind == "test") {
    std::vector<int> children;
    for (const auto& c : j.at("children")) children.push_back(ts_node_from_json(c, s));
    return s.add_test(j.at("test").get<int>(), std::move(children));
  }
  throw std::invalid_argument("unknown test strategy node kind: " + kind);
}

}  // namespace

std::string serialize_test_strategy(const TestStrategy& s) {
  Json j;
  j["schema"] = kTestStrategySchema;
  j["root"] = ts_node_json(s, s.root);
  return j.dump(2) + "\n";
}

TestStrategy parse_test_strategy(const std::string& text) {
  const Json j = parse_json(text);
  check_schema(j, kTestStrategySchema);
  TestStrategy s;
  s.root = ts_node_from_json(j.at("root"), s);
  return s;
}

DocumentKind sniff_kind(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (...) {
    return DocumentKind::Unknown;
  }
  if (!j.contains("schema")) return DocumentKind::Unknown;
  const std::string s = j.at("schema").get<std::string>();
  if (s == kInstanceSchema) return DocumentKind::CoverInstance;
  if (s == kOdtSchema) return DocumentKind::OdtInstance;
  if (s == kStrategySchema) return DocumentKind::Strategy;
  if (s == kTestStrategySchema) return DocumentKind::TestStrategy;
  return DocumentKind::Unknown;
}

std::string serialize_report(const RunReport& report) {
  Json j;
  j["schema"] = kReportSchema;
  j["instance_digest"] = report.instance_digest;
  j["solver"] = report.solver;
  j["objective"] = report.objective;
  j["value"] = report.value;
  if (report.oracle_value) j["oracle_value"] = *report.oracle_value;
  if (report.ratio) j["ratio"] = *report.ratio;
  if (report.bound_ratio) j["bound_ratio"] = *report.bound_ratio;
  j["wall_ms"] = report.wall_ms;
  if (report.seed) j["seed"] = *report.seed;
  return j.dump(2) + "\n";
}

std::string digest(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::invalid_argument("cannot write file: " + tmp);
    out << content;
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace adcover
