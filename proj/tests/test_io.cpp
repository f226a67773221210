#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "adcover/io.hpp"
#include "adcover/isolation.hpp"
#include "oracle_util.hpp"

using namespace adcover;

TEST_CASE("instance round-trip is byte-exact for integer weights") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto inst = gen_random(seed, 6, 4);
    const std::string text = serialize_instance(inst);
    const auto back = parse_instance(text);
    CHECK(serialize_instance(back) == text);
  }
  const auto ps = gen_paper_star(4);
  CHECK(serialize_instance(parse_instance(serialize_instance(ps))) == serialize_instance(ps));
}

TEST_CASE("instance with float probabilities round-trips semantically") {
  CoverInstance inst;
  inst.metric = Metric::star({1, 2});
  inst.root = 0;
  inst.dist.scenarios = {{1}, {2}};
  inst.dist.probs = {0.25, 0.75};
  const auto back = parse_instance(serialize_instance(inst));
  CHECK(back.dist.probs[0] == doctest::Approx(0.25));
  CHECK(serialize_instance(back) == serialize_instance(inst));
}

TEST_CASE("edge-list instances take the metric closure") {
  const std::string text = R"({
    "schema": "adcover-instance-v1",
    "n": 3,
    "root": 0,
    "edges": [[0,1,1],[1,2,1]],
    "scenarios": [[2],[]],
    "probs": [1,1],
    "objective": "isolation"
  })";
  const auto inst = parse_instance(text);
  CHECK(inst.metric.dist(0, 2) == 2.0);
  CHECK(inst.dist.probs[0] == doctest::Approx(0.5));
}

TEST_CASE("invalid documents are rejected with clear errors") {
  CHECK_THROWS_AS(parse_instance("{"), std::invalid_argument);
  CHECK_THROWS_AS(parse_instance("{}"), std::invalid_argument);
  const std::string bad_probs = R"({
    "schema": "adcover-instance-v1",
    "n": 2, "root": 0,
    "dist": [[0,1],[1,0]],
    "scenarios": [[1],[]],
    "probs": [1, 0],
    "objective": "isolation"
  })";
  CHECK_THROWS_WITH_AS(parse_instance(bad_probs), doctest::Contains("not positive"),
                       std::invalid_argument);
}

TEST_CASE("strategy round-trip preserves traced behaviour") {
  auto inst = gen_paper_star(4);
  auto tree = iso_solve(inst, GsoOracle::exact());
  const auto text = serialize_strategy(tree);
  const auto back = parse_strategy(text);
  CHECK(serialize_strategy(back) == text);
  CHECK(eval_isolation(inst, back) == eval_isolation(inst, tree));
}

TEST_CASE("odt round-trip, including multiway tests") {
  OdtInstance inst;
  inst.priors = {0.25, 0.25, 0.5};
  inst.prior_weights = std::vector<std::int64_t>{1, 1, 2};
  inst.tests.push_back({3.0, false, {0}, {}});
  OdtInstance::Test t;
  t.cost = 2.0;
  t.multiway = true;
  t.parts = {{0}, {1}, {2}};
  inst.tests.push_back(t);
  const auto text = serialize_odt(inst);
  const auto back = parse_odt(text);
  CHECK(serialize_odt(back) == text);
  CHECK(back.tests[1].multiway);
}

TEST_CASE("test strategies round-trip") {
  OdtInstance inst;
  inst.priors = {0.5, 0.5};
  inst.tests.push_back({1.0, false, {0}, {}});
  TestStrategy s;
  const int a = s.add_leaf(0);
  const int b = s.add_leaf(1);
  s.root = s.add_test(0, {b, a});
  const auto text = serialize_test_strategy(s);
  const auto back = parse_test_strategy(text);
  CHECK(serialize_test_strategy(back) == text);
  CHECK(eval_test_strategy(inst, back) == doctest::Approx(1.0));
}

TEST_CASE("sniff_kind distinguishes the document types") {
  CHECK(sniff_kind(serialize_instance(gen_paper_star(3))) == DocumentKind::CoverInstance);
  OdtInstance odt;
  odt.priors = {0.5, 0.5};
  odt.tests.push_back({1.0, false, {0}, {}});
  CHECK(sniff_kind(serialize_odt(odt)) == DocumentKind::OdtInstance);
  StrategyTree t;
  t.root = t.add_leaf(0);
  CHECK(sniff_kind(serialize_strategy(t)) == DocumentKind::Strategy);
  CHECK(sniff_kind("not json") == DocumentKind::Unknown);
}

TEST_CASE("gst round-trip") {
  auto gst = gen_random_gst(3, 5, 3);
  const auto text = serialize_gst(gst);
  const auto back = parse_gst(text);
  CHECK(serialize_gst(back) == text);
}

TEST_CASE("digest is stable and content-sensitive") {
  const auto a = digest("hello");
  CHECK(a == digest("hello"));
  CHECK(a != digest("hellp"));
  CHECK(a.rfind("fnv1a:", 0) == 0);
}

TEST_CASE("report serialization carries optional fields") {
  RunReport r;
  r.instance_digest = "fnv1a:0";
  r.solver = "iso_solve[exact]";
  r.objective = "isolation";
  r.value = 8.0;
  r.oracle_value = 8.0;
  r.ratio = 1.0;
  const auto text = serialize_report(r);
  CHECK(text.find("\"ratio\": 1.0") != std::string::npos);
  CHECK(text.find("\"seed\"") == std::string::npos);
}
