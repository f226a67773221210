#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "adcover/odt.hpp"
#include "adcover/oracle.hpp"
#include "oracle_util.hpp"

using namespace adcover;

namespace {

OdtInstance priors_811() {
  OdtInstance inst;
  inst.priors = {0.8, 0.1, 0.1};
  inst.tests.push_back({1.0, false, {0}, {}});
  inst.tests.push_back({1.0, false, {1}, {}});
  return inst;
}

OdtInstance random_odt(std::uint64_t seed, int m, int n, int max_outcomes, bool skew = false) {
  Rng rng(seed);
  OdtInstance base;
  std::vector<std::int64_t> w(m);
  for (int i = 0; i < m; ++i)
    w[i] = skew ? (std::int64_t{1} << std::min(i, 20)) : rng.uniform_int(1, 9);
  std::int64_t total = 0;
  for (auto x : w) total += x;
  for (auto x : w) base.priors.push_back(double(x) / double(total));
  base.prior_weights = w;
  // Resample whole test sets until one separates every disease pair.
  for (int attempt = 0; attempt < 500; ++attempt) {
    OdtInstance inst = base;
    int guard = 0;
    while (static_cast<int>(inst.tests.size()) < n && ++guard < 200) {
      OdtInstance::Test t;
      t.cost = rng.uniform_int(1, 8);
      if (max_outcomes > 2 && rng.coin(0.5)) {
        const int l = rng.uniform_int(3, max_outcomes);
        t.multiway = true;
        t.parts.assign(l, {});
        for (int d = 0; d < m; ++d) t.parts[rng.uniform_int(0, l - 1)].push_back(d);
        bool informative = false;
        for (const auto& p : t.parts)
          if (!p.empty() && static_cast<int>(p.size()) != m) informative = true;
        if (!informative) continue;
      } else {
        for (int d = 0; d < m; ++d)
          if (rng.coin(0.5)) t.subset.push_back(d);
        if (t.subset.empty() || static_cast<int>(t.subset.size()) == m) continue;
      }
      inst.tests.push_back(std::move(t));
    }
    if (static_cast<int>(inst.tests.size()) == n && validate_odt(inst).empty()) return inst;
  }
  FAIL("could not sample a separable ODT instance for these parameters");
  return base;
}

}  // namespace

TEST_CASE("odt_to_isolation builds the halved-cost star") {
  OdtInstance inst;
  inst.priors = {0.5, 0.5};
  inst.tests.push_back({4.0, false, {0}, {}});
  auto red = odt_to_isolation(inst);
  CHECK(red.instance.metric.size() == 2);
  CHECK(red.instance.metric.dist(0, 1) == 2.0);
  CHECK(red.instance.dist.scenarios[0] == std::vector<int>{1});
  CHECK(red.instance.dist.scenarios[1].empty());
}

TEST_CASE("odt_to_isolation: a three-way test becomes three zero-distance copies") {
  OdtInstance inst;
  inst.priors = {0.5, 0.3, 0.2};
  OdtInstance::Test t;
  t.cost = 6.0;
  t.multiway = true;
  t.parts = {{0}, {1}, {2}};
  inst.tests.push_back(t);
  auto red = odt_to_isolation(inst);
  REQUIRE(red.instance.metric.size() == 4);
  for (int v = 1; v <= 3; ++v) CHECK(red.instance.metric.dist(0, v) == 3.0);
  CHECK(red.instance.metric.dist(1, 2) == 0.0);
  CHECK(red.instance.metric.dist(2, 3) == 0.0);
  // scenario i holds exactly the copy of its own outcome
  CHECK(red.instance.dist.scenarios[0] == std::vector<int>{1});
  CHECK(red.instance.dist.scenarios[1] == std::vector<int>{2});
  CHECK(red.instance.dist.scenarios[2] == std::vector<int>{3});
}

TEST_CASE("odt_to_isolation reports unseparated disease pairs") {
  OdtInstance inst;
  inst.priors = {0.5, 0.5};
  inst.tests.push_back({1.0, false, {0, 1}, {}});  // never splits
  CHECK_THROWS_WITH_AS(odt_to_isolation(inst), doctest::Contains("not separated"),
                       std::invalid_argument);
}

TEST_CASE("odt_solve on a forced single test") {
  OdtInstance inst;
  inst.priors = {0.3, 0.7};
  inst.tests.push_back({3.0, false, {0}, {}});
  auto strategy = odt_solve(inst);
  CHECK(eval_test_strategy(inst, strategy) == doctest::Approx(3.0));
  CHECK(opt_odt_exact(inst).value == doctest::Approx(3.0));
}

TEST_CASE("odt_solve finds the 1.2 strategy on the 0.8/0.1/0.1 instance") {
  auto inst = priors_811();
  auto strategy = odt_solve(inst);
  CHECK(eval_test_strategy(inst, strategy) == doctest::Approx(1.2));
  CHECK(opt_odt_exact(inst).value == doctest::Approx(1.2));
}

TEST_CASE("odt_solve ratio bound with the measured star phase constant") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    auto inst = random_odt(seed, 5, 5, 3, seed % 2 == 0);
    std::vector<IsoPhaseRecord> phases;
    IsoPhaseSink sink = [&](const IsoPhaseRecord& r) { phases.push_back(r); };
    auto strategy = odt_solve(inst, &sink);
    const double value = eval_test_strategy(inst, strategy);
    const double opt = opt_odt_exact(inst).value;
    CHECK(value >= opt - 1e-9);
    auto red = odt_to_isolation(inst);
    OracleLimits lim;
    lim.max_vertices = 64;
    double rho = 1.0;
    for (const auto& rec : phases) {
      const double sub_opt = opt_isolation_exact(restrict_to(red.instance, rec.sub), lim).value;
      if (sub_opt > kTol) rho = std::max(rho, rec.tour_latency / sub_opt);
    }
    if (opt > kTol)
      CHECK(value / opt <= 2.0 * rho * std::log(double(inst.diseases())) / std::log(8.0 / 7.0) +
                               1e-9);
  }
}

TEST_CASE("strategy_from_isolation maps a single observe to a single test") {
  OdtInstance inst;
  inst.priors = {0.5, 0.5};
  inst.tests.push_back({2.0, false, {0}, {}});
  auto red = odt_to_isolation(inst);
  StrategyTree tree;
  const int yes = tree.add_leaf(0);
  const int no = tree.add_leaf(1);
  tree.root = tree.add_observe(1, yes, no);
  auto strategy = strategy_from_isolation(tree, inst, red);
  REQUIRE(!strategy.nodes[strategy.root].is_leaf);
  CHECK(strategy.nodes[strategy.root].test == 0);
  CHECK(eval_test_strategy(inst, strategy) == doctest::Approx(2.0));
}

TEST_CASE("waypoint chains through the center map away at no cost") {
  auto inst = priors_811();
  auto red = odt_to_isolation(inst);
  StrategyTree tree;
  const int l0 = tree.add_leaf(0);
  const int l1 = tree.add_leaf(1);
  const int l2 = tree.add_leaf(2);
  const int second = tree.add_observe(2, l1, l2);
  const int wp = tree.add_waypoint(0, second);
  tree.root = tree.add_observe(1, l0, wp);
  auto strategy = strategy_from_isolation(tree, inst, red);
  CHECK(eval_test_strategy(inst, strategy) ==
        doctest::Approx(eval_isolation(red.instance, tree)));
}

TEST_CASE("consecutive copy observations collapse to one multiway node") {
  OdtInstance inst;
  inst.priors = {0.5, 0.3, 0.2};
  OdtInstance::Test t;
  t.cost = 6.0;
  t.multiway = true;
  t.parts = {{0}, {1}, {2}};
  inst.tests.push_back(t);
  auto red = odt_to_isolation(inst);
  // observe copy (0,0); no -> observe copy (0,1); no -> disease 2
  StrategyTree tree;
  const int d0 = tree.add_leaf(0);
  const int d1 = tree.add_leaf(1);
  const int d2 = tree.add_leaf(2);
  const int second = tree.add_observe(2, d1, d2);
  tree.root = tree.add_observe(1, d0, second);
  auto strategy = strategy_from_isolation(tree, inst, red);
  REQUIRE(!strategy.nodes[strategy.root].is_leaf);
  CHECK(strategy.nodes[strategy.root].children.size() == 3);
  // one physical run of the test: expected cost is exactly its cost
  CHECK(eval_test_strategy(inst, strategy) == doctest::Approx(6.0));
  CHECK(eval_isolation(red.instance, tree) == doctest::Approx(6.0));
}

TEST_CASE("eval_test_strategy basics") {
  OdtInstance inst;
  inst.priors = {0.5, 0.5};
  inst.tests.push_back({0.0, false, {0}, {}});
  TestStrategy s;
  const int a = s.add_leaf(0);
  const int b = s.add_leaf(1);
  s.root = s.add_test(0, {b, a});
  CHECK(eval_test_strategy(inst, s) == 0.0);

  inst.tests[0].cost = 3.0;
  CHECK(eval_test_strategy(inst, s) == doctest::Approx(3.0));

  TestStrategy bad;
  const int wrong = bad.add_leaf(0);
  const int wrong2 = bad.add_leaf(0);
  bad.root = bad.add_test(0, {wrong, wrong2});
  CHECK_THROWS_AS(eval_test_strategy(inst, bad), FeasibilityError);
}

TEST_CASE("cost identity: eval_isolation equals eval_test_strategy exactly") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const int m = 2 + static_cast<int>(seed % 5);
    auto inst = random_odt(seed + 10, m, 4, seed % 3 == 0 ? 4 : 2);
    auto red = odt_to_isolation(inst);
    auto tree = iso_solve(red.instance, GsoOracle::star());
    auto strategy = strategy_from_isolation(tree, inst, red);
    // integer costs: both evaluations are sums of exact halves
    CHECK(eval_isolation(red.instance, tree) == eval_test_strategy(inst, strategy));
  }
}

TEST_CASE("separability detection is exact") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Rng rng(seed + 5000);
    const int m = rng.uniform_int(2, 6);
    OdtInstance inst;
    for (int i = 0; i < m; ++i) inst.priors.push_back(1.0 / m);
    const int n = rng.uniform_int(1, 4);
    for (int j = 0; j < n; ++j) {
      OdtInstance::Test t;
      t.cost = 1.0;
      for (int d = 0; d < m; ++d)
        if (rng.coin(0.5)) t.subset.push_back(d);
      inst.tests.push_back(std::move(t));
    }
    bool separable = true;
    for (int a = 0; a < m && separable; ++a)
      for (int b = a + 1; b < m && separable; ++b) {
        bool split = false;
        for (const auto& t : inst.tests)
          if (std::binary_search(t.subset.begin(), t.subset.end(), a) !=
              std::binary_search(t.subset.begin(), t.subset.end(), b))
            split = true;
        separable = split;
      }
    if (separable) {
      auto red = odt_to_isolation(inst);
      // distinct scenarios <=> separable
      CHECK(validate_instance(red.instance).empty());
    } else {
      CHECK_THROWS_AS(odt_to_isolation(inst), std::invalid_argument);
    }
  }
}
