#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "adcover/isolation.hpp"
#include "adcover/lpgst.hpp"
#include "adcover/oracle.hpp"
#include "oracle_util.hpp"

using namespace adcover;

namespace {

LpgstInstance star_lpgst(std::vector<double> arms, std::vector<std::vector<int>> groups,
                         std::vector<double> weights, int target) {
  LpgstInstance li;
  li.metric = Metric::star(arms);
  li.root = 0;
  li.groups = std::move(groups);
  li.weights = std::move(weights);
  li.target = target;
  return li;
}

// The LPGST instance Partition builds for a sub-instance (flip groups,
// weights q, target |M| - 1).
LpgstInstance partition_induced(const CoverInstance& inst) {
  const SubInstance whole = SubInstance::whole(inst.dist.size(), inst.dist.probs);
  const FlipSets flips = flip_sets(inst, whole);
  LpgstInstance li;
  li.metric = inst.metric;
  li.root = inst.root;
  li.groups = flips.x_groups;
  li.weights = whole.q;
  li.target = inst.dist.size() - 1;
  return li;
}

}  // namespace

TEST_CASE("latency objective basics") {
  auto li = star_lpgst({1, 2}, {{1}, {2}}, {0, 0}, 2);
  Tour t{{0, 1, 0}};
  CHECK(lpgst_latency(li, t) == 0.0);

  li.weights = {1, 0};
  CHECK(lpgst_latency(li, t) == doctest::Approx(1.0));

  li.weights = {0, 3};  // uncovered group of weight 3 pays the tour length 2
  CHECK(lpgst_latency(li, t) == doctest::Approx(6.0));
}

TEST_CASE("lpgst_solve with target zero stays home") {
  auto li = star_lpgst({1, 2}, {{1}, {2}}, {1, 1}, 0);
  auto res = lpgst_solve(li, GsoOracle::exact());
  CHECK(res.tour.length(li.metric) == 0.0);
  CHECK(res.latency == doctest::Approx(0.0));
}

TEST_CASE("lpgst_solve reaches a single group at its distance") {
  auto li = star_lpgst({3}, {{1}}, {1}, 1);
  auto res = lpgst_solve(li, GsoOracle::exact());
  CHECK(res.covered == 1);
  CHECK(res.latency == doctest::Approx(3.0));
}

TEST_CASE("lpgst_solve on the partition-induced gen_paper_star(4) instance") {
  auto li = partition_induced(gen_paper_star(4));
  auto res = lpgst_solve(li, GsoOracle::exact());
  auto opt = opt_lpgst_exact(li);
  CHECK(res.covered >= li.target);
  CHECK(res.latency <= 8.0 * opt.value + 1e-9);
}

TEST_CASE("lpgst_solve latency within 8x of the enumeration optimum") {
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    auto inst = testutil::random_cover(seed + 7, 7, 4, Objective::Isolation);
    auto li = partition_induced(inst);
    auto res = lpgst_solve(li, GsoOracle::exact());
    auto opt = opt_lpgst_exact(li);
    CHECK(res.covered >= li.target);
    if (opt.value > kTol) worst = std::max(worst, res.latency / opt.value);
    CHECK(res.latency <= 8.0 * opt.value + 1e-9);
  }
  MESSAGE("worst lpgst ratio over the suite: ", worst);
}

TEST_CASE("coverage guarantees per oracle profit factor") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    Rng rng(seed);
    const int leaves = rng.uniform_int(3, 6);
    std::vector<double> arms;
    for (int i = 0; i < leaves; ++i) arms.push_back(rng.uniform_int(1, 9));
    std::vector<std::vector<int>> groups;
    std::vector<double> weights;
    const int g = rng.uniform_int(2, 5);
    for (int i = 0; i < g; ++i) {
      std::vector<int> grp;
      while (grp.empty())
        for (int v = 1; v <= leaves; ++v)
          if (rng.coin(0.4)) grp.push_back(v);
      groups.push_back(grp);
      weights.push_back(rng.uniform_int(1, 9));
    }
    const int h = rng.uniform_int(1, g);
    auto li = star_lpgst(arms, groups, weights, h);
    // exact oracle: both factors 1, so the full target must be covered
    auto exact = lpgst_solve(li, GsoOracle::exact());
    CHECK(exact.covered >= h);
    // star oracle: profit factor e/(e-1)
    auto star = lpgst_solve(li, GsoOracle::star());
    CHECK(star.covered >= static_cast<int>(std::ceil(h / star_profit_factor() - 1e-9)));
    CHECK(star.covered >= static_cast<int>(std::ceil(h / 4.0 - 1e-9)));
  }
}

TEST_CASE("emitted latency never exceeds the padded accounting value") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    auto inst = testutil::random_cover(seed + 60, 6, 4, Objective::Isolation);
    auto li = partition_induced(inst);
    auto res = lpgst_solve(li, GsoOracle::exact());
    CHECK(res.latency <= res.padded_latency + 1e-9);
  }
}

TEST_CASE("reported latency is monotone in the target") {
  auto li = star_lpgst({1, 2, 4, 8}, {{1}, {2}, {3}, {4}}, {1, 1, 1, 1}, 0);
  double last = -1.0;
  for (int h = 0; h <= 4; ++h) {
    li.target = h;
    auto res = lpgst_solve(li, GsoOracle::exact());
    CHECK(res.latency >= last - 1e-9);
    last = res.latency;
  }
}

TEST_CASE("latency_gst_solve covers a root group for free") {
  auto m = Metric::star({1});
  auto t = latency_gst_solve(m, 0, {{0}}, {1.0}, GsoOracle::exact());
  CHECK(t.length(m) == 0.0);
}

TEST_CASE("latency_gst_solve visits the heavier of two equidistant groups first") {
  auto m = Metric::star({2, 2});
  auto t = latency_gst_solve(m, 0, {{1}, {2}}, {10.0, 1.0}, GsoOracle::exact());
  LpgstInstance li;
  li.metric = m;
  li.root = 0;
  li.groups = {{1}, {2}};
  li.weights = {10.0, 1.0};
  const auto arr = arrival_times(m, t, li.groups);
  CHECK(arr[0] < arr[1]);
  // and beats the reversed order's latency
  Tour reversed{{0, 2, 1, 0}};
  CHECK(lpgst_latency(li, t) <= lpgst_latency(li, reversed) + 1e-9);
}

TEST_CASE("latency_gst_solve matches the exact min-latency order on unit stars") {
  for (int leaves = 2; leaves <= 7; ++leaves) {
    std::vector<double> arms(leaves, 1.0);
    auto m = Metric::star(arms);
    std::vector<std::vector<int>> groups;
    std::vector<double> weights;
    for (int v = 1; v <= leaves; ++v) {
      groups.push_back({v});
      weights.push_back(1.0);
    }
    auto t = latency_gst_solve(m, 0, groups, weights, GsoOracle::exact());
    LpgstInstance li;
    li.metric = m;
    li.root = 0;
    li.groups = groups;
    li.weights = weights;
    // exact repairman optimum: visiting leaves consecutively
    double expect = 0.0, len = 0.0;
    for (int i = 0; i < leaves; ++i) {
      len += (i == 0) ? 1.0 : 2.0;
      expect += len;
    }
    CHECK(lpgst_latency(li, t) == doctest::Approx(expect));
  }
}

TEST_CASE("latency_gst_solve rejects empty groups") {
  auto m = Metric::star({1});
  CHECK_THROWS_AS(latency_gst_solve(m, 0, {{}}, {1.0}, GsoOracle::exact()), InfeasibleError);
}
