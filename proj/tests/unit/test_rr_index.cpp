#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <vector>

#include "../support/fixtures.hpp"
#include "cumact/oracle.hpp"
#include "cumact/rr_index.hpp"

using namespace cumact;

namespace {
std::vector<std::uint32_t> set_contents(const RRIndex& ix, std::uint32_t gid) {
  return {ix.nodes.begin() + ix.offs[gid], ix.nodes.begin() + ix.offs[gid + 1]};
}
}  // namespace

TEST_CASE("reverse reachability walks deterministic arcs and stops at sources") {
  Graph g = fixtures::chain2();
  Rng rng(4);
  CHECK(generate_rr_set(g, fixtures::kChainU, rng) ==
        std::vector<std::uint32_t>{fixtures::kChainV, fixtures::kChainU});
  CHECK(generate_rr_set(g, fixtures::kChainV, rng) ==
        std::vector<std::uint32_t>{fixtures::kChainV});

  Graph iso = fixtures::make_graph({"0", "1", "2"}, {{0, 1, 1.0}});
  CHECK(generate_rr_set(iso, 2, rng) == std::vector<std::uint32_t>{2});
}

TEST_CASE("half of the sink's sets contain any one source on the fan-in") {
  Graph g = fixtures::fanin3();
  std::uint64_t with_a = 0;
  const std::uint32_t draws = 100000;
  for (std::uint32_t i = 0; i < draws; ++i) {
    Rng rng = substream(11, stream::kRrSet, fixtures::kFanU, i);
    auto set = generate_rr_set(g, fixtures::kFanU, rng);
    with_a += std::binary_search(set.begin(), set.end(), fixtures::kFanA);
  }
  CHECK(std::abs(static_cast<double>(with_a) / draws - 0.5) < 0.01);
}

TEST_CASE("star index holds exactly the deterministic reverse sets") {
  Graph g = fixtures::star();
  RRIndex ix = build_index(g, TargetSet::all(g.n), Thresholds::uniform(g.n, 1.0), 4, 9);
  REQUIRE(ix.owners == std::vector<std::uint32_t>{0, 1, 2, 3});
  using V = std::vector<std::uint32_t>;
  for (std::uint32_t i = 0; i < 4; ++i) {
    CHECK(set_contents(ix, 0 * 4 + i) == V{fixtures::kStarA});                  // sets of a
    CHECK(set_contents(ix, 1 * 4 + i) == V{fixtures::kStarB});                  // sets of b
    CHECK(set_contents(ix, 2 * 4 + i) == V{fixtures::kStarA, fixtures::kStarX});  // sets of x
    CHECK(set_contents(ix, 3 * 4 + i) ==
          V{fixtures::kStarA, fixtures::kStarB, fixtures::kStarY});  // sets of y
  }
  CHECK(ix.req == std::vector<std::int64_t>{4, 4, 4, 4});
  CHECK(ix.estimated_active() == 0);
}

TEST_CASE("hit requirements round up") {
  CHECK(required_hit_count(0.5, 5) == 3);
  CHECK(required_hit_count(1.0, 7) == 7);
  CHECK(required_hit_count(0.7, 10) == 7);
  CHECK(required_hit_count(0.875, 1024) == 896);
}

TEST_CASE("set budgets match the accuracy rule by hand") {
  CHECK(required_theta(29357, 0.1) == 550);
  CHECK(required_theta(1, 1.0) == 1);
  CHECK(theta_bound(1000, 0.05) == Catch::Approx(4.0 * theta_bound(1000, 0.1)));
  CHECK_THROWS_AS(required_theta(0, 0.1), ValidationError);
  CHECK_THROWS_AS(required_theta(10, 0.0), ValidationError);
  CHECK_THROWS_WITH(required_theta(10, 1e-9), Catch::Matchers::ContainsSubstring("overflow"));
}

TEST_CASE("coverage fractions count removed sets as hit") {
  Graph g = fixtures::star();
  RRIndex ix = build_index(g, TargetSet::all(g.n), Thresholds::uniform(g.n, 1.0), 4, 9);
  CHECK(coverage_fraction(ix, fixtures::kStarY, {fixtures::kStarA}) == 1.0);
  CHECK(coverage_fraction(ix, fixtures::kStarY, {}) == 0.0);
  CHECK(coverage_fraction(ix, fixtures::kStarX, {fixtures::kStarB}) == 0.0);
  remove_hit_sets(ix, fixtures::kStarA);
  CHECK(coverage_fraction(ix, fixtures::kStarY, {}) == 1.0);  // all four removed

  Graph fan = fixtures::fanin3();
  RRIndex fix =
      build_index(fan, TargetSet::of({fixtures::kFanU}, fan.n), fixtures::fanin3_thresholds(),
                  10000, 21);
  CHECK(std::abs(coverage_fraction(fix, fixtures::kFanU, {fixtures::kFanA, fixtures::kFanB}) -
                 0.75) < 0.02);
  CHECK_THROWS_WITH(coverage_fraction(fix, fixtures::kFanA, {}),
                    Catch::Matchers::ContainsSubstring("not a target"));
}

TEST_CASE("overlap counts live sets only") {
  Graph g = fixtures::star();
  RRIndex ix = build_index(g, TargetSet::all(g.n), Thresholds::uniform(g.n, 1.0), 4, 9);
  CHECK(overlap(ix, fixtures::kStarA, fixtures::kStarY) == 4);
  CHECK(overlap(ix, fixtures::kStarB, fixtures::kStarY) == 4);
  CHECK(overlap(ix, fixtures::kStarX, fixtures::kStarY) == 0);
  remove_hit_sets(ix, fixtures::kStarA);
  CHECK(overlap(ix, fixtures::kStarB, fixtures::kStarY) == 0);
}

TEST_CASE("removal charges each owner once per set and is idempotent") {
  Graph g = fixtures::star();
  RRIndex ix = build_index(g, TargetSet::all(g.n), Thresholds::uniform(g.n, 1.0), 4, 9);
  auto rem = remove_hit_sets(ix, fixtures::kStarA);
  CHECK(rem == std::vector<std::uint64_t>{4, 0, 4, 4});
  CHECK(ix.req == std::vector<std::int64_t>{0, 4, 0, 0});
  CHECK(ix.estimated_active() == 3);
  auto again = remove_hit_sets(ix, fixtures::kStarA);
  CHECK(again == std::vector<std::uint64_t>{0, 0, 0, 0});
  CHECK(ix.estimated_active() == 3);
}

TEST_CASE("requirement bookkeeping stays exact under arbitrary removals") {
  Graph g = fixtures::random_graph(20, 60, 5, 0.3, 0.9);
  Thresholds th = fixtures::random_thresholds(20, 5);
  RRIndex ix = build_index(g, TargetSet::all(g.n), th, 64, 5);
  std::set<std::uint32_t> active_before;
  Rng pick(123);
  for (int step = 0; step < 12; ++step) {
    remove_hit_sets(ix, static_cast<std::uint32_t>(pick.next_below(g.n)));
    std::set<std::uint32_t> active_now;
    std::uint64_t live_total = 0;
    for (std::size_t oi = 0; oi < ix.owners.size(); ++oi) {
      CHECK(ix.req[oi] ==
            required_hit_count(th.tau[ix.owners[oi]], ix.theta) -
                static_cast<std::int64_t>(ix.rem_count[oi]));
      if (ix.req[oi] <= 0) active_now.insert(ix.owners[oi]);
    }
    for (std::uint64_t gid = 0; gid < ix.set_count(); ++gid) live_total += !ix.removed[gid];
    CHECK(active_now.size() == ix.estimated_active());
    // the active set only ever grows
    CHECK(std::includes(active_now.begin(), active_now.end(), active_before.begin(),
                        active_before.end()));
    active_before = active_now;
    (void)live_total;
  }
}

TEST_CASE("inverted index stays consistent with a from-scratch recount") {
  Graph g = fixtures::random_graph(12, 30, 8, 0.3, 0.9);
  RRIndex ix = build_index(g, TargetSet::all(g.n), Thresholds::uniform(g.n, 0.5), 32, 8);
  remove_hit_sets(ix, 3);
  remove_hit_sets(ix, 7);
  for (std::uint32_t v = 0; v < g.n; ++v)
    for (std::uint32_t u = 0; u < g.n; ++u) {
      std::uint64_t expect = 0;
      const std::uint64_t begin = static_cast<std::uint64_t>(ix.owner_index[u]) * ix.theta;
      for (std::uint64_t gid = begin; gid < begin + ix.theta; ++gid) {
        if (ix.removed[gid]) continue;
        auto s = set_contents(ix, static_cast<std::uint32_t>(gid));
        expect += std::binary_search(s.begin(), s.end(), v);
      }
      CHECK(overlap(ix, v, u) == expect);
    }
}

TEST_CASE("coverage fractions track exact activation probabilities") {
  Graph g = fixtures::random_graph(6, 10, 31);
  ExactEnsemble ens(g);
  RRIndex ix = build_index(g, TargetSet::all(g.n), Thresholds::uniform(g.n, 0.5), 50000, 31);
  for (std::uint32_t a = 0; a < g.n; ++a)
    for (std::uint32_t b = a; b < g.n; ++b) {
      std::vector<std::uint32_t> seeds = a == b ? std::vector<std::uint32_t>{a}
                                                : std::vector<std::uint32_t>{a, b};
      auto exact = ens.activation_probs(ExactEnsemble::seed_mask(seeds, g.n));
      for (std::uint32_t u = 0; u < g.n; ++u)
        CHECK(std::abs(coverage_fraction(ix, u, seeds) - exact[u]) < 0.02);
    }
}

TEST_CASE("index builds are deterministic in the seed") {
  Graph g = fixtures::random_graph(10, 25, 44, 0.2, 0.8);
  RRIndex a = build_index(g, TargetSet::all(g.n), Thresholds::uniform(g.n, 0.5), 128, 1);
  RRIndex b = build_index(g, TargetSet::all(g.n), Thresholds::uniform(g.n, 0.5), 128, 1);
  CHECK(a.nodes == b.nodes);
  CHECK(a.offs == b.offs);
  RRIndex c = build_index(g, TargetSet::all(g.n), Thresholds::uniform(g.n, 0.5), 128, 2);
  CHECK(a.nodes != c.nodes);
}

TEST_CASE("snapshots round-trip and reject mismatched inputs") {
  Graph g = fixtures::star();
  TargetSet all = TargetSet::all(g.n);
  Thresholds th = Thresholds::uniform(g.n, 1.0);
  RRIndex ix = build_index(g, all, th, 4, 9);
  const auto dir = std::filesystem::temp_directory_path();
  const std::string path = (dir / "star_index.carr").string();
  const std::string bad_path = (dir / "bad_magic.carr").string();
  save_snapshot(ix, path);
  RRIndex back = load_snapshot(path, g, all, th);
  CHECK(back.nodes == ix.nodes);
  CHECK(back.offs == ix.offs);
  CHECK(back.owners == ix.owners);
  CHECK(back.req == ix.req);
  CHECK(back.theta == ix.theta);
  CHECK(back.seed == ix.seed);
  CHECK(back.inv_sets == ix.inv_sets);

  TargetSet partial = TargetSet::of({0, 1}, g.n);
  CHECK_THROWS_WITH(load_snapshot(path, g, partial, th),
                    Catch::Matchers::ContainsSubstring("target set differs"));
  Graph bigger = fixtures::random_graph(6, 8, 1);
  CHECK_THROWS_WITH(load_snapshot(path, bigger, TargetSet::all(6), Thresholds::uniform(6, 1.0)),
                    Catch::Matchers::ContainsSubstring("node count"));
  {
    std::ofstream f(bad_path, std::ios::binary);
    f.write("NOPE", 4);
  }
  CHECK_THROWS_WITH(load_snapshot(bad_path, g, all, th),
                    Catch::Matchers::ContainsSubstring("magic"));
  std::filesystem::remove(path);
  std::filesystem::remove(bad_path);
}

TEST_CASE("index construction refuses to blow the memory budget") {
  Graph g = fixtures::random_graph(30, 90, 3, 0.5, 0.9);
  CHECK_THROWS_WITH(
      build_index(g, TargetSet::all(g.n), Thresholds::uniform(g.n, 0.5), 1024, 3, 2048),
      Catch::Matchers::ContainsSubstring("memory budget exceeded"));
}
