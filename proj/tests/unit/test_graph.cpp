#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <sstream>

#include "../support/fixtures.hpp"
#include "cumact/graph.hpp"

using namespace cumact;

TEST_CASE("edge list loader handles a minimal directed graph") {
  std::istringstream in("0 1 1.0\n");
  Graph g = load_edge_list(in, true);
  CHECK(g.n == 2);
  CHECK(g.m == 1);
  CHECK(g.has_probs);
  REQUIRE(g.out[0].size() == 1);
  CHECK(g.out[0][0].to == 1);
  CHECK(g.out[0][0].p == 1.0);
  REQUIRE(g.in[1].size() == 1);
  CHECK(g.in[1][0].to == 0);
}

TEST_CASE("edge list loader remaps arbitrary tokens densely by first appearance") {
  std::istringstream in("a u 0.5\nb u 0.5\nc u 0.5\n");
  Graph g = load_edge_list(in, true);
  CHECK(g.n == 4);
  CHECK(g.m == 3);
  CHECK(g.labels == std::vector<std::string>{"a", "u", "b", "c"});
  CHECK(g.ids.at("a") == 0);
  CHECK(g.ids.at("u") == 1);
  CHECK(g.in_degree(g.ids.at("u")) == 3);
  CHECK(g.out_degree(g.ids.at("u")) == 0);
}

TEST_CASE("edge list loader accepts comments and prob-less columns") {
  std::istringstream in("# full-line comment\nx y # trailing comment\ny z\n");
  Graph g = load_edge_list(in, true);
  CHECK(g.n == 3);
  CHECK(g.m == 2);
  CHECK_FALSE(g.has_probs);
}

TEST_CASE("edge list loader rejects bad input with line numbers") {
  auto load = [](const char* text) {
    std::istringstream in(text);
    return load_edge_list(in, true);
  };
  CHECK_THROWS_WITH(load("0 1 1.5\n"), Catch::Matchers::ContainsSubstring("line 1"));
  CHECK_THROWS_WITH(load("0 1 0.5\n0 1 0.5\n"), Catch::Matchers::ContainsSubstring("duplicate"));
  CHECK_THROWS_WITH(load("0 1 0.5\n2 2 0.5\n"), Catch::Matchers::ContainsSubstring("self-loop"));
  CHECK_THROWS_WITH(load("0 1 0.5\nbroken\n"), Catch::Matchers::ContainsSubstring("line 2"));
  CHECK_THROWS_MATCHES(load("0 1 0.5\n1 2\n"), ValidationError,
                       Catch::Matchers::MessageMatches(
                           Catch::Matchers::ContainsSubstring("inconsistent column count")));
  CHECK_THROWS_WITH(load("0 1 zero\n"), Catch::Matchers::ContainsSubstring("bad probability"));
  CHECK_THROWS_AS(load("# nothing\n\n"), ValidationError);
}

TEST_CASE("undirected input stores both arcs with equal probability") {
  std::istringstream in("a b 0.25\n");
  Graph g = load_edge_list(in, false);
  CHECK(g.m == 2);
  REQUIRE(g.out[0].size() == 1);
  REQUIRE(g.out[1].size() == 1);
  CHECK(g.out[0][0].p == 0.25);
  CHECK(g.out[1][0].p == 0.25);
  std::istringstream dup("a b 0.25\nb a 0.25\n");
  CHECK_THROWS_AS(load_edge_list(dup, false), ValidationError);
}

TEST_CASE("loading the same bytes twice yields identical graphs") {
  const char* text = "a u 0.5\nb u 0.5\nc u 0.5\n";
  std::istringstream in1(text), in2(text);
  Graph g1 = load_edge_list(in1, true);
  Graph g2 = load_edge_list(in2, true);
  REQUIRE(g1.n == g2.n);
  CHECK(g1.labels == g2.labels);
  for (std::uint32_t u = 0; u < g1.n; ++u) {
    REQUIRE(g1.out[u].size() == g2.out[u].size());
    for (std::size_t i = 0; i < g1.out[u].size(); ++i) {
      CHECK(g1.out[u][i].to == g2.out[u][i].to);
      CHECK(g1.out[u][i].p == g2.out[u][i].p);
    }
  }
}

TEST_CASE("write_edge_list round-trips through the loader") {
  Graph g = fixtures::random_graph(9, 17, 20260817);
  std::ostringstream out;
  write_edge_list(g, out);
  std::istringstream back(out.str());
  Graph h = load_edge_list(back, true);
  REQUIRE(h.n == g.n);
  REQUIRE(h.m == g.m);
  for (std::uint32_t u = 0; u < g.n; ++u) {
    auto hu = h.ids.at(g.labels[u]);
    REQUIRE(h.out[hu].size() == g.out[u].size());
    for (std::size_t i = 0; i < g.out[u].size(); ++i) {
      CHECK(h.labels[h.out[hu][i].to] == g.labels[g.out[u][i].to]);
      CHECK(h.out[hu][i].p == g.out[u][i].p);  // exact: shortest round-trip format
    }
  }
}

TEST_CASE("transposing twice restores the original adjacency") {
  Graph g = fixtures::random_graph(8, 20, 99);
  auto transpose = [](const Graph& src) {
    Graph t = src;
    std::swap(t.out, t.in);
    return t;
  };
  Graph gtt = transpose(transpose(g));
  for (std::uint32_t u = 0; u < g.n; ++u) {
    REQUIRE(gtt.out[u].size() == g.out[u].size());
    for (std::size_t i = 0; i < g.out[u].size(); ++i) {
      CHECK(gtt.out[u][i].to == g.out[u][i].to);
      CHECK(gtt.out[u][i].p == g.out[u][i].p);
    }
  }
  CHECK(validate(g, Thresholds::uniform(g.n, 0.5), TargetSet::all(g.n)).ok());
}

TEST_CASE("constant model assigns p everywhere") {
  std::istringstream in("a x\na y\nb y\n");
  Graph g = load_edge_list(in, true);
  assign_probabilities(g, ProbModel::constant(1.0), 5);
  CHECK(g.has_probs);
  for (std::uint32_t u = 0; u < g.n; ++u)
    for (const Arc& a : g.out[u]) CHECK(a.p == 1.0);
  CHECK_THROWS_AS(assign_probabilities(g, ProbModel::constant(0.5), 5), ValidationError);
}

TEST_CASE("weighted cascade defaults to 1/in-degree") {
  std::istringstream in("a v\nb v\n");  // two arcs into v
  Graph g = load_edge_list(in, true);
  assign_probabilities(g, ProbModel::weighted_cascade(), 0);
  std::uint32_t v = g.ids.at("v");
  for (const Arc& a : g.in[v]) CHECK(a.p == 0.5);
  for (std::uint32_t u = 0; u < g.n; ++u)
    for (const Arc& a : g.out[u]) CHECK(a.p == 0.5);
}

TEST_CASE("weighted cascade rejects explicit zero counts on fed nodes") {
  std::istringstream in("a v\nb v\n");
  Graph g = load_edge_list(in, true);
  ProbModel m = ProbModel::weighted_cascade();
  m.node_count = {1.0, 0.0, 1.0};  // v = dense id 1, has in-edges
  CHECK_THROWS_WITH(assign_probabilities(g, m, 0), Catch::Matchers::ContainsSubstring("zero"));
}

TEST_CASE("trivalency draws from the three levels, deterministically per seed") {
  auto ring = [](std::uint32_t n) {
    Graph g;
    for (std::uint32_t v = 0; v < n; ++v) g.add_node(std::to_string(v));
    for (std::uint32_t v = 0; v < n; ++v) g.add_arc(v, (v + 1) % n, 0.0);
    return g;
  };
  Graph g1 = ring(100), g2 = ring(100);
  assign_probabilities(g1, ProbModel::trivalency(), 7);
  assign_probabilities(g2, ProbModel::trivalency(), 7);
  std::vector<double> p1, p2;
  for (std::uint32_t u = 0; u < 100; ++u) {
    p1.push_back(g1.out[u][0].p);
    p2.push_back(g2.out[u][0].p);
    CHECK((p1.back() == 0.1 || p1.back() == 0.01 || p1.back() == 0.001));
  }
  CHECK(p1 == p2);

  // across five seeds at least two distinct assignments appear
  std::set<std::vector<double>> distinct;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Graph g = ring(100);
    assign_probabilities(g, ProbModel::trivalency(), seed);
    std::vector<double> ps;
    for (std::uint32_t u = 0; u < 100; ++u) ps.push_back(g.out[u][0].p);
    distinct.insert(ps);
  }
  CHECK(distinct.size() >= 2);
}

TEST_CASE("validate reports structural damage instead of throwing") {
  Graph g = fixtures::fanin3();
  Thresholds th = fixtures::fanin3_thresholds();
  TargetSet all = TargetSet::all(g.n);
  CHECK(validate(g, th, all).ok());

  Thresholds bad = th;
  bad.tau[0] = 0.0;
  CHECK_FALSE(validate(g, bad, all).ok());

  Graph corrupted = g;
  corrupted.in[fixtures::kFanU].pop_back();  // break the transpose relation
  auto rep = validate(corrupted, th, all);
  REQUIRE_FALSE(rep.ok());
  bool mentions_transpose = false;
  for (const auto& p : rep.problems)
    mentions_transpose |= p.find("transpose") != std::string::npos;
  CHECK(mentions_transpose);

  Graph wrong_m = g;
  wrong_m.m = 7;
  CHECK_FALSE(validate(wrong_m, th, all).ok());
}

TEST_CASE("threshold files must cover every node exactly once, in range") {
  Graph g = fixtures::star();
  {
    std::istringstream in("a 0.5\nb 1\nx 0.25\ny 0.75\n");
    Thresholds th = load_thresholds(in, g);
    CHECK(th.tau[fixtures::kStarA] == 0.5);
    CHECK(th.tau[fixtures::kStarY] == 0.75);
    CHECK(th.sum() == Catch::Approx(2.5));
  }
  {
    std::istringstream in("a 0.5\nb 1\nx 0.25\n");
    CHECK_THROWS_WITH(load_thresholds(in, g), Catch::Matchers::ContainsSubstring("no threshold"));
  }
  {
    std::istringstream in("a 0.5\nq 1\nx 0.25\ny 0.75\n");
    CHECK_THROWS_WITH(load_thresholds(in, g), Catch::Matchers::ContainsSubstring("unknown node"));
  }
  {
    std::istringstream in("a 0\nb 1\nx 0.25\ny 0.75\n");
    CHECK_THROWS_AS(load_thresholds(in, g), ValidationError);
  }
  {
    std::istringstream in("a 0.5\na 0.6\nb 1\nx 0.25\ny 0.75\n");
    CHECK_THROWS_WITH(load_thresholds(in, g), Catch::Matchers::ContainsSubstring("duplicate"));
  }
  CHECK_THROWS_AS(Thresholds::uniform(4, 0.0), ValidationError);
  CHECK_THROWS_AS(Thresholds::uniform(4, 1.5), ValidationError);
}

TEST_CASE("target sets load by token and reject unknowns and emptiness") {
  Graph g = fixtures::star();
  {
    std::istringstream in("y\nx\n");
    TargetSet t = load_target_set(in, g);
    CHECK(t.members == std::vector<std::uint32_t>{fixtures::kStarX, fixtures::kStarY});
    CHECK(t.contains(fixtures::kStarY));
    CHECK_FALSE(t.contains(fixtures::kStarA));
  }
  {
    std::istringstream in("z\n");
    CHECK_THROWS_AS(load_target_set(in, g), ValidationError);
  }
  {
    std::istringstream in("# none\n");
    CHECK_THROWS_AS(load_target_set(in, g), ValidationError);
  }
}
