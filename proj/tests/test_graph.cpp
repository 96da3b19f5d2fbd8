#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "sog/graph.hpp"
#include "test_util.hpp"

using namespace sog;

TEST_CASE("parse the 3-node example graph") {
  MarkedDigraph g = parse_graph(
      "digraph 3\nmarked 1\nedge 2 1\nedge 3 2\nedge 1 3\nedge 2 3\nedge 3 3");
  CHECK(g.vertex_count() == 3);
  CHECK(g.marked() == std::vector<int>{1});
  CHECK(g.edges().size() == 5);
  CHECK(g.has_edge(3, 3));
  CHECK(g.in_neighbors(3) == std::vector<int>{1, 2, 3});
  CHECK(g.in_neighbors(1) == std::vector<int>{2});
}

TEST_CASE("single marked vertex, no edges") {
  MarkedDigraph g = parse_graph("digraph 1\nmarked 1");
  CHECK(g.vertex_count() == 1);
  CHECK(g.edges().empty());
  CHECK(g.is_marked(1));
}

TEST_CASE("isolated vertices have empty neighborhoods") {
  MarkedDigraph g = parse_graph("digraph 3\nedge 1 2");
  CHECK(g.in_neighbors(3).empty());
  CHECK(g.out_neighbors(3).empty());
}

TEST_CASE("parse errors carry position info") {
  CHECK_THROWS_AS(parse_graph("digraph 3\nedge 4 1"), ParseError);
  CHECK_THROWS_AS(parse_graph("digraph 3\nedge 1 2\nedge 1 2"), ParseError);
  CHECK_THROWS_AS(parse_graph("edge 1 2"), ParseError);
  CHECK_THROWS_AS(parse_graph("digraph 2\nedge 1 x"), ParseError);
  try {
    parse_graph("digraph 3\nedge 4 1");
    FAIL("expected throw");
  } catch (const ParseError &e) {
    CHECK(e.line == 2);
  }
}

TEST_CASE("comments and blank lines are ignored") {
  MarkedDigraph g =
      parse_graph("# header\ndigraph 2 # two vertices\n\nedge 1 2 # e\n");
  CHECK(g.vertex_count() == 2);
  CHECK(g.edges().size() == 1);
}

TEST_CASE("distance follows shortest nonempty walks") {
  MarkedDigraph g = load_graph_file(sog_test::data_path("eq9.graph"));
  CHECK(g.distance(3, 1) == 2);
  CHECK(g.distance(3, 3) == 1); // self-loop
  CHECK(g.distance(1, 1) == 3); // 1 -> 3 -> 2 -> 1
  MarkedDigraph iso(2, {}, {});
  CHECK(!iso.distance(1, 2).has_value());
  CHECK(!iso.distance(1, 1).has_value());
}

TEST_CASE("distance equals first nonzero boolean matrix power (n <= 8)") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    int n = 2 + (int)(seed % 7);
    MarkedDigraph g =
        sog_test::random_digraph(n, 0.3, 0.0, 1000 + seed, 0, true);
    AdjacencyMatrix a = adjacency_matrix(g);
    // power[k][i][j] = walk of length k exists
    std::vector<std::vector<char>> reach((size_t)n * n);
    std::vector<char> cur(a.entries.begin(), a.entries.end());
    for (int k = 1; k <= n; ++k) {
      for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) {
          auto want = g.distance(i, j);
          bool entry = cur[(size_t)(i - 1) * n + (j - 1)] != 0;
          if (want && *want == k)
            CHECK(entry);
          if (want && *want > k)
            CHECK(!entry);
          if (!want)
            CHECK(!entry);
        }
      // boolean multiply cur <- cur * A
      std::vector<char> next((size_t)n * n, 0);
      for (int i = 0; i < n; ++i)
        for (int t = 0; t < n; ++t)
          if (cur[(size_t)i * n + t])
            for (int j = 0; j < n; ++j)
              if (a.entries[(size_t)t * n + j])
                next[(size_t)i * n + j] = 1;
      cur = std::move(next);
    }
  }
}

TEST_CASE("parse(render(g)) round-trips") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    int n = 1 + (int)(seed % 9);
    MarkedDigraph g =
        sog_test::random_digraph(n, 0.25, 0.4, 2000 + seed, 0, true);
    CHECK(parse_graph(render_graph(g)) == g);
    CHECK(graph_from_json(graph_to_json(g)) == g);
  }
}

TEST_CASE("adjacency matrix matches the edge set") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    int n = 1 + (int)(seed % 8);
    MarkedDigraph g =
        sog_test::random_digraph(n, 0.35, 0.0, 3000 + seed, 0, true);
    AdjacencyMatrix a = adjacency_matrix(g);
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j)
        CHECK((a.at(i, j) == 1) == g.has_edge(i, j));
  }
}

TEST_CASE("DOT export") {
  MarkedDigraph empty(0, {}, {});
  std::string dot = to_dot(empty);
  CHECK(dot.find("digraph G {") == 0);

  {
    MarkedDigraph g = load_graph_file(sog_test::data_path("eq9.graph"));
    std::string d = to_dot(g, {{"marked", {1}}});
    int nodes = 0, edges = 0;
    size_t pos = 0;
    while ((pos = d.find("label=", pos)) != std::string::npos) {
      ++nodes;
      ++pos;
    }
    pos = 0;
    while ((pos = d.find("->", pos)) != std::string::npos) {
      ++edges;
      ++pos;
    }
    CHECK(nodes == 3);
    CHECK(edges == 5);
    CHECK(d.find("doublecircle") != std::string::npos);
    CHECK(d.find("fillcolor=red") != std::string::npos);
  }
}

TEST_CASE("T-LGL graph file has 29 nodes in DOT") {
  MarkedDigraph g = load_graph_file(sog_test::data_path("tlgl29.graph"));
  CHECK(g.vertex_count() == 29);
  std::string d = to_dot(g);
  int nodes = 0;
  size_t pos = 0;
  while ((pos = d.find("label=", pos)) != std::string::npos) {
    ++nodes;
    ++pos;
  }
  CHECK(nodes == 29);
}

TEST_CASE("with_controlled replaces the in-edge set") {
  MarkedDigraph g = parse_graph("digraph 3\nmarked 3\nedge 1 2\nedge 3 2");
  MarkedDigraph h = g.with_controlled(2, 3);
  CHECK(h.in_neighbors(2) == std::vector<int>{3});
  CHECK(h.out_neighbors(1).empty());
  // out-edges of the controlled vertex survive
  MarkedDigraph k = parse_graph("digraph 2\nmarked 2\nedge 1 1\nedge 1 2");
  MarkedDigraph kc = k.with_controlled(1, 2);
  CHECK(kc.has_edge(1, 2));
  CHECK(!kc.has_edge(1, 1));
  CHECK(kc.in_neighbors(1) == std::vector<int>{2});
}

TEST_CASE("canonical relabel puts marked vertices first") {
  MarkedDigraph g = load_graph_file(sog_test::data_path("tlgl29.graph"));
  Relabeling r = canonical_relabel(g);
  CHECK(r.graph.marked() == std::vector<int>{1, 2, 3});
  CHECK(r.new_index[3] == 1);
  CHECK(r.new_index[5] == 2);
  CHECK(r.new_index[6] == 3);
  CHECK(r.graph.edges().size() == g.edges().size());
  for (auto [i, j] : g.edges())
    CHECK(r.graph.has_edge(r.new_index[i], r.new_index[j]));
  // distance structure is permutation-invariant
  CHECK(g.distance(9, 11) ==
        r.graph.distance(r.new_index[9], r.new_index[11]));
}

TEST_CASE("distance from a set is the member minimum") {
  MarkedDigraph g = load_graph_file(sog_test::data_path("tlgl29.graph"));
  CHECK(g.distance_from_set({1, 9}, 11) == 2); // 9 -> 10 -> 11
  CHECK(g.distance_from_set({1, 9}, 21) == 2); // 1 -> 20 -> 21
  CHECK(!g.distance_from_set({26}, 1).has_value());
}

TEST_CASE("vertex bounds are enforced") {
  MarkedDigraph g(2, {{1, 2}}, {2});
  CHECK_THROWS_AS(g.in_neighbors(3), std::out_of_range);
  CHECK_THROWS_AS(g.distance(0, 1), std::out_of_range);
  CHECK_THROWS_AS(MarkedDigraph(2, {{1, 3}}, {}), std::invalid_argument);
  CHECK_THROWS_AS(MarkedDigraph(2, {{1, 2}, {1, 2}}, {}),
                  std::invalid_argument);
}
