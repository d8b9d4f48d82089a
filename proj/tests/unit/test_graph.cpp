#include <random>
#include <sstream>

#include "doctest.h"
#include "liverank/error.hpp"
#include "liverank/graph.hpp"
#include "oracles.hpp"

using namespace liverank;
using liverank::testing::TempDir;

TEST_CASE("3-cycle edge list") {
  const auto g = parse_edge_list("0 1\n1 2\n2 0");
  CHECK(g.num_nodes() == 3);
  CHECK(g.num_edges() == 3);
  REQUIRE(g.in_neighbors(0).size() == 1);
  CHECK(g.in_neighbors(0)[0] == 2);
  CHECK(g.out_neighbors(1)[0] == 2);
}

TEST_CASE("duplicate edges collapse only when asked") {
  CHECK(parse_edge_list("0 1\n0 1").num_edges() == 1);
  const auto kept = parse_edge_list("0 1\n0 1", {.collapse_duplicates = false});
  CHECK(kept.num_edges() == 2);
  CHECK(kept.in_degree(1) == 2);
}

TEST_CASE("self-loops are kept as ordinary out-edges") {
  const auto g = parse_edge_list("0 0\n0 1");
  CHECK(g.out_degree(0) == 2);
  CHECK(g.in_degree(0) == 1);
  CHECK(summarize(g).self_loops == 1);
}

TEST_CASE("comments, blank lines and the optional header") {
  const auto g = parse_edge_list("# 5 2\n\n# a comment\n0 1\n  3\t4  \n");
  CHECK(g.num_nodes() == 5);
  CHECK(g.num_edges() == 2);
  CHECK(g.out_degree(2) == 0);
  CHECK(parse_edge_list("# just words\n0 1\n").num_nodes() == 2);
}

TEST_CASE("malformed input reports the line") {
  try {
    parse_edge_list("0 1\n1 x\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(parse_edge_list("0 1 2\n"), ParseError);
  CHECK_THROWS_AS(parse_edge_list("-1 2\n"), ParseError);
  CHECK_THROWS_AS(parse_edge_list("7\n"), ParseError);
}

TEST_CASE("ids beyond the declared n and header mismatches are rejected") {
  CHECK_THROWS_AS(parse_edge_list("# 3 1\n0 3\n"), BoundsError);
  CHECK_THROWS_AS(parse_edge_list("# 3 2\n0 1\n"), ShapeError);
}

TEST_CASE("degree sums equal m on a random file") {
  std::mt19937_64 rng(50);
  std::uniform_int_distribution<int> pick(0, 49);
  std::ostringstream text;
  std::set<std::pair<int, int>> distinct;
  for (int i = 0; i < 400; ++i) {
    const int u = pick(rng), v = pick(rng);
    text << u << ' ' << v << '\n';
    distinct.emplace(u, v);
  }
  const auto g = parse_edge_list(text.str());
  // recount from the distinct pairs written above
  std::vector<std::size_t> out(50, 0), in(50, 0);
  for (const auto& [u, v] : distinct) {
    ++out[u];
    ++in[v];
  }
  std::size_t out_sum = 0, in_sum = 0;
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    CHECK(g.out_degree(v) == out[v]);
    CHECK(g.in_degree(v) == in[v]);
    out_sum += g.out_degree(v);
    in_sum += g.in_degree(v);
  }
  CHECK(g.num_edges() == distinct.size());
  CHECK(out_sum == g.num_edges());
  CHECK(in_sum == g.num_edges());
}

TEST_CASE("adjacency is sorted, strictly with collapsing, and both directions agree") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + rng() % 80;
    const auto edges = liverank::testing::random_edges(n, 3.0, rng);
    const auto g = DirectedGraph::from_edges(n, edges);
    for (NodeId u = 0; u < n; ++u) {
      const auto row = g.out_neighbors(u);
      for (std::size_t i = 1; i < row.size(); ++i) CHECK(row[i - 1] < row[i]);
      for (NodeId v : row) {
        const auto back = g.in_neighbors(v);
        CHECK(std::binary_search(back.begin(), back.end(), u));
      }
    }
  }
}

TEST_CASE("transpose is an involution") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + rng() % 60;
    const auto g = DirectedGraph::from_edges(n, liverank::testing::random_edges(n, 2.5, rng));
    CHECK(g.transpose().transpose() == g);
    // rebuilding from the reverse lists gives the same forward lists
    const auto rebuilt = DirectedGraph::from_csr(g.in_offsets(), g.in_sources()).transpose();
    CHECK(rebuilt.out_offsets() == g.out_offsets());
    CHECK(rebuilt.out_targets() == g.out_targets());
  }
}

TEST_CASE("binary cache round-trips and ingest is deterministic") {
  TempDir dir("graph");
  std::mt19937_64 rng(3);
  std::ostringstream text;
  for (int i = 0; i < 300; ++i) text << rng() % 40 << ' ' << rng() % 40 << '\n';
  const auto edges = dir.file("edges.txt", text.str());

  const auto a = load_edge_list(edges);
  const auto b = load_edge_list(edges);
  CHECK(serialize_graph(a) == serialize_graph(b));

  save_graph_cache(dir.path() / "g.bin", a);
  CHECK(is_graph_cache(dir.path() / "g.bin"));
  CHECK_FALSE(is_graph_cache(edges));
  const auto c = load_graph(dir.path() / "g.bin");
  CHECK(c == a);

  write_edge_list(dir.path() / "again.txt", a);
  CHECK(load_edge_list(dir.path() / "again.txt") == a);
}

TEST_CASE("corrupt caches are refused") {
  TempDir dir("cache");
  std::mt19937_64 rng(5);
  const auto g = DirectedGraph::from_edges(10, liverank::testing::random_edges(10, 2.0, rng));
  auto bytes = serialize_graph(g);
  bytes.resize(bytes.size() - 3);
  const auto path = dir.file("bad.bin", std::string(bytes.begin(), bytes.end()));
  CHECK_THROWS_AS(load_graph_cache(path), IoError);
  CHECK_THROWS_AS(load_graph_cache(dir.file("plain.txt", "0 1\n")), IoError);
}

TEST_CASE("empty and isolated graphs") {
  const auto g = parse_edge_list("# 4 0\n");
  CHECK(g.num_nodes() == 4);
  CHECK(g.num_edges() == 0);
  CHECK(summarize(g).dangling == 4);
  CHECK(parse_edge_list("").num_nodes() == 0);
}
