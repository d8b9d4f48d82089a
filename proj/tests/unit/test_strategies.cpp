#include <algorithm>
#include <numeric>
#include <random>

#include "doctest.h"
#include "liverank/error.hpp"
#include "liverank/strategies.hpp"
#include "oracles.hpp"

using namespace liverank;
using liverank::testing::dense_pagerank;
using liverank::testing::random_edges;
using liverank::testing::TempDir;

namespace {

std::vector<NodeId> ids(std::initializer_list<NodeId> list) { return list; }

ScoreVector static_pr_of(const DirectedGraph& g) {
  return pagerank(g, {}, uniform_zap(g.num_nodes())).scores;
}

}  // namespace

TEST_CASE("random order: trivial sizes and reproducibility") {
  CHECK(rank_random(1, 42).order == ids({0}));
  CHECK(rank_random(5, 9).order == rank_random(5, 9).order);
  CHECK(rank_random(5, 9).is_permutation());
  CHECK(rank_random(0, 1).order.empty());
}

TEST_CASE("random order: each node leads with frequency 1/n") {
  std::array<int, 5> first{};
  const int seeds = 10000;
  for (int s = 0; s < seeds; ++s) ++first[rank_random(5, static_cast<std::uint64_t>(s)).order[0]];
  for (int count : first) CHECK(std::fabs(count / static_cast<double>(seeds) - 0.2) <= 0.02);
}

TEST_CASE("indegree order") {
  const auto star = parse_edge_list("1 0\n2 0\n3 0\n4 0\n");
  CHECK(rank_indegree(star).order.front() == 0);
  CHECK(rank_indegree(star).order == ids({0, 1, 2, 3, 4}));

  const auto cycle = parse_edge_list("0 1\n1 2\n2 3\n3 0\n");
  CHECK(rank_indegree(cycle).order == ids({0, 1, 2, 3}));

  std::mt19937_64 rng(4);
  const auto edges = random_edges(100, 3.0, rng);
  const auto g = DirectedGraph::from_edges(100, edges);
  std::vector<std::size_t> indeg(100, 0);
  for (const auto& [u, v] : std::set<Edge>(edges.begin(), edges.end())) ++indeg[v];
  const auto order = rank_indegree(g).order;
  for (std::size_t i = 1; i < order.size(); ++i) {
    CHECK(indeg[order[i - 1]] >= indeg[order[i]]);
    if (indeg[order[i - 1]] == indeg[order[i]]) CHECK(order[i - 1] < order[i]);
  }
}

TEST_CASE("pagerank order") {
  CHECK(rank_pagerank(parse_edge_list("0 1\n1 2\n2 0\n"), {}).order == ids({0, 1, 2}));
  CHECK(rank_pagerank(parse_edge_list("1 0\n2 0\n3 0\n4 0\n"), {}).order.front() == 0);

  const std::vector<Edge> path{{0, 1}, {1, 2}};
  const auto dense = dense_pagerank(3, path, 0.85, {1.0 / 3, 1.0 / 3, 1.0 / 3});
  CHECK(dense[2] > dense[1]);
  CHECK(dense[1] > dense[0]);
  CHECK(rank_pagerank(DirectedGraph::from_edges(3, path), {}).order == ids({2, 1, 0}));
}

TEST_CASE("orders are invariant under positive rescaling of scores") {
  std::mt19937_64 rng(8);
  const auto g = DirectedGraph::from_edges(300, random_edges(300, 2.0, rng));
  const auto pr = static_pr_of(g);
  ScoreVector scaled = pr;
  for (double& x : scaled.raw()) x *= 7.0;
  CHECK(rank_by_scores(pr).order == rank_by_scores(scaled).order);
}

TEST_CASE("sample selection") {
  const LiveRankOrder base{ids({2, 0, 1}), "x"};
  CHECK(select_sample(base, 2) == ids({2, 0}));
  CHECK(select_sample(base, 0).empty());
  CHECK(select_sample(base, 3) == base.order);
  CHECK_THROWS_AS(select_sample(base, 4), PreconditionError);
}

TEST_CASE("active count estimate") {
  std::vector<bool> half(100, false);
  std::fill(half.begin(), half.begin() + 50, true);
  CHECK(estimate_active_count(half, 100, 1000) == 500.0);
  CHECK(estimate_active_count(std::vector<bool>(10, false), 10, 1000) == 0.0);
  CHECK_THROWS_AS(estimate_active_count({}, 0, 10), DomainError);
}

TEST_CASE("active count estimate is unbiased under uniform sampling") {
  const std::size_t n = 10000, n_a = 1000, z = 500;
  std::vector<bool> labels(n, false);
  const auto actives = rank_random(n, 777).order;
  for (std::size_t i = 0; i < n_a; ++i) labels[actives[i]] = true;
  double total = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto sample = select_sample(rank_random(n, seed + 1000), z);
    std::vector<bool> sample_labels;
    for (NodeId v : sample) sample_labels.push_back(labels[v]);
    total += estimate_active_count(sample_labels, z, n);
  }
  CHECK(std::fabs(total / 100.0 - 1000.0) <= 50.0);
}

TEST_CASE("simple adaptive: mass flows from the active seed") {
  const std::vector<Edge> path{{0, 1}, {1, 2}};
  const auto g = DirectedGraph::from_edges(3, path);
  const auto seeded = dense_pagerank(3, path, 0.85, {1.0, 0.0, 0.0});
  CHECK(seeded[1] > seeded[2]);
  const auto order = rank_simple_adaptive(g, {}, ids({0}), {true}, static_pr_of(g));
  CHECK(order.order == ids({0, 1, 2}));
}

TEST_CASE("simple adaptive: no active sample falls back to static PageRank") {
  std::mt19937_64 rng(12);
  const auto g = DirectedGraph::from_edges(60, random_edges(60, 2.0, rng));
  const auto pr = static_pr_of(g);
  const auto sample = ids({5, 9, 1});
  const auto order = rank_simple_adaptive(g, {}, sample, {false, false, false}, pr);
  CHECK(order.provenance.find("fallback") != std::string::npos);
  auto expected = rank_by_scores(pr).order;
  std::erase_if(expected, [&](NodeId v) { return v == 5 || v == 9 || v == 1; });
  CHECK(std::vector<NodeId>(order.order.begin() + 3, order.order.end()) == expected);
}

TEST_CASE("simple adaptive: Z = V returns the sample order") {
  const auto g = parse_edge_list("0 1\n1 2\n2 0\n");
  const auto order = rank_simple_adaptive(g, {}, ids({2, 0, 1}), {true, false, true}, static_pr_of(g));
  CHECK(order.order == ids({2, 0, 1}));
}

TEST_CASE("sample-based orders reject malformed samples") {
  const auto g = parse_edge_list("0 1\n1 2\n2 0\n");
  const auto pr = static_pr_of(g);
  CHECK_THROWS_AS(rank_simple_adaptive(g, {}, {}, {}, pr), PreconditionError);
  CHECK_THROWS_AS(rank_simple_adaptive(g, {}, ids({0, 0}), {true, true}, pr), PreconditionError);
  CHECK_THROWS_AS(rank_simple_adaptive(g, {}, ids({0, 1}), {true}, pr), ShapeError);
  CHECK_THROWS_AS(rank_double_adaptive(g, {}, ids({7}), {true}, pr), BoundsError);
}

TEST_CASE("double adaptive: ratio ranks the active seed's neighbour first") {
  const std::vector<Edge> edges{{0, 1}, {2, 3}};
  const auto g = DirectedGraph::from_edges(4, edges);
  // By hand: P+ seeded on {0}, P- seeded on {2}, zero-filled, then the ratio.
  auto plus = dense_pagerank(4, edges, 0.85, {1, 0, 0, 0});
  auto minus = dense_pagerank(4, edges, 0.85, {0, 0, 1, 0});
  double min_pos = 1.0;
  for (double x : minus)
    if (x > 0.0) min_pos = std::min(min_pos, x);
  for (double& x : minus)
    if (x == 0.0) x = min_pos;
  CHECK(plus[1] / minus[1] > plus[3] / minus[3]);

  const auto order = rank_double_adaptive(g, {}, ids({0, 2}), {true, false}, static_pr_of(g));
  CHECK(order.order == ids({0, 2, 1, 3}));
}

TEST_CASE("double adaptive falls back to simple adaptive on one-sided samples") {
  std::mt19937_64 rng(13);
  const auto g = DirectedGraph::from_edges(80, random_edges(80, 2.5, rng));
  const auto pr = static_pr_of(g);
  const auto sample = ids({3, 4, 5});
  const std::vector<bool> all_active{true, true, true};
  const auto d = rank_double_adaptive(g, {}, sample, all_active, pr);
  const auto s = rank_simple_adaptive(g, {}, sample, all_active, pr);
  CHECK(d.order == s.order);
  CHECK(d.provenance.find("fallback=simple_adaptive") != std::string::npos);
}

TEST_CASE("zero fill: strictly positive afterwards and order preserving") {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 20; ++trial) {
    ScoreVector s(50);
    for (std::size_t i = 0; i < 50; ++i) s[i] = (rng() % 3 == 0) ? 0.0 : static_cast<double>(rng() % 1000) + 1.0;
    s[0] = 5.0;
    const ScoreVector before = s;
    fill_zero_entries(s);
    for (double x : s.values()) CHECK(x > 0.0);
    for (std::size_t i = 0; i < 50; ++i)
      for (std::size_t j = 0; j < 50; ++j)
        if (before[i] > 0.0 && before[j] > 0.0) CHECK((before[i] < before[j]) == (s[i] < s[j]));
  }
  ScoreVector positive(std::vector<double>{0.1, 0.2, 0.3});
  const auto copy = positive;
  fill_zero_entries(positive);
  CHECK(positive == copy);
}

TEST_CASE("active site first: sites by sampled activity") {
  // nodes 0..3 on site A, 4..7 on site B
  const auto g = DirectedGraph::from_edges(8, std::vector<Edge>{{0, 1}, {4, 5}});
  const SiteMap sites(std::vector<SiteId>{0, 0, 0, 0, 1, 1, 1, 1});
  const auto pr = static_pr_of(g);
  // site B fully active in the sample, site A fully inactive
  const auto order = rank_active_site_first(g, sites, ids({0, 4}), {false, true}, pr);
  CHECK(order.is_permutation());
  CHECK(std::vector<NodeId>(order.order.begin(), order.order.begin() + 2) == ids({0, 4}));
  for (std::size_t i = 2; i < 5; ++i) CHECK(sites.site_of(order.order[i]) == 1);
  for (std::size_t i = 5; i < 8; ++i) CHECK(sites.site_of(order.order[i]) == 0);
}

TEST_CASE("active site first: equal activity is resolved deterministically") {
  const auto g = DirectedGraph::from_edges(6, std::vector<Edge>{{0, 1}, {3, 4}, {4, 5}});
  const SiteMap sites(std::vector<SiteId>{0, 0, 0, 1, 1, 1});
  const auto pr = static_pr_of(g);
  const auto a = rank_active_site_first(g, sites, ids({0, 3}), {true, true}, pr);
  const auto b = rank_active_site_first(g, sites, ids({0, 3}), {true, true}, pr);
  CHECK(a.order == b.order);
  // site 1 holds the best PageRank (node 5 at the end of a chain), so it goes first
  CHECK(pr[5] > pr[1]);
  CHECK(sites.site_of(a.order[2]) == 1);
}

TEST_CASE("active site first: unsampled site comes last") {
  // Hand trace. Sites: A={0,1,2}, B={3,4,5}, C={6,7}. Sample 0 (A, active),
  // 3 (B, inactive), 4 (B, active): A scores 1, B scores 1/2, C unsampled.
  const auto g = DirectedGraph::from_edges(8, std::vector<Edge>{{0, 1}, {1, 2}, {6, 7}, {7, 6}});
  const SiteMap sites(std::vector<SiteId>{0, 0, 0, 1, 1, 1, 2, 2});
  const auto pr = static_pr_of(g);
  const auto order = rank_active_site_first(g, sites, ids({0, 3, 4}), {true, false, true}, pr);
  // A's untested pages by static PageRank: 2 (end of chain) before 1.
  CHECK(pr[2] > pr[1]);
  CHECK(order.order == ids({0, 3, 4, 2, 1, 5, 6, 7}));
}

TEST_CASE("active site first needs a site map covering the graph") {
  const auto g = parse_edge_list("0 1\n1 2\n");
  const SiteMap small(std::vector<SiteId>{0, 0});
  CHECK_THROWS_AS(rank_active_site_first(g, small, ids({0}), {true}, static_pr_of(g)), PreconditionError);
}

TEST_CASE("every static and sample-based order is a permutation with the sample prefix") {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 30 + rng() % 200;
    const auto g = DirectedGraph::from_edges(n, random_edges(n, 3.0, rng));
    const auto pr = static_pr_of(g);
    std::vector<SiteId> site_of(n);
    for (std::size_t v = 0; v < n; ++v) site_of[v] = static_cast<SiteId>(v % 7);
    const SiteMap sites(site_of);
    const auto sample = select_sample(rank_random(n, trial), 1 + rng() % 20);
    std::vector<bool> labels;
    for (std::size_t i = 0; i < sample.size(); ++i) labels.push_back(rng() % 2 == 0);

    std::vector<LiveRankOrder> orders = {
        rank_random(n, trial), rank_indegree(g), rank_by_scores(pr),
        rank_simple_adaptive(g, {}, sample, labels, pr),
        rank_double_adaptive(g, {}, sample, labels, pr),
        rank_active_site_first(g, sites, sample, labels, pr)};
    for (std::size_t k = 0; k < orders.size(); ++k) {
      CHECK(orders[k].is_permutation());
      CHECK(orders[k].size() == n);
      if (k >= 3) CHECK(std::equal(sample.begin(), sample.end(), orders[k].order.begin()));
    }
  }
}

TEST_CASE("order files round-trip") {
  TempDir dir("order");
  const LiveRankOrder order{ids({3, 1, 2, 0}), "pagerank d=0.85"};
  write_order(dir.path() / "o.txt", order);
  const auto back = read_order(dir.path() / "o.txt");
  CHECK(back.order == order.order);
  CHECK(back.provenance == order.provenance);
}
