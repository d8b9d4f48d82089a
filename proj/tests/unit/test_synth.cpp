#include "doctest.h"
#include "liverank/error.hpp"
#include "liverank/synth.hpp"
#include "oracles.hpp"

using namespace liverank;
using liverank::testing::TempDir;

namespace {

SyntheticConfig logistic_config(std::size_t n, double slope, std::uint64_t seed) {
  SyntheticConfig cfg;
  cfg.n = n;
  cfg.activity = RankLogisticModel{.base_rate = 0.2, .slope = slope};
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("label files in either form") {
  CHECK(parse_labels("1\n0\n1", 3).num_active() == 2);
  CHECK(parse_labels("0\n2", 3).ground_truth() == parse_labels("1\n0\n1", 3).ground_truth());
  CHECK(parse_labels("# format: ids\n1\n", 2).ground_truth() == std::vector<bool>{false, true});
  CHECK(parse_labels("# format: flags\n1\n0\n", 2).ground_truth() == std::vector<bool>{true, false});
  CHECK_THROWS_AS(parse_labels("# format: flags\n1\n0\n", 3), ShapeError);
  CHECK_THROWS_AS(parse_labels("0\n5\n", 3), BoundsError);
  CHECK_THROWS_AS(parse_labels("x\n", 3), ParseError);
}

TEST_CASE("a 17.53% active fixture loads with the exact count") {
  TempDir dir("labels");
  std::vector<bool> labels(10000, false);
  for (std::size_t v = 0; v < 1753; ++v) labels[v * 5] = true;
  write_labels(dir.path() / "l.txt", labels);
  const auto oracle = load_labels(dir.path() / "l.txt", 10000);
  CHECK(oracle.num_active() == 1753);
  CHECK(static_cast<double>(oracle.num_active()) / 10000.0 == doctest::Approx(0.1753));
  CHECK(oracle.ground_truth() == labels);
}

TEST_CASE("generation is seed-deterministic") {
  for (const ActivityModel& model : {ActivityModel{RankLogisticModel{}}, ActivityModel{SiteBlockModel{.site_count = 50}}}) {
    SyntheticConfig cfg;
    cfg.n = 3000;
    cfg.activity = model;
    cfg.seed = 9;
    const auto a = generate_synthetic(cfg);
    const auto b = generate_synthetic(cfg, 4);
    CHECK(a.graph == b.graph);
    CHECK(a.oracle.ground_truth() == b.oracle.ground_truth());
    CHECK(a.sites.has_value() == b.sites.has_value());
    if (a.sites) CHECK(a.sites->assignment() == b.sites->assignment());
    cfg.seed = 10;
    CHECK_FALSE(generate_synthetic(cfg).graph == a.graph);
  }
}

TEST_CASE("generated graphs satisfy the graph invariants") {
  SyntheticConfig cfg;
  cfg.n = 2000;
  const auto d = generate_synthetic(cfg);
  CHECK(d.graph.num_nodes() == 2000);
  std::size_t out_sum = 0;
  for (NodeId u = 0; u < 2000; ++u) {
    const auto row = d.graph.out_neighbors(u);
    for (std::size_t i = 1; i < row.size(); ++i) CHECK(row[i - 1] < row[i]);
    out_sum += row.size();
  }
  CHECK(out_sum == d.graph.num_edges());
  CHECK(d.graph.transpose().transpose() == d.graph);
}

TEST_CASE("slope zero gives i.i.d. labels at the base rate") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto d = generate_synthetic(logistic_config(10000, 0.0, seed));
    CHECK(std::fabs(static_cast<double>(d.oracle.num_active()) / 10000.0 - 0.2) <= 0.02);
  }
}

TEST_CASE("positive slope keeps the base rate on average") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto d = generate_synthetic(logistic_config(10000, 6.0, seed));
    CHECK(std::fabs(static_cast<double>(d.oracle.num_active()) / 10000.0 - 0.2) <= 0.02);
  }
  const double offset = logistic_offset(1000, 6.0, 0.3);
  double mean = 0.0;
  for (std::size_t r = 0; r < 1000; ++r)
    mean += 1.0 / (1.0 + std::exp(-(6.0 * (499.5 - static_cast<double>(r)) / 1000.0 + offset)));
  CHECK(mean / 1000.0 == doctest::Approx(0.3).epsilon(1e-9));
}

TEST_CASE("sites that all die leave no active node") {
  SyntheticConfig cfg;
  cfg.n = 2000;
  cfg.activity = SiteBlockModel{.site_count = 40, .site_death_prob = 1.0, .within_site_noise = 0.0};
  const auto d = generate_synthetic(cfg);
  CHECK(d.oracle.num_active() == 0);
  REQUIRE(d.sites.has_value());
  CHECK(d.sites->num_sites() == 40);
}

TEST_CASE("site block labels are constant inside a site without noise") {
  SyntheticConfig cfg;
  cfg.n = 2000;
  cfg.activity = SiteBlockModel{.site_count = 40, .site_death_prob = 0.5, .within_site_noise = 0.0};
  const auto d = generate_synthetic(cfg);
  const auto& labels = d.oracle.ground_truth();
  for (SiteId s = 0; s < d.sites->num_sites(); ++s) {
    const auto members = d.sites->members(s);
    for (NodeId v : members) CHECK(labels[v] == labels[members.front()]);
  }
}

TEST_CASE("actives have the higher mean PageRank under a positive slope") {
  int wins = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto d = generate_synthetic(logistic_config(3000, 6.0, seed));
    const auto pr = pagerank(d.graph, {}, uniform_zap(3000)).scores;
    double sum[2] = {0, 0};
    std::size_t count[2] = {0, 0};
    for (NodeId v = 0; v < 3000; ++v) {
      const int k = d.oracle.ground_truth()[v] ? 1 : 0;
      sum[k] += pr[v];
      ++count[k];
    }
    if (sum[1] / static_cast<double>(count[1]) > sum[0] / static_cast<double>(count[0])) ++wins;
  }
  CHECK(wins == 20);
}

TEST_CASE("synthetic URLs group back into the generated sites") {
  SyntheticConfig cfg;
  cfg.n = 500;
  cfg.activity = SiteBlockModel{.site_count = 12};
  const auto d = generate_synthetic(cfg);
  const auto urls = synthetic_urls(*d.sites);
  CHECK(urls[d.sites->members(3).front()] == "http://site3.test/page0");
  const auto regrouped = site_map_from_urls(urls);
  CHECK(regrouped.num_sites() == 12);
  for (NodeId v = 0; v < 500; ++v)
    for (NodeId w : {NodeId{0}, NodeId{250}})
      CHECK((regrouped.site_of(v) == regrouped.site_of(w)) == (d.sites->site_of(v) == d.sites->site_of(w)));
}

TEST_CASE("invalid synthetic configs are refused") {
  SyntheticConfig cfg;
  cfg.n = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.n = 10;
  cfg.activity = RankLogisticModel{.base_rate = 1.0};
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.activity = SiteBlockModel{.site_count = 11};
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.activity = SiteBlockModel{.site_count = 5, .site_death_prob = 1.2};
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}
