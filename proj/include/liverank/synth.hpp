#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "liverank/graph.hpp"
#include "liverank/pagerank.hpp"
#include "liverank/simulator.hpp"
#include "liverank/site_map.hpp"

namespace liverank {

/// Active with probability logistic(slope·(median_rank − r)/n + offset), r the
/// static PageRank rank, offset solved so the mean probability is base_rate.
struct RankLogisticModel {
  double base_rate = 0.2;
  double slope = 6.0;
};

/**
 * Sites die wholesale; pages of surviving sites are independently flipped to
 * inactive with within_site_noise. A site's death log-odds are shifted by
 * importance_bias·(q − ½), q being the site's quantile by total static
 * PageRank (0 for the most important site), so important sites survive more.
 */
struct SiteBlockModel {
  std::size_t site_count = 1000;
  double site_death_prob = 0.7;
  double within_site_noise = 0.3;
  double importance_bias = 3.0;
  /// Probability that a link stays inside its source's site.
  double locality = 0.85;
};

using ActivityModel = std::variant<RankLogisticModel, SiteBlockModel>;

struct SyntheticConfig {
  std::size_t n = 10000;
  /// Mean number of links added per node.
  double mean_out_degree = 8.0;
  /// Share of link targets picked proportionally to current in-degree.
  double preferential = 0.8;
  /// Probability that a new link is answered by a link back.
  double reciprocity = 0.1;
  ActivityModel activity = RankLogisticModel{};
  std::uint64_t seed = 1;

  /// Throws ConfigError when a parameter is out of range.
  void validate() const;
};

struct SyntheticDataset {
  DirectedGraph graph;
  ActivityOracle oracle;
  std::optional<SiteMap> sites;
};

/// Seed-deterministic graph and labels (and sites for the site-block model).
SyntheticDataset generate_synthetic(const SyntheticConfig& cfg, std::size_t workers = 1);

/// Logistic offset whose mean probability over n ranks equals base_rate.
double logistic_offset(std::size_t n, double slope, double base_rate);

/**
 * Labels in either form, chosen by the first line: "# format: flags" or
 * "# format: ids" headers force a form; without a header the file is read as
 * one 0/1 flag per node when it has exactly n lines of 0/1 and as a list of
 * active ids otherwise.
 */
ActivityOracle load_labels(const std::filesystem::path& path, std::size_t n);
ActivityOracle parse_labels(std::string_view text, std::size_t n);

/// Flag form with a "# format: flags" header.
void write_labels(const std::filesystem::path& path, const std::vector<bool>& labels);

/// URL of node v: http://site<k>.test/page<j>, j its index inside site k.
std::vector<std::string> synthetic_urls(const SiteMap& sites);
void write_urls(const std::filesystem::path& path, const std::vector<std::string>& urls);

}  // namespace liverank
