#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "liverank/graph.hpp"
#include "liverank/pagerank.hpp"
#include "liverank/simulator.hpp"
#include "liverank/site_map.hpp"
#include "liverank/strategies.hpp"
#include "liverank/synth.hpp"

namespace liverank {

enum class StrategyKind {
  Random,
  Indegree,
  PageRank,
  SimpleAdaptive,
  DoubleAdaptive,
  ActiveSiteFirst,
  Bfs,
  ActiveIndegree,
  /// Actives first. Reads the ground truth; reference curve only.
  Ideal,
};

std::string to_string(StrategyKind kind);

/// Accepts the long names and the short ones (R, I, P, Pa, Pa+-, ASF, BFS, AI).
StrategyKind parse_strategy_kind(std::string_view text);

bool uses_sample(StrategyKind kind);

struct StrategySpec {
  StrategyKind kind = StrategyKind::PageRank;
  std::size_t z = 0;
  SampleSelector selector = SampleSelector::TopPageRank;
  std::vector<std::uint64_t> seeds{0};

  /// Label used in CSV rows, e.g. "double_adaptive z=100 selector=random seed=3".
  std::string label(std::uint64_t seed) const;
  /// File-system safe variant of label().
  std::string file_stem(std::uint64_t seed) const;
};

/// Everything a strategy may look at besides the labels it is told.
struct StrategyContext {
  const DirectedGraph* graph = nullptr;
  const ScoreVector* static_pr = nullptr;
  const SiteMap* sites = nullptr;
  PageRankConfig pagerank;
  /// Only read by StrategyKind::Ideal.
  const ActivityOracle* ground_truth = nullptr;
  std::size_t workers = 1;
};

std::unique_ptr<CrawlPolicy> make_policy(const StrategySpec& spec, std::uint64_t seed,
                                         const StrategyContext& ctx);

/// Actives first, each group by ascending id.
LiveRankOrder ideal_order(const ActivityOracle& oracle);

struct Dataset {
  DirectedGraph graph;
  ActivityOracle oracle;
  std::optional<SiteMap> sites;
};

struct ExperimentConfig {
  int version = 1;
  std::optional<std::filesystem::path> graph;
  std::optional<std::filesystem::path> labels;
  std::optional<std::filesystem::path> urls;
  std::optional<SyntheticConfig> synthetic;
  bool collapse_duplicates = true;
  PageRankConfig pagerank;
  std::vector<StrategySpec> strategies;
  std::vector<double> alpha_grid = default_alpha_grid();
  std::filesystem::path out_dir = "liverank-out";

  /// Throws ConfigError on a missing source, no strategy, or a bad grid.
  void validate() const;
};

/// Parses the versioned JSON experiment format. Relative paths are resolved
/// against `base_dir`.
ExperimentConfig parse_experiment_config(std::string_view json_text,
                                         const std::filesystem::path& base_dir = {});
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

SyntheticConfig parse_synthetic_config(std::string_view json_text);

/// Loads files or generates the synthetic dataset the config names.
Dataset load_dataset(const ExperimentConfig& cfg, std::size_t workers = 1);

struct RunOutcome {
  std::string label;
  std::filesystem::path csv_path;
  bool ok = false;
  std::string error;
  CostCurve curve;
};

struct ExperimentReport {
  std::vector<RunOutcome> runs;
  std::filesystem::path merged_csv;

  std::size_t failures() const;
};

/**
 * One cost curve CSV per (strategy, seed) plus merged.csv with every row in
 * config order. A failing run is recorded and the others continue. Output is
 * byte-identical for any worker count.
 */
ExperimentReport run_experiment(const ExperimentConfig& cfg, std::size_t workers);

/// Same, on an already loaded dataset.
ExperimentReport run_experiment(const ExperimentConfig& cfg, const Dataset& data,
                                std::size_t workers);

}  // namespace liverank
