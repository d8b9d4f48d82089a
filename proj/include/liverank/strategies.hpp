#pragma once

#include <cstdint>
#include <deque>
#include <filesystem>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "liverank/graph.hpp"
#include "liverank/pagerank.hpp"
#include "liverank/site_map.hpp"

namespace liverank {

/// A crawl ordering of every node, with a note on how it was produced.
struct LiveRankOrder {
  std::vector<NodeId> order;
  std::string provenance;

  std::size_t size() const noexcept { return order.size(); }

  /// True when `order` is a bijection on 0..size()-1.
  bool is_permutation() const;
};

enum class SampleSelector { Random, TopPageRank, TopIndegree };

/// How the training set Z is drawn: the first z nodes of the selector's order.
struct SampleSpec {
  std::size_t z = 100000;
  SampleSelector selector = SampleSelector::TopPageRank;
  std::uint64_t seed = 0;
};

std::string to_string(SampleSelector selector);
SampleSelector parse_sample_selector(std::string_view text);

/// Uniform permutation drawn from a seeded mt19937_64; reproducible per seed.
LiveRankOrder rank_random(std::size_t n, std::uint64_t seed);

/// In-degree descending, ties by ascending id.
LiveRankOrder rank_indegree(const DirectedGraph& g);

/// Uniform-zap PageRank descending, ties by ascending id.
LiveRankOrder rank_pagerank(const DirectedGraph& g, const PageRankConfig& cfg,
                            std::size_t workers = 1);

/// Scores descending, then tie_break descending (when given), then id.
LiveRankOrder rank_by_scores(const ScoreVector& scores, const ScoreVector* tie_break = nullptr);

/// First z entries of `base`. Throws PreconditionError when z > n.
std::vector<NodeId> select_sample(const LiveRankOrder& base, std::size_t z);

/// The base order a selector draws its sample from.
LiveRankOrder sample_base_order(const DirectedGraph& g, const ScoreVector& static_pr,
                                const SampleSpec& spec);

/// |a(Z)|·n/z. Only unbiased for a uniformly drawn sample.
double estimate_active_count(const std::vector<bool>& sample_labels, std::size_t z,
                             std::size_t n);

/**
 * Simple adaptive order: the sample in tested order, then every untested node
 * by PageRank seeded uniformly on the sampled active nodes. Ties fall to
 * `static_pr` (when non-empty) and then to the node id. With no active node
 * in the sample the suffix is the static PageRank order.
 */
LiveRankOrder rank_simple_adaptive(const DirectedGraph& g, const PageRankConfig& cfg,
                                   const std::vector<NodeId>& sample,
                                   const std::vector<bool>& sample_labels,
                                   const ScoreVector& static_pr, std::size_t workers = 1);

/// Replaces zero entries by the smallest positive entry; no-op when none is positive.
void fill_zero_entries(ScoreVector& scores);

/**
 * Double adaptive order: untested nodes by P⁺/P⁻, where P⁺ is seeded on the
 * sampled active nodes and P⁻ on the sampled inactive ones, after the zero
 * entries of P⁻ are raised to its smallest positive entry. Falls back to the
 * simple adaptive order when the sample lacks either label.
 */
LiveRankOrder rank_double_adaptive(const DirectedGraph& g, const PageRankConfig& cfg,
                                   const std::vector<NodeId>& sample,
                                   const std::vector<bool>& sample_labels,
                                   const ScoreVector& static_pr, std::size_t workers = 1);

/**
 * Active-site-first order. Sampled sites are crawled by decreasing fraction
 * of active sampled pages, then the unsampled sites; sites of equal rank go
 * by their best static PageRank, pages inside a site by static PageRank.
 */
LiveRankOrder rank_active_site_first(const DirectedGraph& g, const SiteMap& sites,
                                     const std::vector<NodeId>& sample,
                                     const std::vector<bool>& sample_labels,
                                     const ScoreVector& static_pr);

enum class DynamicKind { Bfs, ActiveIndegree };

std::string to_string(DynamicKind kind);

/**
 * State of a dynamic LiveRank (BFS or active in-degree). The first emissions
 * are the sample in order; afterwards the next node depends on the labels
 * reported so far. Alternate next() and report(); the graph and the static
 * PageRank must outlive the state.
 */
class DynamicStrategyState {
 public:
  DynamicStrategyState(DynamicKind kind, const DirectedGraph& g, const ScoreVector& static_pr,
                       std::vector<NodeId> sample);

  /// Next node to test, nullopt once every node has been tested.
  std::optional<NodeId> next();

  /// Records the label of the node returned by the last next().
  void report(NodeId node, bool active);

  DynamicKind kind() const noexcept { return kind_; }
  bool is_tested(NodeId v) const { return tested_[v] != 0; }
  std::size_t tested_count() const noexcept { return tested_count_; }

  /// Number of reported active in-neighbors counted for v (AI only).
  std::uint32_t activity_score(NodeId v) const { return scores_.empty() ? 0 : scores_[v]; }

 private:
  struct HeapEntry {
    std::uint32_t score;
    std::uint32_t pr_rank;
    NodeId node;
    bool operator<(const HeapEntry& other) const {
      // max-heap on score, then on better (smaller) static rank
      if (score != other.score) return score < other.score;
      return pr_rank > other.pr_rank;
    }
  };

  std::optional<NodeId> next_by_static_rank();
  NodeId emit(NodeId v);

  DynamicKind kind_;
  const DirectedGraph* graph_;
  std::vector<NodeId> pr_order_;
  std::vector<std::uint32_t> pr_rank_;
  std::size_t pr_cursor_ = 0;
  std::vector<NodeId> sample_;
  std::size_t sample_cursor_ = 0;
  std::vector<char> tested_;
  std::size_t tested_count_ = 0;
  std::optional<NodeId> pending_;

  std::deque<NodeId> queue_;
  std::vector<std::uint32_t> scores_;
  std::priority_queue<HeapEntry> heap_;
};

/// "# provenance: ..." followed by one node id per line.
void write_order(const std::filesystem::path& path, const LiveRankOrder& order);
LiveRankOrder read_order(const std::filesystem::path& path);

}  // namespace liverank
