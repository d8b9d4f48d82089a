#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "liverank/graph.hpp"
#include "liverank/strategies.hpp"

namespace liverank {

/// Ground-truth liveness. Every query is counted as one fetch.
class ActivityOracle {
 public:
  ActivityOracle() = default;
  explicit ActivityOracle(std::vector<bool> labels);

  std::size_t num_nodes() const noexcept { return labels_.size(); }
  std::size_t num_active() const noexcept { return n_active_; }
  std::size_t fetch_count() const noexcept { return fetches_; }

  /// Tests one node; counts a fetch.
  bool query(NodeId v);

  /// Full label vector for evaluation code. Never handed to a strategy.
  const std::vector<bool>& ground_truth() const noexcept { return labels_; }

  void reset_fetch_count() noexcept { fetches_ = 0; }

 private:
  std::vector<bool> labels_;
  std::size_t n_active_ = 0;
  std::size_t fetches_ = 0;
};

/// Tested nodes in order together with the answers the oracle gave.
struct CrawlTrace {
  std::vector<NodeId> sequence;
  std::vector<bool> labels;

  std::size_t size() const noexcept { return sequence.size(); }
};

/**
 * A crawl ordering seen from the simulator: it proposes the next node and is
 * told the label afterwards. Labels reach a policy only through report().
 */
class CrawlPolicy {
 public:
  virtual ~CrawlPolicy() = default;
  virtual std::optional<NodeId> next() = 0;
  virtual void report(NodeId node, bool active) = 0;
  virtual std::string provenance() const = 0;
};

/// Replays a fixed order.
class StaticOrderPolicy final : public CrawlPolicy {
 public:
  explicit StaticOrderPolicy(LiveRankOrder order) : order_(std::move(order)) {}
  std::optional<NodeId> next() override;
  void report(NodeId, bool) override {}
  std::string provenance() const override { return order_.provenance; }

 private:
  LiveRankOrder order_;
  std::size_t cursor_ = 0;
};

/**
 * Tests the sample first, then asks `rerank` for a full order given the
 * sample labels and replays the part after the sample.
 */
class SampleThenRankPolicy final : public CrawlPolicy {
 public:
  using Reranker = std::function<LiveRankOrder(const std::vector<NodeId>& sample,
                                               const std::vector<bool>& labels)>;

  SampleThenRankPolicy(std::vector<NodeId> sample, Reranker rerank, std::string name);
  std::optional<NodeId> next() override;
  void report(NodeId node, bool active) override;
  std::string provenance() const override;

 private:
  std::vector<NodeId> sample_;
  std::vector<bool> labels_;
  Reranker rerank_;
  std::string name_;
  std::optional<LiveRankOrder> ranked_;
  std::size_t cursor_ = 0;
};

/// Drives a DynamicStrategyState.
class DynamicPolicy final : public CrawlPolicy {
 public:
  DynamicPolicy(std::unique_ptr<DynamicStrategyState> state, std::string name)
      : state_(std::move(state)), name_(std::move(name)) {}
  std::optional<NodeId> next() override { return state_->next(); }
  void report(NodeId node, bool active) override { state_->report(node, active); }
  std::string provenance() const override { return name_; }

 private:
  std::unique_ptr<DynamicStrategyState> state_;
  std::string name_;
};

/// Runs a policy to exhaustion. Throws PreconditionError on a repeated node.
CrawlTrace run_policy(CrawlPolicy& policy, ActivityOracle& oracle);

/// Tests nodes exactly in `order`.
CrawlTrace run_static(const LiveRankOrder& order, ActivityOracle& oracle);

/// Loop of next / query / report until the state is exhausted.
CrawlTrace run_dynamic(DynamicStrategyState& state, ActivityOracle& oracle);

/// i(L, α): the shortest prefix whose active fraction reaches α.
std::size_t prefix_length_at(const CrawlTrace& trace, std::size_t n_active, double alpha);

/// cost(L, α) = i(L, α) / (α·n_a).
double cost_at(const CrawlTrace& trace, const ActivityOracle& oracle, double alpha);
double cost_at(const CrawlTrace& trace, std::size_t n_active, double alpha);

struct CostCurve {
  std::string strategy;
  std::size_t n = 0;
  std::size_t n_active = 0;
  std::vector<double> alphas;
  std::vector<double> costs;
};

/// k/50 for k = 1..50.
std::vector<double> default_alpha_grid();

/// Parses "start:stop:step" or a comma separated list.
std::vector<double> parse_alpha_grid(std::string_view text);

/// Throws DomainError unless every α is in (0,1] and the grid strictly increases.
void validate_alpha_grid(const std::vector<double>& alphas);

CostCurve cost_curve(const CrawlTrace& trace, const ActivityOracle& oracle,
                     const std::vector<double>& alphas, std::string strategy);

/// Rows of "strategy,n,n_a,alpha,cost"; floats with 6 significant digits.
std::string cost_curve_csv(const std::vector<CostCurve>& curves, bool header = true);
void write_cost_curves(const std::filesystem::path& path, const std::vector<CostCurve>& curves);

/// Rows of "node_id,label".
void write_trace(const std::filesystem::path& path, const CrawlTrace& trace);
CrawlTrace read_trace(const std::filesystem::path& path);

}  // namespace liverank
