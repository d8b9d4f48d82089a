#include "liverank/strategies.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

#include "liverank/error.hpp"
#include "liverank/io.hpp"

namespace liverank {

namespace {

// Unbiased draw in [0, bound) (Lemire's multiply-and-reject).
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
  std::uint64_t x = rng();
  __uint128_t m = static_cast<__uint128_t>(x) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      x = rng();
      m = static_cast<__uint128_t>(x) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

std::vector<NodeId> iota_nodes(std::size_t n) {
  std::vector<NodeId> nodes(n);
  std::iota(nodes.begin(), nodes.end(), NodeId{0});
  return nodes;
}

// Checks ids and labels and returns the membership mask of the sample.
std::vector<char> sample_mask(std::size_t n, const std::vector<NodeId>& sample,
                              const std::vector<bool>* labels) {
  if (labels != nullptr && labels->size() != sample.size())
    throw ShapeError("sample has " + std::to_string(sample.size()) + " nodes but " +
                     std::to_string(labels->size()) + " labels");
  std::vector<char> in_sample(n, 0);
  for (NodeId v : sample) {
    if (v >= n) throw BoundsError("sample node " + std::to_string(v) + " outside graph");
    if (in_sample[v]) throw PreconditionError("sample node " + std::to_string(v) + " repeated");
    in_sample[v] = 1;
  }
  return in_sample;
}

// Sample prefix followed by the untested nodes in key order.
template <class Less>
std::vector<NodeId> sample_then_sorted(std::size_t n, const std::vector<NodeId>& sample,
                                       const std::vector<char>& in_sample, Less less) {
  std::vector<NodeId> rest;
  rest.reserve(n - sample.size());
  for (std::size_t v = 0; v < n; ++v)
    if (!in_sample[v]) rest.push_back(static_cast<NodeId>(v));
  std::sort(rest.begin(), rest.end(), less);
  std::vector<NodeId> order(sample);
  order.insert(order.end(), rest.begin(), rest.end());
  return order;
}

auto by_score_then_tie(const ScoreVector& primary, const ScoreVector* tie) {
  return [&primary, tie](NodeId a, NodeId b) {
    if (primary[a] != primary[b]) return primary[a] > primary[b];
    if (tie != nullptr && (*tie)[a] != (*tie)[b]) return (*tie)[a] > (*tie)[b];
    return a < b;
  };
}

const ScoreVector* optional_scores(const ScoreVector& scores, std::size_t n) {
  if (scores.size() == 0) return nullptr;
  if (scores.size() != n) throw ShapeError("static PageRank length differs from graph size");
  return &scores;
}

void split_by_label(const std::vector<NodeId>& sample, const std::vector<bool>& labels,
                    std::vector<NodeId>& active, std::vector<NodeId>& inactive) {
  for (std::size_t i = 0; i < sample.size(); ++i)
    (labels[i] ? active : inactive).push_back(sample[i]);
}

}  // namespace

bool LiveRankOrder::is_permutation() const {
  std::vector<char> seen(order.size(), 0);
  for (NodeId v : order) {
    if (v >= order.size() || seen[v]) return false;
    seen[v] = 1;
  }
  return true;
}

std::string to_string(SampleSelector selector) {
  switch (selector) {
    case SampleSelector::Random: return "random";
    case SampleSelector::TopPageRank: return "top_pagerank";
    case SampleSelector::TopIndegree: return "top_indegree";
  }
  return "unknown";
}

SampleSelector parse_sample_selector(std::string_view text) {
  if (text == "random") return SampleSelector::Random;
  if (text == "top_pagerank" || text == "pagerank") return SampleSelector::TopPageRank;
  if (text == "top_indegree" || text == "indegree") return SampleSelector::TopIndegree;
  throw ConfigError("unknown sample selector '" + std::string(text) + "'");
}

std::string to_string(DynamicKind kind) {
  return kind == DynamicKind::Bfs ? "bfs" : "active_indegree";
}

LiveRankOrder rank_random(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto order = iota_nodes(n);
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>(bounded(rng, i));
    std::swap(order[i - 1], order[j]);
  }
  return {std::move(order), "random seed=" + std::to_string(seed)};
}

LiveRankOrder rank_indegree(const DirectedGraph& g) {
  auto order = iota_nodes(g.num_nodes());
  std::stable_sort(order.begin(), order.end(),
                   [&](NodeId a, NodeId b) { return g.in_degree(a) > g.in_degree(b); });
  return {std::move(order), "indegree"};
}

LiveRankOrder rank_by_scores(const ScoreVector& scores, const ScoreVector* tie_break) {
  if (tie_break != nullptr && tie_break->size() != scores.size())
    throw ShapeError("tie-break scores differ in length");
  auto order = iota_nodes(scores.size());
  std::sort(order.begin(), order.end(), by_score_then_tie(scores, tie_break));
  return {std::move(order), "scores"};
}

LiveRankOrder rank_pagerank(const DirectedGraph& g, const PageRankConfig& cfg,
                            std::size_t workers) {
  const auto pr = pagerank(g, cfg, uniform_zap(g.num_nodes()), workers);
  auto order = rank_by_scores(pr.scores);
  order.provenance = "pagerank d=" + format_general(cfg.damping, 6);
  return order;
}

std::vector<NodeId> select_sample(const LiveRankOrder& base, std::size_t z) {
  if (z > base.size())
    throw PreconditionError("sample size " + std::to_string(z) + " exceeds node count " +
                            std::to_string(base.size()));
  return {base.order.begin(), base.order.begin() + static_cast<std::ptrdiff_t>(z)};
}

LiveRankOrder sample_base_order(const DirectedGraph& g, const ScoreVector& static_pr,
                                const SampleSpec& spec) {
  switch (spec.selector) {
    case SampleSelector::Random: return rank_random(g.num_nodes(), spec.seed);
    case SampleSelector::TopIndegree: return rank_indegree(g);
    case SampleSelector::TopPageRank: {
      if (static_pr.size() != g.num_nodes()) throw ShapeError("static PageRank length differs from graph size");
      auto order = rank_by_scores(static_pr);
      order.provenance = "pagerank";
      return order;
    }
  }
  throw ConfigError("unknown sample selector");
}

double estimate_active_count(const std::vector<bool>& sample_labels, std::size_t z,
                             std::size_t n) {
  if (z == 0) throw DomainError("active count estimate needs z >= 1");
  if (sample_labels.size() != z) throw ShapeError("label count differs from z");
  const auto active = std::count(sample_labels.begin(), sample_labels.end(), true);
  return static_cast<double>(active) * static_cast<double>(n) / static_cast<double>(z);
}

LiveRankOrder rank_simple_adaptive(const DirectedGraph& g, const PageRankConfig& cfg,
                                   const std::vector<NodeId>& sample,
                                   const std::vector<bool>& sample_labels,
                                   const ScoreVector& static_pr, std::size_t workers) {
  const std::size_t n = g.num_nodes();
  if (sample.empty()) throw PreconditionError("simple adaptive ranking needs a nonempty sample");
  const auto in_sample = sample_mask(n, sample, &sample_labels);
  const ScoreVector* tie = optional_scores(static_pr, n);

  std::vector<NodeId> active, inactive;
  split_by_label(sample, sample_labels, active, inactive);
  const std::string base = "simple_adaptive z=" + std::to_string(sample.size());

  if (active.empty()) {
    ScoreVector fallback = tie != nullptr ? static_pr : pagerank(g, cfg, uniform_zap(n), workers).scores;
    return {sample_then_sorted(n, sample, in_sample, by_score_then_tie(fallback, nullptr)),
            base + " fallback=static_pagerank"};
  }
  const auto seeded = pagerank(g, cfg, subset_zap(n, active), workers).scores;
  return {sample_then_sorted(n, sample, in_sample, by_score_then_tie(seeded, tie)), base};
}

void fill_zero_entries(ScoreVector& scores) {
  double min_positive = 0.0;
  for (double x : scores.values())
    if (x > 0.0 && (min_positive == 0.0 || x < min_positive)) min_positive = x;
  if (min_positive == 0.0) return;
  for (double& x : scores.raw())
    if (x == 0.0) x = min_positive;
}

LiveRankOrder rank_double_adaptive(const DirectedGraph& g, const PageRankConfig& cfg,
                                   const std::vector<NodeId>& sample,
                                   const std::vector<bool>& sample_labels,
                                   const ScoreVector& static_pr, std::size_t workers) {
  const std::size_t n = g.num_nodes();
  if (sample.empty()) throw PreconditionError("double adaptive ranking needs a nonempty sample");
  const auto in_sample = sample_mask(n, sample, &sample_labels);
  std::vector<NodeId> active, inactive;
  split_by_label(sample, sample_labels, active, inactive);
  if (active.empty() || inactive.empty()) {
    auto order = rank_simple_adaptive(g, cfg, sample, sample_labels, static_pr, workers);
    order.provenance = "double_adaptive z=" + std::to_string(sample.size()) +
                       " fallback=simple_adaptive (" + order.provenance + ")";
    return order;
  }

  ScoreVector tie_scores = static_pr.size() == 0 ? pagerank(g, cfg, uniform_zap(n), workers).scores
                                                 : static_pr;
  if (tie_scores.size() != n) throw ShapeError("static PageRank length differs from graph size");

  const auto plus = pagerank(g, cfg, subset_zap(n, active), workers).scores;
  auto minus = pagerank(g, cfg, subset_zap(n, inactive), workers).scores;
  fill_zero_entries(minus);
  ScoreVector ratio(n);
  for (std::size_t v = 0; v < n; ++v) ratio[v] = plus[v] / minus[v];

  return {sample_then_sorted(n, sample, in_sample, by_score_then_tie(ratio, &tie_scores)),
          "double_adaptive z=" + std::to_string(sample.size())};
}

LiveRankOrder rank_active_site_first(const DirectedGraph& g, const SiteMap& sites,
                                     const std::vector<NodeId>& sample,
                                     const std::vector<bool>& sample_labels,
                                     const ScoreVector& static_pr) {
  const std::size_t n = g.num_nodes();
  if (sites.num_nodes() != n)
    throw PreconditionError("site map covers " + std::to_string(sites.num_nodes()) +
                            " nodes, graph has " + std::to_string(n));
  const auto in_sample = sample_mask(n, sample, &sample_labels);
  const ScoreVector* pr = optional_scores(static_pr, n);
  auto pr_of = [pr](NodeId v) { return pr != nullptr ? (*pr)[v] : 0.0; };

  const std::size_t site_count = sites.num_sites();
  std::vector<std::uint64_t> tested(site_count, 0), active(site_count, 0);
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const SiteId s = sites.site_of(sample[i]);
    ++tested[s];
    if (sample_labels[i]) ++active[s];
  }
  std::vector<double> best_pr(site_count, 0.0);
  for (std::size_t v = 0; v < n; ++v) {
    const SiteId s = sites.site_of(static_cast<NodeId>(v));
    best_pr[s] = std::max(best_pr[s], pr_of(static_cast<NodeId>(v)));
  }

  std::vector<SiteId> site_order(site_count);
  std::iota(site_order.begin(), site_order.end(), SiteId{0});
  std::sort(site_order.begin(), site_order.end(), [&](SiteId a, SiteId b) {
    const bool sa = tested[a] > 0, sb = tested[b] > 0;
    if (sa != sb) return sa;
    if (sa) {
      // active[a]/tested[a] vs active[b]/tested[b], compared exactly
      const auto lhs = static_cast<__uint128_t>(active[a]) * tested[b];
      const auto rhs = static_cast<__uint128_t>(active[b]) * tested[a];
      if (lhs != rhs) return lhs > rhs;
    }
    if (best_pr[a] != best_pr[b]) return best_pr[a] > best_pr[b];
    return a < b;
  });
  std::vector<std::uint32_t> site_pos(site_count);
  for (std::size_t i = 0; i < site_count; ++i) site_pos[site_order[i]] = static_cast<std::uint32_t>(i);

  return {sample_then_sorted(n, sample, in_sample,
                             [&](NodeId a, NodeId b) {
                               const auto pa = site_pos[sites.site_of(a)];
                               const auto pb = site_pos[sites.site_of(b)];
                               if (pa != pb) return pa < pb;
                               if (pr_of(a) != pr_of(b)) return pr_of(a) > pr_of(b);
                               return a < b;
                             }),
          "active_site_first z=" + std::to_string(sample.size())};
}

DynamicStrategyState::DynamicStrategyState(DynamicKind kind, const DirectedGraph& g,
                                           const ScoreVector& static_pr,
                                           std::vector<NodeId> sample)
    : kind_(kind), graph_(&g), sample_(std::move(sample)), tested_(g.num_nodes(), 0) {
  const std::size_t n = g.num_nodes();
  if (static_pr.size() != n) throw ShapeError("static PageRank length differs from graph size");
  sample_mask(n, sample_, nullptr);
  pr_order_ = rank_by_scores(static_pr).order;
  pr_rank_.resize(n);
  for (std::size_t i = 0; i < n; ++i) pr_rank_[pr_order_[i]] = static_cast<std::uint32_t>(i);
  if (kind_ == DynamicKind::Bfs) {
    queue_.assign(sample_.begin(), sample_.end());
  } else {
    scores_.assign(n, 0);
  }
}

NodeId DynamicStrategyState::emit(NodeId v) {
  pending_ = v;
  return v;
}

std::optional<NodeId> DynamicStrategyState::next_by_static_rank() {
  while (pr_cursor_ < pr_order_.size() && tested_[pr_order_[pr_cursor_]]) ++pr_cursor_;
  if (pr_cursor_ == pr_order_.size()) return std::nullopt;
  return pr_order_[pr_cursor_];
}

std::optional<NodeId> DynamicStrategyState::next() {
  if (pending_) throw PreconditionError("node " + std::to_string(*pending_) + " was emitted but not reported");
  if (tested_count_ == tested_.size()) return std::nullopt;

  if (kind_ == DynamicKind::Bfs) {
    while (!queue_.empty()) {
      const NodeId v = queue_.front();
      queue_.pop_front();
      if (!tested_[v]) return emit(v);
    }
    return emit(*next_by_static_rank());
  }

  if (sample_cursor_ < sample_.size()) return emit(sample_[sample_cursor_++]);
  while (!heap_.empty()) {
    const HeapEntry top = heap_.top();
    if (tested_[top.node] || top.score != scores_[top.node]) {
      heap_.pop();
      continue;
    }
    heap_.pop();
    return emit(top.node);
  }
  return emit(*next_by_static_rank());
}

void DynamicStrategyState::report(NodeId node, bool active) {
  if (node >= tested_.size()) throw BoundsError("reported node outside graph");
  if (!pending_ || *pending_ != node) {
    if (tested_[node]) throw PreconditionError("node " + std::to_string(node) + " reported twice");
    throw PreconditionError("node " + std::to_string(node) + " reported before being emitted");
  }
  pending_.reset();
  tested_[node] = 1;
  ++tested_count_;
  if (!active) return;

  for (NodeId w : graph_->out_neighbors(node)) {
    if (tested_[w]) continue;
    if (kind_ == DynamicKind::Bfs) {
      queue_.push_back(w);
    } else {
      ++scores_[w];
      // Heap entries are only needed once the sample has been exhausted, but
      // pushing now keeps one code path; stale entries are dropped lazily.
      heap_.push({scores_[w], pr_rank_[w], w});
    }
  }
}

void write_order(const std::filesystem::path& path, const LiveRankOrder& order) {
  write_file_atomic(path, [&](std::ostream& out) {
    out << "# provenance: " << order.provenance << '\n';
    for (NodeId v : order.order) out << v << '\n';
  });
}

LiveRankOrder read_order(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  std::istringstream in(text);
  std::string line;
  LiveRankOrder order;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == '#') {
      constexpr std::string_view key = "# provenance: ";
      if (line.rfind(key, 0) == 0) order.provenance = line.substr(key.size());
      continue;
    }
    std::istringstream field(line);
    std::uint64_t v = 0;
    if (!(field >> v)) throw ParseError("expected a node id", line_no);
    order.order.push_back(static_cast<NodeId>(v));
  }
  return order;
}

}  // namespace liverank
