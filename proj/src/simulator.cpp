#include "liverank/simulator.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "liverank/error.hpp"
#include "liverank/io.hpp"

namespace liverank {

ActivityOracle::ActivityOracle(std::vector<bool> labels) : labels_(std::move(labels)) {
  n_active_ = static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), true));
}

bool ActivityOracle::query(NodeId v) {
  if (v >= labels_.size()) throw BoundsError("query for node " + std::to_string(v) + " outside graph");
  ++fetches_;
  return labels_[v];
}

std::optional<NodeId> StaticOrderPolicy::next() {
  if (cursor_ == order_.order.size()) return std::nullopt;
  return order_.order[cursor_++];
}

SampleThenRankPolicy::SampleThenRankPolicy(std::vector<NodeId> sample, Reranker rerank,
                                           std::string name)
    : sample_(std::move(sample)), rerank_(std::move(rerank)), name_(std::move(name)) {}

std::optional<NodeId> SampleThenRankPolicy::next() {
  if (!ranked_) {
    if (cursor_ < sample_.size()) return sample_[cursor_++];
    if (labels_.size() != sample_.size())
      throw PreconditionError("sample labels missing before re-ranking");
    ranked_ = rerank_(sample_, labels_);
    // The re-ranked order starts with the sample, which is already tested.
    if (ranked_->order.size() < sample_.size() ||
        !std::equal(sample_.begin(), sample_.end(), ranked_->order.begin()))
      throw PreconditionError("re-ranked order does not start with the sample");
  }
  if (cursor_ == ranked_->order.size()) return std::nullopt;
  return ranked_->order[cursor_++];
}

void SampleThenRankPolicy::report(NodeId, bool active) {
  if (!ranked_) labels_.push_back(active);
}

std::string SampleThenRankPolicy::provenance() const {
  return ranked_ ? ranked_->provenance : name_;
}

CrawlTrace run_policy(CrawlPolicy& policy, ActivityOracle& oracle) {
  CrawlTrace trace;
  const std::size_t n = oracle.num_nodes();
  trace.sequence.reserve(n);
  trace.labels.reserve(n);
  std::vector<char> seen(n, 0);
  while (auto v = policy.next()) {
    if (*v >= n) throw BoundsError("policy emitted node outside graph");
    if (seen[*v]) throw PreconditionError("policy emitted node " + std::to_string(*v) + " twice");
    seen[*v] = 1;
    const bool active = oracle.query(*v);
    trace.sequence.push_back(*v);
    trace.labels.push_back(active);
    policy.report(*v, active);
  }
  return trace;
}

CrawlTrace run_static(const LiveRankOrder& order, ActivityOracle& oracle) {
  StaticOrderPolicy policy(order);
  return run_policy(policy, oracle);
}

CrawlTrace run_dynamic(DynamicStrategyState& state, ActivityOracle& oracle) {
  CrawlTrace trace;
  trace.sequence.reserve(oracle.num_nodes());
  trace.labels.reserve(oracle.num_nodes());
  while (auto v = state.next()) {
    const bool active = oracle.query(*v);
    trace.sequence.push_back(*v);
    trace.labels.push_back(active);
    state.report(*v, active);
  }
  return trace;
}

namespace {

// Smallest k with k / n_active >= alpha, using the same division as the
// definition so that decimal α values land on the intended count.
std::size_t active_target(std::size_t n_active, double alpha) {
  const double na = static_cast<double>(n_active);
  auto k = static_cast<std::size_t>(std::ceil(alpha * na));
  k = std::clamp<std::size_t>(k, 1, n_active);
  while (k > 1 && static_cast<double>(k - 1) / na >= alpha) --k;
  while (k < n_active && static_cast<double>(k) / na < alpha) ++k;
  return k;
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw DomainError("alpha must lie in (0,1], got " + format_general(alpha, 6));
}

}  // namespace

std::size_t prefix_length_at(const CrawlTrace& trace, std::size_t n_active, double alpha) {
  check_alpha(alpha);
  if (n_active == 0) throw DomainError("cost is undefined without active nodes");
  const std::size_t target = active_target(n_active, alpha);
  std::size_t found = 0;
  for (std::size_t i = 0; i < trace.labels.size(); ++i) {
    if (trace.labels[i] && ++found == target) return i + 1;
  }
  throw DomainError("trace of length " + std::to_string(trace.size()) + " reaches only " +
                    std::to_string(found) + " of the " + std::to_string(target) +
                    " active nodes needed");
}

double cost_at(const CrawlTrace& trace, std::size_t n_active, double alpha) {
  const auto i = prefix_length_at(trace, n_active, alpha);
  return static_cast<double>(i) / (alpha * static_cast<double>(n_active));
}

double cost_at(const CrawlTrace& trace, const ActivityOracle& oracle, double alpha) {
  return cost_at(trace, oracle.num_active(), alpha);
}

std::vector<double> default_alpha_grid() {
  std::vector<double> grid;
  for (int k = 1; k <= 50; ++k) grid.push_back(k / 50.0);
  return grid;
}

void validate_alpha_grid(const std::vector<double>& alphas) {
  if (alphas.empty()) throw DomainError("alpha grid is empty");
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    check_alpha(alphas[i]);
    if (i > 0 && !(alphas[i] > alphas[i - 1])) throw DomainError("alpha grid must strictly increase");
  }
}

std::vector<double> parse_alpha_grid(std::string_view text) {
  auto parse_double = [](std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
      throw ConfigError("bad alpha value '" + std::string(s) + "'");
    return value;
  };
  std::vector<double> grid;
  if (text.find(':') != std::string_view::npos) {
    const auto c1 = text.find(':');
    const auto c2 = text.find(':', c1 + 1);
    if (c2 == std::string_view::npos) throw ConfigError("alpha range must be start:stop:step");
    const double start = parse_double(text.substr(0, c1));
    const double stop = parse_double(text.substr(c1 + 1, c2 - c1 - 1));
    const double step = parse_double(text.substr(c2 + 1));
    if (!(step > 0.0)) throw ConfigError("alpha step must be positive");
    const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9));
    for (long k = 0; k <= count; ++k) {
      // Round to 12 decimals so 0.02·k style grids print and compare cleanly.
      const double a = std::round((start + static_cast<double>(k) * step) * 1e12) / 1e12;
      grid.push_back(a);
    }
  } else {
    std::size_t start = 0;
    while (start <= text.size()) {
      auto end = text.find(',', start);
      if (end == std::string_view::npos) end = text.size();
      grid.push_back(parse_double(text.substr(start, end - start)));
      start = end + 1;
    }
  }
  try {
    validate_alpha_grid(grid);
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  return grid;
}

CostCurve cost_curve(const CrawlTrace& trace, const ActivityOracle& oracle,
                     const std::vector<double>& alphas, std::string strategy) {
  validate_alpha_grid(alphas);
  const std::size_t n_active = oracle.num_active();
  if (n_active == 0) throw DomainError("cost is undefined without active nodes");
  // positions[k-1] = 1-based position of the k-th active node in the trace
  std::vector<std::size_t> positions;
  positions.reserve(n_active);
  for (std::size_t i = 0; i < trace.labels.size(); ++i)
    if (trace.labels[i]) positions.push_back(i + 1);

  CostCurve curve{std::move(strategy), oracle.num_nodes(), n_active, alphas, {}};
  curve.costs.reserve(alphas.size());
  for (double alpha : alphas) {
    const std::size_t target = active_target(n_active, alpha);
    if (target > positions.size())
      throw DomainError("trace reaches only " + std::to_string(positions.size()) + " of the " +
                        std::to_string(target) + " active nodes needed");
    curve.costs.push_back(static_cast<double>(positions[target - 1]) /
                          (alpha * static_cast<double>(n_active)));
  }
  return curve;
}

std::string cost_curve_csv(const std::vector<CostCurve>& curves, bool header) {
  std::string out;
  if (header) out += "strategy,n,n_a,alpha,cost\n";
  for (const auto& c : curves) {
    for (std::size_t i = 0; i < c.alphas.size(); ++i) {
      out += c.strategy;
      out += ',';
      out += std::to_string(c.n);
      out += ',';
      out += std::to_string(c.n_active);
      out += ',';
      out += format_general(c.alphas[i], 6);
      out += ',';
      out += format_general(c.costs[i], 6);
      out += '\n';
    }
  }
  return out;
}

void write_cost_curves(const std::filesystem::path& path, const std::vector<CostCurve>& curves) {
  write_file_atomic(path, cost_curve_csv(curves));
}

void write_trace(const std::filesystem::path& path, const CrawlTrace& trace) {
  write_file_atomic(path, [&](std::ostream& out) {
    for (std::size_t i = 0; i < trace.size(); ++i)
      out << trace.sequence[i] << ',' << (trace.labels[i] ? 1 : 0) << '\n';
  });
}

CrawlTrace read_trace(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  std::istringstream in(text);
  std::string line;
  CrawlTrace trace;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ParseError("expected node_id,label", line_no);
    std::uint64_t v = 0;
    int label = 0;
    auto r1 = std::from_chars(line.data(), line.data() + comma, v);
    auto r2 = std::from_chars(line.data() + comma + 1, line.data() + line.size(), label);
    if (r1.ec != std::errc() || r2.ec != std::errc() || (label != 0 && label != 1))
      throw ParseError("expected node_id,label", line_no);
    trace.sequence.push_back(static_cast<NodeId>(v));
    trace.labels.push_back(label == 1);
  }
  return trace;
}

}  // namespace liverank
