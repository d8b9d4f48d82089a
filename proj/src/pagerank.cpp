#include "liverank/pagerank.hpp"

#include <charconv>
#include <cmath>
#include <cstring>
#include <sstream>

#include "liverank/error.hpp"
#include "liverank/io.hpp"
#include "liverank/parallel.hpp"

namespace liverank {

namespace {

constexpr char kScoreMagic[8] = {'L', 'R', 'S', 'C', 'O', 'R', 'E', '\0'};
constexpr std::uint32_t kScoreVersion = 1;
constexpr std::size_t kBlock = 1 << 14;

// Serial below this size; thread start-up costs more than the sweep.
constexpr std::size_t kParallelThreshold = 1 << 16;

double neumaier_sum(std::span<const double> values) {
  double sum = 0.0;
  double carry = 0.0;
  for (double x : values) {
    const double t = sum + x;
    if (std::fabs(sum) >= std::fabs(x))
      carry += (sum - t) + x;
    else
      carry += (x - t) + sum;
    sum = t;
  }
  return sum + carry;
}

void validate_zap(const DirectedGraph& g, const ScoreVector& zap) {
  if (zap.size() != g.num_nodes())
    throw PreconditionError("zap vector has " + std::to_string(zap.size()) +
                            " entries, graph has " + std::to_string(g.num_nodes()));
  bool positive = false;
  for (double x : zap.values()) {
    if (!std::isfinite(x) || x < 0.0) throw PreconditionError("zap vector entries must be finite and >= 0");
    positive = positive || x > 0.0;
  }
  if (!positive) throw PreconditionError("zap vector must have a positive entry");
  if (std::fabs(zap.l1_norm() - 1.0) > 1e-9) throw PreconditionError("zap vector must have L1 norm 1");
}

// next = d·(y·A) + (1-d)·x. Returns ‖next − y‖₁ reduced in block order.
double step(const DirectedGraph& g, double damping, const ScoreVector& zap,
            const std::vector<double>& y, std::vector<double>& contrib,
            std::vector<double>& next, std::vector<double>& block_delta,
            std::size_t workers) {
  const std::size_t n = g.num_nodes();
  const std::size_t w = n < kParallelThreshold ? 1 : workers;
  parallel_blocks(n, kBlock, w, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t u = begin; u < end; ++u) {
      const auto deg = g.out_degree(static_cast<NodeId>(u));
      contrib[u] = deg == 0 ? 0.0 : y[u] / static_cast<double>(deg);
    }
  });
  parallel_blocks(n, kBlock, w, [&](std::size_t b, std::size_t begin, std::size_t end) {
    double delta = 0.0;
    for (std::size_t v = begin; v < end; ++v) {
      double pulled = 0.0;
      for (NodeId u : g.in_neighbors(static_cast<NodeId>(v))) pulled += contrib[u];
      next[v] = damping * pulled + (1.0 - damping) * zap[v];
      delta += std::fabs(next[v] - y[v]);
    }
    block_delta[b] = delta;
  });
  double total = 0.0;
  for (double d : block_delta) total += d;
  return total;
}

}  // namespace

double ScoreVector::l1_norm() const {
  // Entries are non-negative, so the plain sum is the L1 norm.
  return neumaier_sum(values_);
}

void PageRankConfig::validate() const {
  if (!(damping > 0.0 && damping < 1.0)) throw PreconditionError("damping must lie in (0,1)");
  if (!(tol > 0.0)) throw PreconditionError("tolerance must be positive");
  if (max_iters < 1) throw PreconditionError("max_iters must be at least 1");
}

PageRankResult pagerank(const DirectedGraph& g, const PageRankConfig& cfg,
                        const ScoreVector& zap, std::size_t workers) {
  cfg.validate();
  validate_zap(g, zap);
  const std::size_t n = g.num_nodes();
  std::vector<double> y(zap.values().begin(), zap.values().end());
  std::vector<double> next(n);
  std::vector<double> contrib(n);
  std::vector<double> block_delta((n + kBlock - 1) / kBlock);

  // step() returns ‖next − y‖₁, which is exactly the residual of y. The
  // residual of `next` is then at most d times that, since A is substochastic.
  double residual = 0.0;
  for (int it = 1; it <= cfg.max_iters; ++it) {
    const double delta = step(g, cfg.damping, zap, y, contrib, next, block_delta, workers);
    y.swap(next);
    if (delta * cfg.damping <= cfg.tol || delta == 0.0) {
      ScoreVector out(std::move(y));
      residual = pagerank_residual(g, cfg.damping, zap, out);
      if (residual <= cfg.tol) return {std::move(out), it, residual};
      y = std::move(out.raw());
    }
    residual = delta;
  }
  throw ConvergenceError("PageRank did not converge in " + std::to_string(cfg.max_iters) +
                             " iterations (last residual " + format_general(residual, 6) + ")",
                         residual, cfg.max_iters);
}

double pagerank_residual(const DirectedGraph& g, double damping, const ScoreVector& zap,
                         const ScoreVector& y) {
  const std::size_t n = g.num_nodes();
  if (y.size() != n || zap.size() != n) throw ShapeError("score vector length differs from graph size");
  double residual = 0.0;
  for (std::size_t v = 0; v < n; ++v) {
    double pulled = 0.0;
    for (NodeId u : g.in_neighbors(static_cast<NodeId>(v)))
      pulled += y[u] / static_cast<double>(g.out_degree(u));
    residual += std::fabs(y[v] - (damping * pulled + (1.0 - damping) * zap[v]));
  }
  return residual;
}

ScoreVector uniform_zap(std::size_t n) {
  if (n == 0) throw PreconditionError("uniform zap needs at least one node");
  return ScoreVector(n, 1.0 / static_cast<double>(n));
}

ScoreVector subset_zap(std::size_t n, std::span<const NodeId> nodes) {
  if (nodes.empty()) throw PreconditionError("subset zap needs a nonempty node set");
  std::vector<char> member(n, 0);
  std::size_t count = 0;
  for (NodeId v : nodes) {
    if (v >= n) throw BoundsError("zap node " + std::to_string(v) + " outside graph");
    if (!member[v]) {
      member[v] = 1;
      ++count;
    }
  }
  ScoreVector zap(n, 0.0);
  const double weight = 1.0 / static_cast<double>(count);
  for (std::size_t v = 0; v < n; ++v)
    if (member[v]) zap[v] = weight;
  return zap;
}

void write_scores_text(const std::filesystem::path& path, const ScoreVector& scores) {
  write_file_atomic(path, [&](std::ostream& out) {
    for (std::size_t v = 0; v < scores.size(); ++v)
      out << v << ' ' << format_roundtrip(scores[v]) << '\n';
  });
}

ScoreVector read_scores_text(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  std::istringstream in(text);
  std::string line;
  std::vector<double> values;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::size_t id = 0;
    std::string value_text;
    if (!(fields >> id >> value_text)) throw ParseError("expected \"node_id value\"", line_no);
    if (id != values.size()) throw ParseError("score lines must be in node order", line_no);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(value_text.data(), value_text.data() + value_text.size(), value);
    if (ec != std::errc() || ptr != value_text.data() + value_text.size())
      throw ParseError("bad score value", line_no);
    values.push_back(value);
  }
  return ScoreVector(std::move(values));
}

void write_scores_binary(const std::filesystem::path& path, const ScoreVector& scores) {
  std::string buf(kScoreMagic, sizeof(kScoreMagic));
  const std::uint64_t n = scores.size();
  buf.append(reinterpret_cast<const char*>(&kScoreVersion), sizeof(kScoreVersion));
  buf.append(reinterpret_cast<const char*>(&n), sizeof(n));
  buf.append(reinterpret_cast<const char*>(scores.values().data()), n * sizeof(double));
  write_file_atomic(path, buf);
}

ScoreVector read_scores_binary(const std::filesystem::path& path) {
  const std::string data = read_file(path);
  constexpr std::size_t header = sizeof(kScoreMagic) + sizeof(std::uint32_t) + sizeof(std::uint64_t);
  if (data.size() < header || std::memcmp(data.data(), kScoreMagic, sizeof(kScoreMagic)) != 0)
    throw IoError(path.string() + " is not a score file");
  std::uint32_t version = 0;
  std::uint64_t n = 0;
  std::memcpy(&version, data.data() + sizeof(kScoreMagic), sizeof(version));
  std::memcpy(&n, data.data() + sizeof(kScoreMagic) + sizeof(version), sizeof(n));
  if (version != kScoreVersion) throw IoError("unsupported score file version " + std::to_string(version));
  if (data.size() != header + n * sizeof(double)) throw IoError("score file size mismatch");
  std::vector<double> values(n);
  std::memcpy(values.data(), data.data() + header, n * sizeof(double));
  return ScoreVector(std::move(values));
}

}  // namespace liverank
