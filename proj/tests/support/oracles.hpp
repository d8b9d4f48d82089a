#pragma once

// Independent reference implementations used to check the library. Nothing
// here calls into the code paths it is meant to verify.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "liverank/graph.hpp"

namespace liverank::testing {

/// Solves Y (I − dA) = (1−d) X by Gaussian elimination with partial pivoting.
inline std::vector<double> dense_pagerank(std::size_t n, const std::vector<Edge>& edges,
                                          double d, const std::vector<double>& zap) {
  // Deduplicate to match the collapsed graph.
  std::set<Edge> unique(edges.begin(), edges.end());
  std::vector<double> outdeg(n, 0.0);
  for (const auto& [u, v] : unique) outdeg[u] += 1.0;
  // Transposed system: (I − dA)^T y = (1−d) x, stored row-major with rhs column.
  std::vector<std::vector<double>> m(n, std::vector<double>(n + 1, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    m[i][i] = 1.0;
    m[i][n] = (1.0 - d) * zap[i];
  }
  for (const auto& [u, v] : unique) m[v][u] -= d / outdeg[u];
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::fabs(m[r][col]) > std::fabs(m[pivot][col])) pivot = r;
    std::swap(m[col], m[pivot]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || m[r][col] == 0.0) continue;
      const double f = m[r][col] / m[col][col];
      for (std::size_t c = col; c <= n; ++c) m[r][c] -= f * m[col][c];
    }
  }
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = m[i][n] / m[i][i];
  return y;
}

/// Uniform random directed graph with about `avg_deg` links per node,
/// duplicates and self-loops allowed.
inline std::vector<Edge> random_edges(std::size_t n, double avg_deg, std::mt19937_64& rng) {
  std::vector<Edge> edges;
  std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(n - 1));
  const auto m = static_cast<std::size_t>(avg_deg * static_cast<double>(n));
  for (std::size_t i = 0; i < m; ++i) edges.emplace_back(pick(rng), pick(rng));
  return edges;
}

/// Brute-force i(L, α) with exact rational arithmetic: α = num/den.
inline std::size_t brute_prefix(const std::vector<bool>& labels_in_order, std::size_t n_active,
                                std::uint64_t num, std::uint64_t den) {
  for (std::size_t i = 1; i <= labels_in_order.size(); ++i) {
    std::size_t found = 0;
    for (std::size_t k = 0; k < i; ++k) found += labels_in_order[k] ? 1 : 0;
    if (found * den >= num * n_active) return i;
  }
  return 0;
}

/// Dynamic strategy reference that rescans every node at every step.
/// kind: 0 = BFS, 1 = active in-degree.
inline std::vector<NodeId> reference_dynamic_trace(int kind, std::size_t n,
                                                   const std::vector<Edge>& raw_edges,
                                                   const std::vector<double>& static_pr,
                                                   const std::vector<NodeId>& sample,
                                                   const std::vector<bool>& labels) {
  std::set<Edge> edges(raw_edges.begin(), raw_edges.end());
  std::vector<std::vector<NodeId>> out(n);
  for (const auto& [u, v] : edges) out[u].push_back(v);  // std::set keeps targets ascending
  std::vector<bool> tested(n, false);
  std::vector<NodeId> trace;

  auto best_static = [&]() {
    std::optional<NodeId> best;
    for (NodeId v = 0; v < n; ++v) {
      if (tested[v]) continue;
      if (!best || static_pr[v] > static_pr[*best]) best = v;
    }
    return *best;
  };

  if (kind == 0) {
    std::vector<NodeId> queue(sample.begin(), sample.end());
    std::size_t head = 0;
    while (trace.size() < n) {
      std::optional<NodeId> pick;
      while (head < queue.size()) {
        const NodeId v = queue[head++];
        if (!tested[v]) {
          pick = v;
          break;
        }
      }
      const NodeId v = pick ? *pick : best_static();
      tested[v] = true;
      trace.push_back(v);
      if (labels[v])
        for (NodeId w : out[v])
          if (!tested[w]) queue.push_back(w);
    }
    return trace;
  }

  for (NodeId v : sample) {
    tested[v] = true;
    trace.push_back(v);
  }
  while (trace.size() < n) {
    // activity score = number of tested active in-neighbours, recomputed
    std::vector<std::uint32_t> score(n, 0);
    for (const auto& [u, v] : edges)
      if (tested[u] && labels[u]) ++score[v];
    std::optional<NodeId> best;
    for (NodeId v = 0; v < n; ++v) {
      if (tested[v]) continue;
      if (!best || score[v] > score[*best] ||
          (score[v] == score[*best] && static_pr[v] > static_pr[*best]))
        best = v;
    }
    tested[*best] = true;
    trace.push_back(*best);
  }
  return trace;
}

/// Scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::mt19937_64 rng(std::random_device{}());
    path_ = std::filesystem::temp_directory_path() /
            ("liverank-" + tag + "-" + std::to_string(rng()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path file(const std::string& name, const std::string& contents) const {
    const auto p = path_ / name;
    std::ofstream(p, std::ios::binary) << contents;
    return p;
  }

 private:
  std::filesystem::path path_;
};

}  // namespace liverank::testing
