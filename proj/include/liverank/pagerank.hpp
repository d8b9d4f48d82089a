#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "liverank/graph.hpp"

namespace liverank {

/// One non-negative score per node.
class ScoreVector {
 public:
  ScoreVector() = default;
  explicit ScoreVector(std::size_t n, double fill = 0.0) : values_(n, fill) {}
  explicit ScoreVector(std::vector<double> values) : values_(std::move(values)) {}

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  std::span<const double> values() const noexcept { return values_; }
  std::vector<double>& raw() noexcept { return values_; }

  /// Compensated (Neumaier) sum of the entries.
  double l1_norm() const;

  bool operator==(const ScoreVector&) const = default;

 private:
  std::vector<double> values_;
};

struct PageRankConfig {
  double damping = 0.85;
  double tol = 1e-10;
  int max_iters = 200;

  /// Throws PreconditionError unless 0 < damping < 1, tol > 0, max_iters >= 1.
  void validate() const;
};

struct PageRankResult {
  ScoreVector scores;
  int iterations = 0;
  /// L1 norm of Y - (dYA + (1-d)X) for the returned Y.
  double residual = 0.0;
};

/**
 * Solves Y = d·Y·A + (1-d)·X by power iteration, where A is the out-degree
 * normalized adjacency with zero rows at dangling nodes (their mass is lost).
 *
 * Iteration starts from X. Each step pulls over in-edges, so every entry is
 * accumulated independently and the result does not depend on `workers`.
 * Throws PreconditionError for an invalid zap vector and ConvergenceError when
 * the residual is still above cfg.tol after cfg.max_iters steps.
 */
PageRankResult pagerank(const DirectedGraph& g, const PageRankConfig& cfg,
                        const ScoreVector& zap, std::size_t workers = 1);

/// Uniform distribution over all n nodes.
ScoreVector uniform_zap(std::size_t n);

/// Uniform distribution over `nodes`; throws PreconditionError when empty.
ScoreVector subset_zap(std::size_t n, std::span<const NodeId> nodes);

/// ‖Y − (dYA + (1−d)X)‖₁.
double pagerank_residual(const DirectedGraph& g, double damping, const ScoreVector& zap,
                         const ScoreVector& y);

/// Text: one "node_id value" line per node, values printed round-trip exact.
void write_scores_text(const std::filesystem::path& path, const ScoreVector& scores);
ScoreVector read_scores_text(const std::filesystem::path& path);

/// Versioned binary form.
void write_scores_binary(const std::filesystem::path& path, const ScoreVector& scores);
ScoreVector read_scores_binary(const std::filesystem::path& path);

}  // namespace liverank
