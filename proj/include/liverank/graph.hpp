#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace liverank {

using NodeId = std::uint32_t;
using EdgeIndex = std::uint64_t;
using Edge = std::pair<NodeId, NodeId>;

/**
 * Immutable directed snapshot graph in compressed sparse row form.
 *
 * Both directions are stored: out-adjacency for propagation along links and
 * in-adjacency for pull-style PageRank. Adjacency rows are sorted; when the
 * graph was built with duplicate collapsing they are strictly increasing.
 * Self-loops are kept and count as ordinary out-edges.
 */
class DirectedGraph {
 public:
  DirectedGraph() = default;

  /// Builds from an explicit edge list. Ids must be < n.
  static DirectedGraph from_edges(std::size_t n, std::span<const Edge> edges,
                                  bool collapse_duplicates = true);

  /// Builds from an out-adjacency CSR; the reverse direction is derived.
  static DirectedGraph from_csr(std::vector<EdgeIndex> out_offsets,
                                std::vector<NodeId> out_targets);

  std::size_t num_nodes() const noexcept { return n_; }
  std::size_t num_edges() const noexcept { return out_targets_.size(); }

  std::span<const NodeId> out_neighbors(NodeId u) const noexcept {
    return {out_targets_.data() + out_offsets_[u],
            out_targets_.data() + out_offsets_[u + 1]};
  }
  std::span<const NodeId> in_neighbors(NodeId v) const noexcept {
    return {in_sources_.data() + in_offsets_[v],
            in_sources_.data() + in_offsets_[v + 1]};
  }
  std::size_t out_degree(NodeId u) const noexcept {
    return out_offsets_[u + 1] - out_offsets_[u];
  }
  std::size_t in_degree(NodeId v) const noexcept {
    return in_offsets_[v + 1] - in_offsets_[v];
  }

  const std::vector<EdgeIndex>& out_offsets() const noexcept { return out_offsets_; }
  const std::vector<NodeId>& out_targets() const noexcept { return out_targets_; }
  const std::vector<EdgeIndex>& in_offsets() const noexcept { return in_offsets_; }
  const std::vector<NodeId>& in_sources() const noexcept { return in_sources_; }

  /// The graph with every edge reversed.
  DirectedGraph transpose() const;

  bool operator==(const DirectedGraph&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<EdgeIndex> out_offsets_{0};
  std::vector<NodeId> out_targets_;
  std::vector<EdgeIndex> in_offsets_{0};
  std::vector<NodeId> in_sources_;
};

/// Reverses a CSR adjacency. Rows of the result are sorted by construction.
void transpose_csr(std::size_t n, const std::vector<EdgeIndex>& offsets,
                   const std::vector<NodeId>& targets,
                   std::vector<EdgeIndex>& rev_offsets,
                   std::vector<NodeId>& rev_targets);

struct EdgeListOptions {
  bool collapse_duplicates = true;
};

/**
 * Reads a whitespace separated "u v" edge list. Lines starting with '#' are
 * comments, except an optional first line "# n m" which declares the node
 * and edge counts. Without a header n is one more than the largest id.
 */
DirectedGraph load_edge_list(const std::filesystem::path& path,
                             EdgeListOptions options = {});
DirectedGraph parse_edge_list(std::string_view text, EdgeListOptions options = {});

/// Writes "# n m" followed by one "u v" line per edge, in CSR order.
void write_edge_list(const std::filesystem::path& path, const DirectedGraph& g);

/// Versioned binary cache. Round-trips exactly.
void save_graph_cache(const std::filesystem::path& path, const DirectedGraph& g);
DirectedGraph load_graph_cache(const std::filesystem::path& path);
std::vector<char> serialize_graph(const DirectedGraph& g);

/// True when the file starts with the binary cache magic.
bool is_graph_cache(const std::filesystem::path& path);

/// Cache if the magic matches, edge list otherwise.
DirectedGraph load_graph(const std::filesystem::path& path,
                         EdgeListOptions options = {});

struct DegreeSummary {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t max_out_degree = 0;
  std::size_t max_in_degree = 0;
  double mean_degree = 0.0;
  std::size_t dangling = 0;
  std::size_t self_loops = 0;
};

DegreeSummary summarize(const DirectedGraph& g);

}  // namespace liverank
