#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "liverank/graph.hpp"

namespace liverank {

using SiteId = std::uint32_t;

/// Partition of the nodes into web sites.
class SiteMap {
 public:
  SiteMap() = default;

  /// Builds from a per-node site assignment; site ids must be dense.
  explicit SiteMap(std::vector<SiteId> site_of);

  std::size_t num_nodes() const noexcept { return site_of_.size(); }
  std::size_t num_sites() const noexcept { return sites_.size(); }
  SiteId site_of(NodeId v) const { return site_of_[v]; }
  const std::vector<NodeId>& members(SiteId s) const { return sites_[s]; }
  const std::vector<SiteId>& assignment() const noexcept { return site_of_; }

  /// Lines whose URL had no recognizable host; each got its own site.
  std::size_t unparsed_urls() const noexcept { return unparsed_; }

 private:
  friend SiteMap site_map_from_urls(const std::vector<std::string>& urls);

  std::vector<SiteId> site_of_;
  std::vector<std::vector<NodeId>> sites_;
  std::size_t unparsed_ = 0;
};

/**
 * Host of an absolute URL: the authority component with any userinfo and
 * port removed, lowercased. Empty when the URL has no "scheme://host" part.
 */
std::optional<std::string> url_host(std::string_view url);

/// Site ids are assigned in order of first appearance of each host.
SiteMap site_map_from_urls(const std::vector<std::string>& urls);

/// One URL per line, line k for node k; the line count must equal g's size.
SiteMap load_site_map(const std::filesystem::path& path, const DirectedGraph& g);

}  // namespace liverank
