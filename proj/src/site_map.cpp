#include "liverank/site_map.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_map>

#include "liverank/error.hpp"
#include "liverank/io.hpp"

namespace liverank {

SiteMap::SiteMap(std::vector<SiteId> site_of) : site_of_(std::move(site_of)) {
  SiteId max_site = 0;
  for (SiteId s : site_of_) max_site = std::max(max_site, s);
  sites_.resize(site_of_.empty() ? 0 : std::size_t{max_site} + 1);
  for (std::size_t v = 0; v < site_of_.size(); ++v)
    sites_[site_of_[v]].push_back(static_cast<NodeId>(v));
  for (std::size_t s = 0; s < sites_.size(); ++s)
    if (sites_[s].empty()) throw ShapeError("site id " + std::to_string(s) + " has no members");
}

std::optional<std::string> url_host(std::string_view url) {
  while (!url.empty() && std::isspace(static_cast<unsigned char>(url.front()))) url.remove_prefix(1);
  while (!url.empty() && std::isspace(static_cast<unsigned char>(url.back()))) url.remove_suffix(1);

  const auto scheme_end = url.find("://");
  if (scheme_end == std::string_view::npos || scheme_end == 0) return std::nullopt;
  for (char c : url.substr(0, scheme_end)) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '+' && c != '-' && c != '.')
      return std::nullopt;
  }
  auto authority = url.substr(scheme_end + 3);
  authority = authority.substr(0, authority.find_first_of("/?#"));
  if (const auto at = authority.rfind('@'); at != std::string_view::npos)
    authority.remove_prefix(at + 1);

  std::string_view host;
  if (!authority.empty() && authority.front() == '[') {
    const auto close = authority.find(']');
    if (close == std::string_view::npos) return std::nullopt;
    host = authority.substr(0, close + 1);
  } else {
    host = authority.substr(0, authority.find(':'));
  }
  if (host.empty()) return std::nullopt;

  std::string lowered(host);
  std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return lowered;
}

SiteMap site_map_from_urls(const std::vector<std::string>& urls) {
  std::unordered_map<std::string, SiteId> ids;
  std::vector<SiteId> site_of(urls.size());
  SiteId next = 0;
  std::size_t unparsed = 0;
  for (std::size_t v = 0; v < urls.size(); ++v) {
    auto host = url_host(urls[v]);
    if (!host) {
      site_of[v] = next++;
      ++unparsed;
      continue;
    }
    auto [it, inserted] = ids.try_emplace(*host, next);
    if (inserted) ++next;
    site_of[v] = it->second;
  }
  SiteMap map(std::move(site_of));
  map.unparsed_ = unparsed;
  return map;
}

SiteMap load_site_map(const std::filesystem::path& path, const DirectedGraph& g) {
  const std::string text = read_file(path);
  std::vector<std::string> urls;
  urls.reserve(g.num_nodes());
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    urls.emplace_back(text.substr(start, end - start));
    start = end + 1;
  }
  if (urls.size() != g.num_nodes())
    throw ShapeError("URL file has " + std::to_string(urls.size()) + " lines, graph has " +
                     std::to_string(g.num_nodes()) + " nodes");
  return site_map_from_urls(urls);
}

}  // namespace liverank
