#include "liverank/synth.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <random>

#include "liverank/error.hpp"
#include "liverank/io.hpp"
#include "liverank/strategies.hpp"

namespace liverank {

namespace {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform in [0, bound); bound > 0.
  std::uint64_t below(std::uint64_t bound) {
    return static_cast<std::uint64_t>(uniform() * static_cast<double>(bound)) % bound;
  }

  bool chance(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double logit(double p) { return std::log(p) - std::log1p(-p); }

bool in_unit(double p) { return p >= 0.0 && p <= 1.0; }

struct GrowthState {
  std::vector<Edge> edges;
  std::vector<NodeId> endpoints;                 // target of every link so far
  std::vector<SiteId> site_of;                   // site_block only
  std::vector<std::vector<NodeId>> site_members;  // nodes seen so far, per site
  std::vector<std::vector<NodeId>> site_endpoints;
};

NodeId pick_global(Rng& rng, const GrowthState& st, NodeId v, double preferential) {
  if (!st.endpoints.empty() && rng.chance(preferential))
    return st.endpoints[rng.below(st.endpoints.size())];
  return static_cast<NodeId>(rng.below(v));
}

}  // namespace

void SyntheticConfig::validate() const {
  if (n < 1) throw ConfigError("synthetic graph needs n >= 1");
  if (!(mean_out_degree >= 1.0)) throw ConfigError("mean_out_degree must be >= 1");
  if (!in_unit(preferential)) throw ConfigError("preferential must be a probability");
  if (!in_unit(reciprocity)) throw ConfigError("reciprocity must be a probability");
  if (const auto* m = std::get_if<RankLogisticModel>(&activity)) {
    if (!(m->base_rate > 0.0 && m->base_rate < 1.0)) throw ConfigError("base_rate must lie in (0,1)");
    if (!std::isfinite(m->slope)) throw ConfigError("slope must be finite");
  } else {
    const auto& s = std::get<SiteBlockModel>(activity);
    if (s.site_count < 1 || s.site_count > n) throw ConfigError("site_count must lie in [1, n]");
    if (!in_unit(s.site_death_prob)) throw ConfigError("site_death_prob must be a probability");
    if (!in_unit(s.within_site_noise)) throw ConfigError("within_site_noise must be a probability");
    if (!in_unit(s.locality)) throw ConfigError("locality must be a probability");
    if (!std::isfinite(s.importance_bias)) throw ConfigError("importance_bias must be finite");
  }
}

double logistic_offset(std::size_t n, double slope, double base_rate) {
  if (!(base_rate > 0.0 && base_rate < 1.0)) throw ConfigError("base_rate must lie in (0,1)");
  const double nd = static_cast<double>(n);
  const double median = (nd - 1.0) / 2.0;
  auto mean_at = [&](double offset) {
    double sum = 0.0;
    for (std::size_t r = 0; r < n; ++r)
      sum += logistic(slope * (median - static_cast<double>(r)) / nd + offset);
    return sum / nd;
  };
  double lo = logit(base_rate) - std::fabs(slope) - 1.0;
  double hi = logit(base_rate) + std::fabs(slope) + 1.0;
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    (mean_at(mid) < base_rate ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

SyntheticDataset generate_synthetic(const SyntheticConfig& cfg, std::size_t workers) {
  cfg.validate();
  Rng rng(cfg.seed);
  const std::size_t n = cfg.n;
  const auto* site_model = std::get_if<SiteBlockModel>(&cfg.activity);

  GrowthState st;
  st.edges.reserve(static_cast<std::size_t>(static_cast<double>(n) * cfg.mean_out_degree *
                                            (1.0 + cfg.reciprocity)) + 16);
  st.endpoints.reserve(st.edges.capacity());
  if (site_model != nullptr) {
    st.site_of.resize(n);
    st.site_members.resize(site_model->site_count);
    st.site_endpoints.resize(site_model->site_count);
  }

  std::size_t next_site = 0;
  for (std::size_t vi = 0; vi < n; ++vi) {
    const auto v = static_cast<NodeId>(vi);
    if (site_model != nullptr) {
      // Site k opens at node floor(k·n/site_count); other nodes join one of
      // the open sites uniformly, so older sites end up larger.
      SiteId s = 0;
      if (next_site < site_model->site_count && vi == next_site * n / site_model->site_count) {
        s = static_cast<SiteId>(next_site++);
      } else {
        s = static_cast<SiteId>(rng.below(next_site));
      }
      st.site_of[vi] = s;
    }

    if (vi > 0) {
      const auto links = 1 + static_cast<std::size_t>(rng.uniform() * (2.0 * cfg.mean_out_degree - 1.0));
      for (std::size_t k = 0; k < links; ++k) {
        NodeId target = 0;
        bool local = false;
        if (site_model != nullptr) {
          const SiteId s = st.site_of[vi];
          if (!st.site_members[s].empty() && rng.chance(site_model->locality)) {
            local = true;
            const auto& ends = st.site_endpoints[s];
            if (!ends.empty() && rng.chance(cfg.preferential))
              target = ends[rng.below(ends.size())];
            else
              target = st.site_members[s][rng.below(st.site_members[s].size())];
          }
        }
        if (!local) target = pick_global(rng, st, v, cfg.preferential);

        st.edges.emplace_back(v, target);
        st.endpoints.push_back(target);
        if (site_model != nullptr) st.site_endpoints[st.site_of[target]].push_back(target);
        if (rng.chance(cfg.reciprocity)) {
          st.edges.emplace_back(target, v);
          st.endpoints.push_back(v);
          if (site_model != nullptr) st.site_endpoints[st.site_of[vi]].push_back(v);
        }
      }
    }
    if (site_model != nullptr) st.site_members[st.site_of[vi]].push_back(v);
  }
  st.endpoints = {};
  st.site_endpoints = {};
  st.site_members = {};

  SyntheticDataset out;
  out.graph = DirectedGraph::from_edges(n, st.edges, true);
  st.edges = {};

  const PageRankConfig pr_cfg;
  const auto static_pr = pagerank(out.graph, pr_cfg, uniform_zap(n), workers).scores;
  std::vector<bool> labels(n, false);

  if (const auto* m = std::get_if<RankLogisticModel>(&cfg.activity)) {
    const auto order = rank_by_scores(static_pr).order;
    const double nd = static_cast<double>(n);
    const double median = (nd - 1.0) / 2.0;
    const double offset = logistic_offset(n, m->slope, m->base_rate);
    for (std::size_t r = 0; r < n; ++r) {
      const double p = logistic(m->slope * (median - static_cast<double>(r)) / nd + offset);
      labels[order[r]] = rng.chance(p);
    }
  } else {
    const std::size_t sites = site_model->site_count;
    std::vector<double> mass(sites, 0.0);
    for (std::size_t v = 0; v < n; ++v) mass[st.site_of[v]] += static_cast<double>(static_pr[v]);
    std::vector<SiteId> by_mass(sites);
    std::iota(by_mass.begin(), by_mass.end(), SiteId{0});
    std::stable_sort(by_mass.begin(), by_mass.end(),
                     [&](SiteId a, SiteId b) { return mass[a] > mass[b]; });

    std::vector<char> alive(sites, 0);
    for (std::size_t rank = 0; rank < sites; ++rank) {
      const double q = sites == 1 ? 0.5 : static_cast<double>(rank) / static_cast<double>(sites - 1);
      double p = site_model->site_death_prob;
      if (p > 0.0 && p < 1.0) p = logistic(logit(p) + site_model->importance_bias * (q - 0.5));
      alive[by_mass[rank]] = rng.chance(p) ? 0 : 1;
    }
    for (std::size_t v = 0; v < n; ++v)
      labels[v] = alive[st.site_of[v]] && !rng.chance(site_model->within_site_noise);
    out.sites = SiteMap(std::move(st.site_of));
  }
  out.oracle = ActivityOracle(std::move(labels));
  return out;
}

ActivityOracle parse_labels(std::string_view text, std::size_t n) {
  std::vector<std::string_view> lines;
  std::vector<std::size_t> line_numbers;
  enum class Form { Auto, Flags, Ids } form = Form::Auto;
  std::size_t line_no = 0;
  std::size_t start = 0;
  bool first = true;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
      line.remove_suffix(1);
    while (!line.empty() && (line.front() == ' ' || line.front() == '\t')) line.remove_prefix(1);
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (first) {
        if (line.find("format: flags") != std::string_view::npos) form = Form::Flags;
        if (line.find("format: ids") != std::string_view::npos) form = Form::Ids;
      }
      first = false;
      continue;
    }
    first = false;
    lines.push_back(line);
    line_numbers.push_back(line_no);
  }

  std::vector<std::uint64_t> values(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto [ptr, ec] = std::from_chars(lines[i].data(), lines[i].data() + lines[i].size(), values[i]);
    if (ec != std::errc() || ptr != lines[i].data() + lines[i].size())
      throw ParseError("expected a non-negative integer", line_numbers[i]);
  }
  if (form == Form::Auto) {
    const bool all_binary = std::all_of(values.begin(), values.end(), [](auto x) { return x <= 1; });
    form = all_binary && values.size() == n ? Form::Flags : Form::Ids;
  }

  std::vector<bool> labels(n, false);
  if (form == Form::Flags) {
    if (values.size() != n)
      throw ShapeError("label file has " + std::to_string(values.size()) + " flags, expected " +
                       std::to_string(n));
    for (std::size_t i = 0; i < n; ++i) {
      if (values[i] > 1) throw ParseError("flag must be 0 or 1", line_numbers[i]);
      labels[i] = values[i] == 1;
    }
  } else {
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (values[i] >= n)
        throw BoundsError("active id " + std::to_string(values[i]) + " >= n " + std::to_string(n) +
                          " (line " + std::to_string(line_numbers[i]) + ")");
      labels[values[i]] = true;
    }
  }
  return ActivityOracle(std::move(labels));
}

ActivityOracle load_labels(const std::filesystem::path& path, std::size_t n) {
  return parse_labels(read_file(path), n);
}

void write_labels(const std::filesystem::path& path, const std::vector<bool>& labels) {
  std::string out = "# format: flags\n";
  out.reserve(out.size() + 2 * labels.size());
  for (bool b : labels) {
    out += b ? '1' : '0';
    out += '\n';
  }
  write_file_atomic(path, out);
}

std::vector<std::string> synthetic_urls(const SiteMap& sites) {
  std::vector<std::string> urls(sites.num_nodes());
  for (std::size_t s = 0; s < sites.num_sites(); ++s) {
    const auto& members = sites.members(static_cast<SiteId>(s));
    for (std::size_t j = 0; j < members.size(); ++j)
      urls[members[j]] = "http://site" + std::to_string(s) + ".test/page" + std::to_string(j);
  }
  return urls;
}

void write_urls(const std::filesystem::path& path, const std::vector<std::string>& urls) {
  std::string out;
  for (const auto& u : urls) {
    out += u;
    out += '\n';
  }
  write_file_atomic(path, out);
}

}  // namespace liverank
