#include "liverank/experiment.hpp"

#include <algorithm>
#include <map>

#include "json.hpp"
#include "liverank/error.hpp"
#include "liverank/io.hpp"
#include "liverank/parallel.hpp"

namespace liverank {

using nlohmann::json;

namespace {

const std::map<std::string, StrategyKind, std::less<>>& strategy_names() {
  static const std::map<std::string, StrategyKind, std::less<>> names = {
      {"random", StrategyKind::Random},
      {"R", StrategyKind::Random},
      {"indegree", StrategyKind::Indegree},
      {"I", StrategyKind::Indegree},
      {"pagerank", StrategyKind::PageRank},
      {"P", StrategyKind::PageRank},
      {"simple_adaptive", StrategyKind::SimpleAdaptive},
      {"Pa", StrategyKind::SimpleAdaptive},
      {"double_adaptive", StrategyKind::DoubleAdaptive},
      {"Pa+-", StrategyKind::DoubleAdaptive},
      {"Pa+/-", StrategyKind::DoubleAdaptive},
      {"active_site_first", StrategyKind::ActiveSiteFirst},
      {"ASF", StrategyKind::ActiveSiteFirst},
      {"bfs", StrategyKind::Bfs},
      {"BFS", StrategyKind::Bfs},
      {"active_indegree", StrategyKind::ActiveIndegree},
      {"AI", StrategyKind::ActiveIndegree},
      {"ideal", StrategyKind::Ideal},
  };
  return names;
}

template <class T>
T get_or(const json& obj, const char* key, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  if (path.is_relative() && !base.empty()) return base / path;
  return path;
}

SyntheticConfig synthetic_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("synthetic config must be an object");
  SyntheticConfig cfg;
  cfg.n = get_or<std::size_t>(j, "n", cfg.n);
  cfg.mean_out_degree = get_or<double>(j, "mean_out_degree", cfg.mean_out_degree);
  cfg.preferential = get_or<double>(j, "preferential", cfg.preferential);
  cfg.reciprocity = get_or<double>(j, "reciprocity", cfg.reciprocity);
  cfg.seed = get_or<std::uint64_t>(j, "seed", cfg.seed);
  const auto model = get_or<std::string>(j, "model", "rank_logistic");
  if (model == "rank_logistic") {
    RankLogisticModel m;
    m.base_rate = get_or<double>(j, "base_rate", m.base_rate);
    m.slope = get_or<double>(j, "slope", m.slope);
    cfg.activity = m;
  } else if (model == "site_block") {
    SiteBlockModel m;
    m.site_count = get_or<std::size_t>(j, "site_count", m.site_count);
    m.site_death_prob = get_or<double>(j, "site_death_prob", m.site_death_prob);
    m.within_site_noise = get_or<double>(j, "within_site_noise", m.within_site_noise);
    m.importance_bias = get_or<double>(j, "importance_bias", m.importance_bias);
    m.locality = get_or<double>(j, "locality", m.locality);
    cfg.activity = m;
  } else {
    throw ConfigError("unknown activity model '" + model + "'");
  }
  cfg.validate();
  return cfg;
}

std::vector<double> alpha_grid_from_json(const json& j) {
  std::vector<double> grid;
  if (j.is_string()) return parse_alpha_grid(j.get<std::string>());
  if (!j.is_array()) throw ConfigError("alpha_grid must be a list or a \"start:stop:step\" string");
  for (const auto& a : j) {
    if (!a.is_number()) throw ConfigError("alpha_grid entries must be numbers");
    grid.push_back(a.get<double>());
  }
  try {
    validate_alpha_grid(grid);
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  return grid;
}

StrategySpec strategy_from_json(const json& j) {
  StrategySpec spec;
  if (j.is_string()) {
    spec.kind = parse_strategy_kind(j.get<std::string>());
    return spec;
  }
  if (!j.is_object() || !j.contains("name")) throw ConfigError("strategy entries need a name");
  spec.kind = parse_strategy_kind(get_or<std::string>(j, "name", ""));
  spec.z = get_or<std::size_t>(j, "z", spec.z);
  if (j.contains("selector")) spec.selector = parse_sample_selector(get_or<std::string>(j, "selector", ""));
  if (j.contains("seeds")) {
    spec.seeds = get_or<std::vector<std::uint64_t>>(j, "seeds", {});
    if (spec.seeds.empty()) throw ConfigError("seeds must not be empty");
  } else if (j.contains("seed")) {
    spec.seeds = {get_or<std::uint64_t>(j, "seed", 0)};
  }
  return spec;
}

std::uint64_t mix_seed(std::uint64_t seed) {
  // splitmix64 finalizer: decorrelates the sample draw from the R strategy's
  // permutation when both use the same seed
  seed += 0x9e3779b97f4a7c15ULL;
  seed = (seed ^ (seed >> 30)) * 0xbf58476d1ce4e5b9ULL;
  seed = (seed ^ (seed >> 27)) * 0x94d049bb133111ebULL;
  return seed ^ (seed >> 31);
}

}  // namespace

std::string to_string(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::Random: return "random";
    case StrategyKind::Indegree: return "indegree";
    case StrategyKind::PageRank: return "pagerank";
    case StrategyKind::SimpleAdaptive: return "simple_adaptive";
    case StrategyKind::DoubleAdaptive: return "double_adaptive";
    case StrategyKind::ActiveSiteFirst: return "active_site_first";
    case StrategyKind::Bfs: return "bfs";
    case StrategyKind::ActiveIndegree: return "active_indegree";
    case StrategyKind::Ideal: return "ideal";
  }
  return "unknown";
}

StrategyKind parse_strategy_kind(std::string_view text) {
  const auto& names = strategy_names();
  if (auto it = names.find(text); it != names.end()) return it->second;
  throw ConfigError("unknown strategy '" + std::string(text) + "'");
}

bool uses_sample(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::SimpleAdaptive:
    case StrategyKind::DoubleAdaptive:
    case StrategyKind::ActiveSiteFirst:
    case StrategyKind::Bfs:
    case StrategyKind::ActiveIndegree: return true;
    default: return false;
  }
}

std::string StrategySpec::label(std::uint64_t seed) const {
  std::string out = to_string(kind);
  if (uses_sample(kind)) out += " z=" + std::to_string(z) + " selector=" + to_string(selector);
  out += " seed=" + std::to_string(seed);
  return out;
}

std::string StrategySpec::file_stem(std::uint64_t seed) const {
  std::string out = to_string(kind);
  if (uses_sample(kind)) out += "_z" + std::to_string(z) + "_" + to_string(selector);
  out += "_seed" + std::to_string(seed);
  return out;
}

LiveRankOrder ideal_order(const ActivityOracle& oracle) {
  const auto& labels = oracle.ground_truth();
  LiveRankOrder order;
  order.order.reserve(labels.size());
  for (int pass = 0; pass < 2; ++pass)
    for (std::size_t v = 0; v < labels.size(); ++v)
      if (labels[v] == (pass == 0)) order.order.push_back(static_cast<NodeId>(v));
  order.provenance = "ideal";
  return order;
}

std::unique_ptr<CrawlPolicy> make_policy(const StrategySpec& spec, std::uint64_t seed,
                                         const StrategyContext& ctx) {
  if (ctx.graph == nullptr || ctx.static_pr == nullptr)
    throw PreconditionError("strategy context needs a graph and its static PageRank");
  const DirectedGraph& g = *ctx.graph;
  const ScoreVector& pr = *ctx.static_pr;
  const std::string name = spec.label(seed);

  switch (spec.kind) {
    case StrategyKind::Random:
      return std::make_unique<StaticOrderPolicy>(rank_random(g.num_nodes(), seed));
    case StrategyKind::Indegree:
      return std::make_unique<StaticOrderPolicy>(rank_indegree(g));
    case StrategyKind::PageRank: {
      auto order = rank_by_scores(pr);
      order.provenance = "pagerank";
      return std::make_unique<StaticOrderPolicy>(std::move(order));
    }
    case StrategyKind::Ideal:
      if (ctx.ground_truth == nullptr) throw PreconditionError("ideal order needs the ground truth");
      return std::make_unique<StaticOrderPolicy>(ideal_order(*ctx.ground_truth));
    default: break;
  }

  SampleSpec sample_spec{spec.z, spec.selector, mix_seed(seed)};
  auto sample = select_sample(sample_base_order(g, pr, sample_spec), spec.z);
  const PageRankConfig cfg = ctx.pagerank;
  const std::size_t workers = ctx.workers;

  switch (spec.kind) {
    case StrategyKind::SimpleAdaptive:
      return std::make_unique<SampleThenRankPolicy>(
          std::move(sample),
          [&g, &pr, cfg, workers](const auto& s, const auto& labels) {
            if (s.empty()) {
              auto order = rank_by_scores(pr);
              order.provenance = "simple_adaptive z=0 fallback=static_pagerank";
              return order;
            }
            return rank_simple_adaptive(g, cfg, s, labels, pr, workers);
          },
          name);
    case StrategyKind::DoubleAdaptive:
      return std::make_unique<SampleThenRankPolicy>(
          std::move(sample),
          [&g, &pr, cfg, workers](const auto& s, const auto& labels) {
            if (s.empty()) {
              auto order = rank_by_scores(pr);
              order.provenance = "double_adaptive z=0 fallback=static_pagerank";
              return order;
            }
            return rank_double_adaptive(g, cfg, s, labels, pr, workers);
          },
          name);
    case StrategyKind::ActiveSiteFirst: {
      if (ctx.sites == nullptr) throw PreconditionError("active-site-first needs a site map (--urls)");
      const SiteMap* sites = ctx.sites;
      return std::make_unique<SampleThenRankPolicy>(
          std::move(sample),
          [&g, &pr, sites](const auto& s, const auto& labels) {
            return rank_active_site_first(g, *sites, s, labels, pr);
          },
          name);
    }
    case StrategyKind::Bfs:
    case StrategyKind::ActiveIndegree: {
      const auto kind = spec.kind == StrategyKind::Bfs ? DynamicKind::Bfs : DynamicKind::ActiveIndegree;
      return std::make_unique<DynamicPolicy>(
          std::make_unique<DynamicStrategyState>(kind, g, pr, std::move(sample)), name);
    }
    default: break;
  }
  throw ConfigError("unsupported strategy");
}

void ExperimentConfig::validate() const {
  if (version != 1) throw ConfigError("unsupported config version " + std::to_string(version));
  if (graph.has_value() == synthetic.has_value())
    throw ConfigError("exactly one of 'graph' and 'synthetic' must be given");
  if (graph && !labels) throw ConfigError("a graph file needs a labels file");
  if (strategies.empty()) throw ConfigError("at least one strategy is required");
  for (const auto* p : {&graph, &labels, &urls})
    if (p->has_value() && !std::filesystem::exists(**p))
      throw ConfigError("file not found: " + (*p)->string());
  try {
    validate_alpha_grid(alpha_grid);
    pagerank.validate();
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  for (const auto& s : strategies) {
    if (s.seeds.empty()) throw ConfigError("strategy " + to_string(s.kind) + " has no seeds");
    if (s.kind == StrategyKind::ActiveSiteFirst && !urls && !synthetic)
      throw ConfigError("active_site_first needs a URL map");
  }
}

SyntheticConfig parse_synthetic_config(std::string_view json_text) {
  try {
    return synthetic_from_json(json::parse(json_text));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid synthetic config: ") + e.what());
  }
}

ExperimentConfig parse_experiment_config(std::string_view json_text,
                                         const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid config JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  ExperimentConfig cfg;
  cfg.version = get_or<int>(j, "version", 0);
  if (cfg.version != 1) throw ConfigError("config 'version' must be 1");
  if (j.contains("graph")) cfg.graph = resolve(base_dir, get_or<std::string>(j, "graph", ""));
  if (j.contains("labels")) cfg.labels = resolve(base_dir, get_or<std::string>(j, "labels", ""));
  if (j.contains("urls")) cfg.urls = resolve(base_dir, get_or<std::string>(j, "urls", ""));
  if (j.contains("synthetic")) cfg.synthetic = synthetic_from_json(j.at("synthetic"));
  cfg.collapse_duplicates = get_or<bool>(j, "collapse_duplicates", true);
  if (j.contains("pagerank")) {
    const auto& p = j.at("pagerank");
    cfg.pagerank.damping = get_or<double>(p, "damping", cfg.pagerank.damping);
    cfg.pagerank.tol = get_or<double>(p, "tol", cfg.pagerank.tol);
    cfg.pagerank.max_iters = get_or<int>(p, "max_iters", cfg.pagerank.max_iters);
  }
  if (j.contains("alpha_grid")) cfg.alpha_grid = alpha_grid_from_json(j.at("alpha_grid"));
  if (j.contains("strategies")) {
    if (!j.at("strategies").is_array()) throw ConfigError("'strategies' must be a list");
    for (const auto& s : j.at("strategies")) cfg.strategies.push_back(strategy_from_json(s));
  }
  if (j.contains("out")) cfg.out_dir = resolve(base_dir, get_or<std::string>(j, "out", ""));
  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const IoError& e) {
    throw ConfigError(e.what());
  }
  return parse_experiment_config(text, path.parent_path());
}

Dataset load_dataset(const ExperimentConfig& cfg, std::size_t workers) {
  Dataset data;
  if (cfg.synthetic) {
    auto synth = generate_synthetic(*cfg.synthetic, workers);
    data.graph = std::move(synth.graph);
    data.oracle = std::move(synth.oracle);
    data.sites = std::move(synth.sites);
  } else {
    data.graph = load_graph(*cfg.graph, {cfg.collapse_duplicates});
    data.oracle = load_labels(*cfg.labels, data.graph.num_nodes());
  }
  if (cfg.urls) data.sites = load_site_map(*cfg.urls, data.graph);
  return data;
}

std::size_t ExperimentReport::failures() const {
  return static_cast<std::size_t>(
      std::count_if(runs.begin(), runs.end(), [](const RunOutcome& r) { return !r.ok; }));
}

ExperimentReport run_experiment(const ExperimentConfig& cfg, std::size_t workers) {
  cfg.validate();
  const Dataset data = load_dataset(cfg, workers);
  return run_experiment(cfg, data, workers);
}

ExperimentReport run_experiment(const ExperimentConfig& cfg, const Dataset& data,
                                std::size_t workers) {
  const auto static_pr = pagerank(data.graph, cfg.pagerank, uniform_zap(data.graph.num_nodes()),
                                  workers).scores;
  std::filesystem::create_directories(cfg.out_dir);

  struct Job {
    const StrategySpec* spec;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (const auto& spec : cfg.strategies)
    for (auto seed : spec.seeds) jobs.push_back({&spec, seed});

  ExperimentReport report;
  report.runs.resize(jobs.size());
  parallel_tasks(jobs.size(), workers, [&](std::size_t i) {
    const auto& job = jobs[i];
    auto& out = report.runs[i];
    out.label = job.spec->label(job.seed);
    out.csv_path = cfg.out_dir / (job.spec->file_stem(job.seed) + ".csv");
    try {
      StrategyContext ctx{&data.graph, &static_pr, data.sites ? &*data.sites : nullptr,
                          cfg.pagerank, &data.oracle, 1};
      auto policy = make_policy(*job.spec, job.seed, ctx);
      ActivityOracle oracle = data.oracle;
      oracle.reset_fetch_count();
      const auto trace = run_policy(*policy, oracle);
      out.curve = cost_curve(trace, oracle, cfg.alpha_grid, out.label);
      write_cost_curves(out.csv_path, {out.curve});
      out.ok = true;
    } catch (const std::exception& e) {
      out.error = e.what();
    }
  });

  std::vector<CostCurve> merged;
  for (const auto& r : report.runs)
    if (r.ok) merged.push_back(r.curve);
  report.merged_csv = cfg.out_dir / "merged.csv";
  write_cost_curves(report.merged_csv, merged);
  return report;
}

}  // namespace liverank
