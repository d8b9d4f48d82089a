// liverank: command-line front end for ingestion, ranking, crawl simulation,
// synthetic data generation and experiment sweeps.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "liverank/error.hpp"
#include "liverank/experiment.hpp"
#include "liverank/graph.hpp"
#include "liverank/io.hpp"
#include "liverank/pagerank.hpp"
#include "liverank/parallel.hpp"
#include "liverank/simulator.hpp"
#include "liverank/stats.hpp"
#include "liverank/strategies.hpp"
#include "liverank/synth.hpp"

namespace fs = std::filesystem;
using namespace liverank;

namespace {

enum ExitCode : int { kOk = 0, kConfigError = 2, kDataError = 3, kRuntimeError = 4 };

struct GraphArgs {
  std::string graph;
  bool no_collapse = false;

  void add(CLI::App& cmd, bool required = true) {
    auto* opt = cmd.add_option("--graph", graph, "Edge list or binary graph cache");
    if (required) opt->required();
    cmd.add_flag("--no-collapse", no_collapse, "Keep parallel edges");
  }
  DirectedGraph load() const { return load_graph(graph, {!no_collapse}); }
};

struct PageRankArgs {
  PageRankConfig cfg;
  void add(CLI::App& cmd) {
    cmd.add_option("--damping", cfg.damping, "Damping factor d")->capture_default_str();
    cmd.add_option("--tol", cfg.tol, "L1 convergence tolerance")->capture_default_str();
    cmd.add_option("--max-iters", cfg.max_iters, "Iteration cap")->capture_default_str();
  }
};

struct StrategyArgs {
  std::string strategy = "pagerank";
  std::size_t z = 0;
  std::string selector = "top_pagerank";
  std::uint64_t seed = 0;

  void add(CLI::App& cmd) {
    cmd.add_option("--strategy", strategy,
                   "random|indegree|pagerank|simple_adaptive|double_adaptive|"
                   "active_site_first|bfs|active_indegree|ideal")
        ->capture_default_str();
    cmd.add_option("--z", z, "Training set size")->capture_default_str();
    cmd.add_option("--selector", selector, "random|top_pagerank|top_indegree")->capture_default_str();
    cmd.add_option("--seed", seed, "Seed for random orders and random samples")->capture_default_str();
  }
  StrategySpec spec() const {
    StrategySpec s;
    s.kind = parse_strategy_kind(strategy);
    s.z = z;
    s.selector = parse_sample_selector(selector);
    s.seeds = {seed};
    return s;
  }
};

void print_summary(const DegreeSummary& s) {
  std::cout << "n=" << s.n << "\n"
            << "m=" << s.m << "\n"
            << "mean_degree=" << format_general(s.mean_degree, 6) << "\n"
            << "max_out_degree=" << s.max_out_degree << "\n"
            << "max_in_degree=" << s.max_in_degree << "\n"
            << "dangling=" << s.dangling << "\n"
            << "self_loops=" << s.self_loops << "\n";
}

// Runs one strategy against the oracle and returns the trace.
CrawlTrace simulate_one(const StrategySpec& spec, const DirectedGraph& g, const ScoreVector& pr,
                        const std::optional<SiteMap>& sites, const PageRankConfig& cfg,
                        ActivityOracle& oracle, std::size_t workers) {
  StrategyContext ctx{&g, &pr, sites ? &*sites : nullptr, cfg, &oracle, workers};
  auto policy = make_policy(spec, spec.seeds.front(), ctx);
  return run_policy(*policy, oracle);
}

int run_cli(int argc, char** argv) {
  CLI::App app{"LiveRank: order an old graph snapshot so that still-active nodes come first"};
  app.require_subcommand(1);
  const std::size_t workers = default_worker_count();

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Parse an edge list, print degree stats, cache it");
  GraphArgs ingest_graph;
  std::string ingest_out;
  ingest_graph.add(*ingest);
  ingest->add_option("--out", ingest_out, "Binary cache to write");
  ingest->callback([&] {
    const auto g = ingest_graph.load();
    if (!ingest_out.empty()) save_graph_cache(ingest_out, g);
    print_summary(summarize(g));
  });

  // pagerank
  auto* pr_cmd = app.add_subcommand("pagerank", "Compute uniform-zap PageRank");
  GraphArgs pr_graph;
  PageRankArgs pr_args;
  std::string pr_out;
  bool pr_binary = false;
  pr_graph.add(*pr_cmd);
  pr_args.add(*pr_cmd);
  pr_cmd->add_option("--out", pr_out, "Score file")->required();
  pr_cmd->add_flag("--binary", pr_binary, "Write the binary score format");
  pr_cmd->callback([&] {
    const auto g = pr_graph.load();
    const auto result = pagerank(g, pr_args.cfg, uniform_zap(g.num_nodes()), workers);
    if (pr_binary)
      write_scores_binary(pr_out, result.scores);
    else
      write_scores_text(pr_out, result.scores);
    std::cerr << "iterations=" << result.iterations
              << " residual=" << format_general(result.residual, 6) << "\n";
  });

  // rank
  auto* rank = app.add_subcommand("rank", "Write a LiveRank order (one node id per line)");
  GraphArgs rank_graph;
  PageRankArgs rank_pr;
  StrategyArgs rank_strategy;
  std::string rank_labels, rank_urls, rank_out;
  rank_graph.add(*rank);
  rank_pr.add(*rank);
  rank_strategy.add(*rank);
  rank->add_option("--labels", rank_labels, "Labels; needed by sample-based and dynamic strategies");
  rank->add_option("--urls", rank_urls, "URL map; needed by active_site_first");
  rank->add_option("--out", rank_out, "Order file")->required();
  rank->callback([&] {
    const auto spec = rank_strategy.spec();
    const auto g = rank_graph.load();
    const auto pr = pagerank(g, rank_pr.cfg, uniform_zap(g.num_nodes()), workers).scores;
    std::optional<SiteMap> sites;
    if (!rank_urls.empty()) sites = load_site_map(rank_urls, g);
    const bool needs_labels = uses_sample(spec.kind) || spec.kind == StrategyKind::Ideal;
    if (needs_labels && rank_labels.empty())
      throw ConfigError("strategy " + to_string(spec.kind) + " needs --labels");
    ActivityOracle oracle = rank_labels.empty() ? ActivityOracle(std::vector<bool>(g.num_nodes(), false))
                                                : load_labels(rank_labels, g.num_nodes());
    const auto trace = simulate_one(spec, g, pr, sites, rank_pr.cfg, oracle, workers);
    write_order(rank_out, LiveRankOrder{trace.sequence, spec.label(spec.seeds.front())});
  });

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Crawl with one strategy and write its cost curve");
  GraphArgs sim_graph;
  PageRankArgs sim_pr;
  StrategyArgs sim_strategy;
  std::string sim_labels, sim_urls, sim_out, sim_trace, sim_grid;
  sim_graph.add(*simulate);
  sim_pr.add(*simulate);
  sim_strategy.add(*simulate);
  simulate->add_option("--labels", sim_labels, "Ground-truth labels")->required();
  simulate->add_option("--urls", sim_urls, "URL map");
  simulate->add_option("--alpha-grid", sim_grid, "start:stop:step or comma list (default 0.02:1:0.02)");
  simulate->add_option("--out", sim_out, "Cost curve CSV")->required();
  simulate->add_option("--trace", sim_trace, "Also write the crawl trace");
  simulate->callback([&] {
    const auto spec = sim_strategy.spec();
    const auto grid = sim_grid.empty() ? default_alpha_grid() : parse_alpha_grid(sim_grid);
    const auto g = sim_graph.load();
    auto oracle = load_labels(sim_labels, g.num_nodes());
    std::optional<SiteMap> sites;
    if (!sim_urls.empty()) sites = load_site_map(sim_urls, g);
    const auto pr = pagerank(g, sim_pr.cfg, uniform_zap(g.num_nodes()), workers).scores;
    const auto trace = simulate_one(spec, g, pr, sites, sim_pr.cfg, oracle, workers);
    if (!sim_trace.empty()) write_trace(sim_trace, trace);
    write_cost_curves(sim_out, {cost_curve(trace, oracle, grid, spec.label(spec.seeds.front()))});
  });

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a synthetic graph with activity labels");
  SyntheticConfig syn;
  std::string syn_model = "rank_logistic", syn_out, syn_config;
  RankLogisticModel logistic_model;
  SiteBlockModel site_model;
  synth->add_option("--config", syn_config, "JSON generator config (flags are then ignored)");
  synth->add_option("--n", syn.n, "Node count")->capture_default_str();
  synth->add_option("--mean-out-degree", syn.mean_out_degree, "Mean links added per node")->capture_default_str();
  synth->add_option("--preferential", syn.preferential, "Share of targets picked by in-degree")->capture_default_str();
  synth->add_option("--reciprocity", syn.reciprocity, "Chance a link is answered by a link back")->capture_default_str();
  synth->add_option("--seed", syn.seed, "Generator seed")->capture_default_str();
  synth->add_option("--model", syn_model, "rank_logistic|site_block")->capture_default_str();
  synth->add_option("--base-rate", logistic_model.base_rate, "rank_logistic: mean active probability")->capture_default_str();
  synth->add_option("--slope", logistic_model.slope, "rank_logistic: strength of the rank effect")->capture_default_str();
  synth->add_option("--site-count", site_model.site_count, "site_block: number of sites")->capture_default_str();
  synth->add_option("--site-death-prob", site_model.site_death_prob, "site_block: chance a site dies")->capture_default_str();
  synth->add_option("--within-site-noise", site_model.within_site_noise, "site_block: chance a page of a live site is inactive")->capture_default_str();
  synth->add_option("--importance-bias", site_model.importance_bias, "site_block: survival tilt towards high-PageRank sites")->capture_default_str();
  synth->add_option("--locality", site_model.locality, "site_block: chance a link stays in its site")->capture_default_str();
  synth->add_option("--out", syn_out, "Output directory")->required();
  synth->callback([&] {
    SyntheticConfig cfg = syn;
    if (!syn_config.empty()) {
      std::string text;
      try {
        text = read_file(syn_config);
      } catch (const IoError& e) {
        throw ConfigError(e.what());
      }
      cfg = parse_synthetic_config(text);
    } else if (syn_model == "rank_logistic") {
      cfg.activity = logistic_model;
    } else if (syn_model == "site_block") {
      cfg.activity = site_model;
    } else {
      throw ConfigError("unknown model '" + syn_model + "'");
    }
    const auto data = generate_synthetic(cfg, workers);
    const fs::path dir(syn_out);
    fs::create_directories(dir);
    write_edge_list(dir / "graph.txt", data.graph);
    write_labels(dir / "labels.txt", data.oracle.ground_truth());
    if (data.sites) write_urls(dir / "urls.txt", synthetic_urls(*data.sites));
    std::cout << "n=" << data.graph.num_nodes() << " m=" << data.graph.num_edges()
              << " n_a=" << data.oracle.num_active();
    if (data.sites) std::cout << " sites=" << data.sites->num_sites();
    std::cout << "\n";
  });

  // stats
  auto* stats = app.add_subcommand("stats", "In-degree and PageRank CDFs for active/inactive/all nodes");
  GraphArgs stats_graph;
  PageRankArgs stats_pr;
  std::string stats_labels, stats_out;
  stats_graph.add(*stats);
  stats_pr.add(*stats);
  stats->add_option("--labels", stats_labels, "Ground-truth labels")->required();
  stats->add_option("--out", stats_out, "Report CSV")->required();
  stats->callback([&] {
    const auto g = stats_graph.load();
    const auto oracle = load_labels(stats_labels, g.num_nodes());
    const auto pr = pagerank(g, stats_pr.cfg, uniform_zap(g.num_nodes()), workers).scores;
    const auto report = liveness_cdf_report(g, oracle, pr);
    write_file_atomic(stats_out, liveness_report_csv(report));
    std::cout << "ks_indegree=" << format_general(ks_distance(report.indegree_of(LivenessGroup::Active),
                                                              report.indegree_of(LivenessGroup::Inactive)), 6)
              << " ks_pagerank=" << format_general(ks_distance(report.pagerank_of(LivenessGroup::Active),
                                                               report.pagerank_of(LivenessGroup::Inactive)), 6)
              << "\n";
  });

  // run
  auto* run = app.add_subcommand("run", "Run an experiment config: one CSV per (strategy, seed)");
  std::string run_config, run_graph, run_labels, run_urls, run_out, run_grid;
  std::vector<std::string> run_strategies;
  std::size_t run_z = 0;
  std::string run_selector;
  std::vector<std::uint64_t> run_seeds;
  run->add_option("--config", run_config, "JSON experiment config")->required();
  run->add_option("--graph", run_graph, "Override the graph file");
  run->add_option("--labels", run_labels, "Override the labels file");
  run->add_option("--urls", run_urls, "Override the URL map");
  run->add_option("--out", run_out, "Override the output directory");
  run->add_option("--alpha-grid", run_grid, "Override the alpha grid");
  auto* strategy_opt = run->add_option("--strategy", run_strategies, "Replace the strategy list");
  run->add_option("--z", run_z, "z for --strategy entries")->needs(strategy_opt);
  run->add_option("--selector", run_selector, "Selector for --strategy entries")->needs(strategy_opt);
  run->add_option("--seed", run_seeds, "Seeds for --strategy entries")->needs(strategy_opt);
  int run_status = kOk;
  run->callback([&] {
    auto cfg = load_experiment_config(run_config);
    if (!run_graph.empty()) {
      cfg.graph = run_graph;
      cfg.synthetic.reset();
    }
    if (!run_labels.empty()) cfg.labels = run_labels;
    if (!run_urls.empty()) cfg.urls = run_urls;
    if (!run_out.empty()) cfg.out_dir = run_out;
    if (!run_grid.empty()) cfg.alpha_grid = parse_alpha_grid(run_grid);
    if (!run_strategies.empty()) {
      cfg.strategies.clear();
      for (const auto& name : run_strategies) {
        StrategySpec s;
        s.kind = parse_strategy_kind(name);
        s.z = run_z;
        if (!run_selector.empty()) s.selector = parse_sample_selector(run_selector);
        if (!run_seeds.empty()) s.seeds = run_seeds;
        cfg.strategies.push_back(s);
      }
    }
    cfg.validate();
    const auto report = run_experiment(cfg, workers);
    for (const auto& r : report.runs) {
      if (r.ok)
        std::cout << "ok     " << r.label << " -> " << r.csv_path.string() << "\n";
      else
        std::cout << "FAILED " << r.label << ": " << r.error << "\n";
    }
    std::cout << report.runs.size() - report.failures() << "/" << report.runs.size()
              << " runs succeeded; merged curves in " << report.merged_csv.string() << "\n";
    if (report.failures() > 0) run_status = kRuntimeError;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const ConvergenceError& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return kRuntimeError;
  } catch (const DomainError& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return kRuntimeError;
  } catch (const Error& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kDataError;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return kRuntimeError;
  }
  return run_status;
}

}  // namespace

int main(int argc, char** argv) { return run_cli(argc, argv); }
