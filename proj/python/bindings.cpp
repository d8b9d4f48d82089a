#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "liverank/error.hpp"
#include "liverank/experiment.hpp"
#include "liverank/stats.hpp"

namespace py = pybind11;
using namespace liverank;

namespace {

std::vector<double> to_list(const ScoreVector& s) { return {s.values().begin(), s.values().end()}; }

CrawlTrace crawl(const DirectedGraph& g, const std::vector<bool>& labels, const std::string& strategy,
                 std::size_t z, const std::string& selector, std::uint64_t seed,
                 const std::optional<std::vector<std::string>>& urls) {
  const auto pr = pagerank(g, {}, uniform_zap(g.num_nodes())).scores;
  std::optional<SiteMap> sites;
  if (urls) sites = site_map_from_urls(*urls);
  StrategySpec spec;
  spec.kind = parse_strategy_kind(strategy);
  spec.z = z;
  spec.selector = parse_sample_selector(selector);
  ActivityOracle oracle(labels);
  StrategyContext ctx{&g, &pr, sites ? &*sites : nullptr, {}, &oracle, 1};
  auto policy = make_policy(spec, seed, ctx);
  ActivityOracle fresh(labels);
  return run_policy(*policy, fresh);
}

}  // namespace

PYBIND11_MODULE(_liverank, m) {
  m.doc() = "Bindings for the liverank C++ core";

  auto base = py::register_exception<Error>(m, "LiveRankError", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<PreconditionError>(m, "PreconditionError", base.ptr());
  py::register_exception<ConvergenceError>(m, "ConvergenceError", base.ptr());

  py::class_<DirectedGraph>(m, "Graph")
      .def_static(
          "from_edges",
          [](std::size_t n, const std::vector<Edge>& edges, bool collapse) {
            return DirectedGraph::from_edges(n, edges, collapse);
          },
          py::arg("n"), py::arg("edges"), py::arg("collapse_duplicates") = true)
      .def_static("load", [](const std::filesystem::path& p) { return load_graph(p); })
      .def_static("parse", [](const std::string& text) { return parse_edge_list(text); })
      .def_property_readonly("num_nodes", &DirectedGraph::num_nodes)
      .def_property_readonly("num_edges", &DirectedGraph::num_edges)
      .def("out_neighbors",
           [](const DirectedGraph& g, NodeId v) {
             if (v >= g.num_nodes()) throw BoundsError("node out of range");
             auto s = g.out_neighbors(v);
             return std::vector<NodeId>(s.begin(), s.end());
           })
      .def("in_degree", &DirectedGraph::in_degree)
      .def("out_degree", &DirectedGraph::out_degree);

  m.def(
      "pagerank",
      [](const DirectedGraph& g, double damping, double tol, int max_iters,
         const std::optional<std::vector<double>>& zap) {
        const ScoreVector x = zap ? ScoreVector(*zap) : uniform_zap(g.num_nodes());
        return to_list(pagerank(g, {damping, tol, max_iters}, x).scores);
      },
      py::arg("graph"), py::arg("damping") = 0.85, py::arg("tol") = 1e-10,
      py::arg("max_iters") = 200, py::arg("zap") = py::none());

  m.def("rank_random", [](std::size_t n, std::uint64_t seed) { return rank_random(n, seed).order; });
  m.def("rank_indegree", [](const DirectedGraph& g) { return rank_indegree(g).order; });
  m.def("rank_pagerank", [](const DirectedGraph& g) { return rank_pagerank(g, {}).order; });

  m.def(
      "crawl",
      [](const DirectedGraph& g, const std::vector<bool>& labels, const std::string& strategy,
         std::size_t z, const std::string& selector, std::uint64_t seed,
         const std::optional<std::vector<std::string>>& urls) {
        return crawl(g, labels, strategy, z, selector, seed, urls).sequence;
      },
      py::arg("graph"), py::arg("labels"), py::arg("strategy"), py::arg("z") = 0,
      py::arg("selector") = "top_pagerank", py::arg("seed") = 0, py::arg("urls") = py::none(),
      "Full test sequence of one strategy against the given ground truth.");

  m.def(
      "cost_curve",
      [](const std::vector<NodeId>& sequence, const std::vector<bool>& labels,
         const std::optional<std::vector<double>>& alphas) {
        ActivityOracle oracle(labels);
        CrawlTrace trace;
        trace.sequence = sequence;
        for (NodeId v : sequence) {
          if (v >= labels.size()) throw BoundsError("node out of range");
          trace.labels.push_back(labels[v]);
        }
        return cost_curve(trace, oracle, alphas ? *alphas : default_alpha_grid(), "").costs;
      },
      py::arg("sequence"), py::arg("labels"), py::arg("alphas") = py::none());

  m.def("default_alpha_grid", &default_alpha_grid);

  m.def(
      "synthetic",
      [](const std::string& config_json) {
        auto d = generate_synthetic(parse_synthetic_config(config_json));
        py::dict out;
        out["labels"] = d.oracle.ground_truth();
        out["urls"] = d.sites ? py::cast(synthetic_urls(*d.sites)) : py::none();
        out["graph"] = std::move(d.graph);
        return out;
      },
      py::arg("config_json") = "{}",
      "Generates a dataset from a JSON synthetic block; returns graph, labels, urls.");

  m.def(
      "run_config",
      [](const std::filesystem::path& path, std::size_t workers) {
        const auto report = run_experiment(load_experiment_config(path), workers);
        py::list runs;
        for (const auto& r : report.runs) {
          py::dict d;
          d["label"] = r.label;
          d["csv"] = r.csv_path;
          d["ok"] = r.ok;
          d["error"] = r.error;
          runs.append(d);
        }
        return runs;
      },
      py::arg("path"), py::arg("workers") = 1);
}
