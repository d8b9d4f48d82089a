#include "liverank/stats.hpp"

#include <algorithm>
#include <cmath>

#include "liverank/error.hpp"
#include "liverank/io.hpp"

namespace liverank {

double EmpiricalCdf::at(double x) const {
  auto it = std::upper_bound(points.begin(), points.end(), x,
                             [](double value, const auto& p) { return value < p.first; });
  if (it == points.begin()) return 0.0;
  return std::prev(it)->second;
}

EmpiricalCdf empirical_cdf(std::vector<double> samples) {
  EmpiricalCdf cdf;
  if (samples.empty()) return cdf;
  std::sort(samples.begin(), samples.end());
  const double total = static_cast<double>(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (i + 1 < samples.size() && samples[i + 1] == samples[i]) continue;
    cdf.points.emplace_back(samples[i], static_cast<double>(i + 1) / total);
  }
  return cdf;
}

double ks_distance(const EmpiricalCdf& f, const EmpiricalCdf& g) {
  double worst = 0.0;
  // Both step functions only change at their own points.
  for (const auto& [x, fx] : f.points) worst = std::max(worst, std::fabs(fx - g.at(x)));
  for (const auto& [x, gx] : g.points) worst = std::max(worst, std::fabs(f.at(x) - gx));
  return worst;
}

std::string to_string(LivenessGroup group) {
  switch (group) {
    case LivenessGroup::Active: return "active";
    case LivenessGroup::Inactive: return "inactive";
    case LivenessGroup::All: return "all";
  }
  return "unknown";
}

LivenessCdfReport liveness_cdf_report(const DirectedGraph& g, const ActivityOracle& oracle,
                                      const ScoreVector& static_pr) {
  const std::size_t n = g.num_nodes();
  if (oracle.num_nodes() != n || static_pr.size() != n)
    throw ShapeError("labels and PageRank must cover every node");
  const auto& labels = oracle.ground_truth();
  std::array<std::vector<double>, 3> degrees, ranks;
  for (std::size_t v = 0; v < n; ++v) {
    const int group = labels[v] ? 0 : 1;
    const auto deg = static_cast<double>(g.in_degree(static_cast<NodeId>(v)));
    degrees[group].push_back(deg);
    degrees[2].push_back(deg);
    ranks[group].push_back(static_pr[v]);
    ranks[2].push_back(static_pr[v]);
  }
  LivenessCdfReport report;
  for (int k = 0; k < 3; ++k) {
    report.indegree[k] = empirical_cdf(std::move(degrees[k]));
    report.pagerank[k] = empirical_cdf(std::move(ranks[k]));
  }
  return report;
}

std::string liveness_report_csv(const LivenessCdfReport& report) {
  std::string out = "metric,group,value,cdf\n";
  auto emit = [&](const char* metric, const std::array<EmpiricalCdf, 3>& cdfs) {
    for (int k = 0; k < 3; ++k) {
      const auto group = to_string(static_cast<LivenessGroup>(k));
      for (const auto& [x, f] : cdfs[k].points) {
        out += metric;
        out += ',';
        out += group;
        out += ',';
        out += format_general(x, 10);
        out += ',';
        out += format_general(f, 6);
        out += '\n';
      }
    }
  };
  emit("indegree", report.indegree);
  emit("pagerank", report.pagerank);
  return out;
}

}  // namespace liverank
