#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "liverank/graph.hpp"
#include "liverank/pagerank.hpp"
#include "liverank/simulator.hpp"

namespace liverank {

/// Empirical CDF as (value, fraction of samples <= value) at each distinct value.
struct EmpiricalCdf {
  std::vector<std::pair<double, double>> points;

  /// F(x); 0 below the first point.
  double at(double x) const;
};

EmpiricalCdf empirical_cdf(std::vector<double> samples);

/// sup_x |F(x) − G(x)|.
double ks_distance(const EmpiricalCdf& f, const EmpiricalCdf& g);

enum class LivenessGroup { Active = 0, Inactive = 1, All = 2 };

std::string to_string(LivenessGroup group);

/// In-degree and static PageRank distributions split by liveness.
struct LivenessCdfReport {
  std::array<EmpiricalCdf, 3> indegree;
  std::array<EmpiricalCdf, 3> pagerank;

  const EmpiricalCdf& indegree_of(LivenessGroup g) const { return indegree[static_cast<int>(g)]; }
  const EmpiricalCdf& pagerank_of(LivenessGroup g) const { return pagerank[static_cast<int>(g)]; }
};

LivenessCdfReport liveness_cdf_report(const DirectedGraph& g, const ActivityOracle& oracle,
                                      const ScoreVector& static_pr);

/// Rows of "metric,group,value,cdf".
std::string liveness_report_csv(const LivenessCdfReport& report);

}  // namespace liverank
