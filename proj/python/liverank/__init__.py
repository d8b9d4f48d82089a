"""Python access to the liverank core: graphs, PageRank, crawl orderings and cost curves."""

from ._liverank import (
    ConfigError,
    ConvergenceError,
    DomainError,
    Graph,
    LiveRankError,
    ParseError,
    PreconditionError,
    cost_curve,
    crawl,
    default_alpha_grid,
    pagerank,
    rank_indegree,
    rank_pagerank,
    rank_random,
    run_config,
    synthetic,
)

__all__ = [
    "ConfigError",
    "ConvergenceError",
    "DomainError",
    "Graph",
    "LiveRankError",
    "ParseError",
    "PreconditionError",
    "cost_curve",
    "crawl",
    "default_alpha_grid",
    "pagerank",
    "rank_indegree",
    "rank_pagerank",
    "rank_random",
    "run_config",
    "synthetic",
]
