#pragma once

#include <cstddef>
#include <functional>

namespace liverank {

/// Environment variable that overrides the worker count.
inline constexpr const char* kWorkersEnv = "LIVERANK_WORKERS";

/// Workers to use: LIVERANK_WORKERS when set and positive, else the number of
/// hardware threads (at least 1).
std::size_t default_worker_count();

/**
 * Runs body(begin, end) over fixed-size blocks of [0, count). Block boundaries
 * depend only on count and block_size, never on the worker count, so callers
 * that reduce per block get identical results for any number of workers.
 */
void parallel_blocks(std::size_t count, std::size_t block_size, std::size_t workers,
                     const std::function<void(std::size_t block, std::size_t begin,
                                              std::size_t end)>& body);

/// Runs task(i) for i in [0, count) on up to `workers` threads.
void parallel_tasks(std::size_t count, std::size_t workers,
                    const std::function<void(std::size_t)>& task);

}  // namespace liverank
