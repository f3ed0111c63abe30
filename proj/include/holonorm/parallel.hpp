#pragma once

#include <cstddef>
#include <functional>

namespace holonorm {

/// Worker count: hardware concurrency, capped by HOLONORM_THREADS when set.
unsigned worker_count();

/// Resolve a requested count (0 = automatic) against worker_count().
unsigned resolve_threads(unsigned requested);

/**
 * Run body(task, worker) for every task in [0, n_tasks) on `threads` workers.
 * Tasks are claimed in chunks from a shared counter, so the assignment of
 * tasks to workers is schedule-dependent; callers must reduce results in a
 * way that does not depend on it.
 */
void parallel_for(std::size_t n_tasks, unsigned threads,
                  const std::function<void(std::size_t task, unsigned worker)>& body);

}  // namespace holonorm
