#pragma once

#include <cstddef>
#include <functional>

namespace arena {

/// Worker count: hardware concurrency, capped by HARL_ARENA_THREADS when set.
std::size_t worker_count();

/// Runs fn(i) for i in [0, n) across worker threads. Work items must write
/// disjoint data; callers merge results by index so output never depends on
/// the worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace arena
