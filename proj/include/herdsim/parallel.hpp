#pragma once

#include <cstddef>
#include <functional>

namespace herdsim {

/// Worker count from HERDSIM_THREADS, else hardware concurrency (at least 1).
std::size_t default_thread_count();

/// Calls `task(i)` for i in [0, n) on up to `threads` workers. Results must not depend
/// on scheduling: each task owns its own state. The first exception thrown is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& task,
                  std::size_t threads = default_thread_count());

}  // namespace herdsim
