#pragma once

#include <cstddef>
#include <functional>

namespace kerrchaos {

// Name of the environment variable that sets the worker count for sweeps.
inline constexpr const char* kThreadsEnv = "KERRCHAOS_THREADS";

/// Worker count from KERRCHAOS_THREADS, else hardware concurrency (>= 1).
std::size_t default_thread_count();

/// Calls body(i) for i in [0, count) on up to `threads` workers. Each index is
/// visited exactly once; the first exception thrown by any call is rethrown.
void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace kerrchaos
