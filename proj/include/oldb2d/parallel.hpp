#pragma once

#include <cstddef>
#include <functional>

namespace oldb2d {

/// Worker cap: OLDB2D_THREADS if set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
int thread_limit();

/// Calls body(i) for i in [0, count) on up to thread_limit() threads. The
/// first exception thrown by any call is rethrown after all workers finish.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace oldb2d
