#pragma once

#include <cstddef>
#include <functional>

namespace eulerlab {

// Number of worker threads used when a call passes workers == 0.
// Defaults to std::thread::hardware_concurrency().
unsigned default_workers();
void set_default_workers(unsigned workers);

// Runs body(i) for i in [0, count). Indices are split into contiguous
// blocks, one per worker; callers write results into per-index slots so the
// outcome does not depend on the worker count. The first exception thrown by
// any body is rethrown on the calling thread.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                  unsigned workers = 0);

}  // namespace eulerlab
