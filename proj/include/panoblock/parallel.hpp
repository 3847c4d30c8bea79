#pragma once

#include <cstddef>
#include <functional>

namespace panoblock {

// Runs fn(i) for i in [0, n) across worker threads. jobs <= 0 uses the
// hardware concurrency. Indices are split into contiguous chunks, so output
// written to disjoint per-index locations is deterministic regardless of the
// worker count. The first exception thrown by any worker is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, int jobs = 0);

}  // namespace panoblock
