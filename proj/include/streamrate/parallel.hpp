#pragma once

#include <cstddef>
#include <functional>

namespace streamrate {

/// Worker count: hardware concurrency, capped by STREAMRATE_THREADS when set.
unsigned thread_count();

/// Runs body(i) for i in [0, n). Each index is visited exactly once; callers
/// write results into per-index slots so the outcome is independent of the
/// thread schedule.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace streamrate
