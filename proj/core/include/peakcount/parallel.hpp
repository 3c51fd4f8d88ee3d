#pragma once

#include <cstddef>
#include <functional>

namespace peakcount {

/// Number of worker threads to use for stage parallelism.
/// Respects the PEAKCOUNT_THREADS environment variable (clamped to [1, hw]).
std::size_t thread_cap();

/// Runs fn(i) for i in [0, n). Tasks must be independent; results should be
/// written to preallocated slots so the outcome is deterministic regardless
/// of scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace peakcount
