#pragma once

#include <cstddef>
#include <functional>

namespace infoot {

/// Worker cap: INFOOT_THREADS if set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
std::size_t thread_count();

/// Runs body(i) for i in [0, count), split into contiguous chunks across at
/// most thread_count() threads. Each index is visited exactly once, so any
/// body that writes only to slot i produces bitwise identical output
/// regardless of the thread count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace infoot
