#pragma once

#include <cstdint>
#include <functional>

namespace gembed {

// Global cap on worker threads. 0 means hardware concurrency.
// Initialized from the GEMBED_THREADS environment variable.
void set_max_threads(int n);
int max_threads();

// Runs fn(begin, end) on contiguous index ranges covering [0, n).
// Every index is processed exactly once by exactly one thread, so results
// must not depend on the partition; callers only write disjoint outputs.
void parallel_for(std::int64_t n, const std::function<void(std::int64_t, std::int64_t)>& fn);

} // namespace gembed
