#pragma once

#include <cstddef>
#include <functional>

namespace vortlab {

/// Worker count used by parallel_for. Defaults to 1.
int thread_count();
void set_thread_count(int threads);

/// Runs body(i) for i in [0, count). Each index is handled by exactly one worker, so
/// results written to per-index slots do not depend on the thread count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

} // namespace vortlab
