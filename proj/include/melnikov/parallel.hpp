#pragma once

#include <cstddef>
#include <functional>

namespace melnikov {

/// Worker count: MELNIKOV_THREADS if set and positive, else hardware concurrency.
unsigned thread_count();

/// Runs body(i) for i in [0, n) on thread_count() workers. Results must be
/// written to per-index slots; the first exception thrown is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace melnikov
