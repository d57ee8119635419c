#pragma once

#include <cstddef>
#include <functional>

namespace ugraphon {

/// Worker count from UGRAPHON_THREADS (default 1).
std::size_t thread_count();

/// Runs body(i) for i in [0, n) on thread_count() workers. Each index is
/// handled exactly once; the first exception is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace ugraphon
