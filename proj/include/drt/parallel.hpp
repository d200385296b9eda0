#pragma once

#include <cstddef>
#include <functional>

namespace drt {

/// 0 selects the hardware concurrency (at least 1).
unsigned resolve_threads(unsigned requested);

/// Runs body(i) for i in [0, n) on up to `threads` workers. Each index runs
/// exactly once; if any call throws, the exception of the lowest failing index
/// is rethrown after all workers finish.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace drt
