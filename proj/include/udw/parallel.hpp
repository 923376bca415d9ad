#pragma once

#include <cstddef>
#include <functional>

namespace udw {

// 0 or negative requests one worker per hardware thread.
int resolve_threads(int requested);

// Runs body(0..n-1) on up to `threads` workers. Indices are handed out in
// order; the first exception thrown by any body is rethrown after all
// workers have stopped.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body);

}  // namespace udw
