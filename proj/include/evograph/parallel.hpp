#pragma once

#include <cstddef>
#include <functional>

namespace evograph {

int clamp_threads(int requested);

// Runs fn(i) for i in [0, n). Tasks are claimed dynamically by up to
// `threads` workers; the call returns after every task finished. The first
// exception thrown by a task is rethrown on the caller's thread. Callers are
// responsible for making results independent of execution order.
void parallel_tasks(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace evograph
