#pragma once

#include <cstddef>
#include <functional>

namespace mslab {

// Process-wide worker count used by parallel_for; 1 means serial.
void set_thread_count(unsigned n);
unsigned thread_count();

// Runs body(i) for i in [0, n), split into contiguous chunks over the worker
// pool. Each index is visited exactly once, so bodies that only write slot i
// give results independent of the thread count. Nested calls run serially.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace mslab
