#pragma once

#include <cstddef>
#include <functional>

namespace fundval {

// Process-wide worker count used by parallel_for. 0 selects
// std::thread::hardware_concurrency().
void set_thread_count(unsigned n);
unsigned thread_count();

// Runs body(i) for every i in [begin, end), split into contiguous chunks
// across worker threads. Callers write results into per-index slots and
// reduce them sequentially afterwards, so output never depends on the
// worker count.
void parallel_for(std::size_t begin, std::size_t end,
                  const std::function<void(std::size_t)>& body);

}  // namespace fundval
