#pragma once

#include <cstddef>
#include <functional>

namespace cuspsieve {

// Process-wide worker count used by parallel_for. Defaults to 1.
void set_thread_count(unsigned n);
unsigned thread_count();

// Runs body(i) for i in [begin, end). The range is cut into contiguous
// chunks, one per worker, so every index is always handled by the same
// chunk for a given thread count. Bodies must only write to slots they own.
void parallel_for(std::size_t begin, std::size_t end,
                  const std::function<void(std::size_t)>& body);

}  // namespace cuspsieve
