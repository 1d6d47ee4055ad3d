#pragma once

#include <cstddef>
#include <functional>

namespace coca {

// Worker count: COCA_LAB_THREADS if set (>=1), else hardware concurrency.
int max_threads();

// Runs body(i) for i in [0, n). Contiguous chunk per worker; callers must
// only write disjoint outputs. Numerical results never depend on the worker
// count because each index is processed identically wherever it lands.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

// Chunked variant for bodies that want a [begin, end) range.
void parallel_for_chunks(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace coca
