#ifndef SURFFV_PARALLEL_HPP
#define SURFFV_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace surffv {

// Worker count for data-parallel loops: min(hardware, SURFFV_THREADS).
// SURFFV_THREADS=1 forces serial execution.
int worker_count();

// Runs fn(i) for i in [0, n). Iterations must be independent; results must be
// written to disjoint, preallocated slots so the outcome is identical in
// serial and parallel runs. Small ranges are executed serially.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace surffv

#endif
