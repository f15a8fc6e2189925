#pragma once

#include <cstddef>
#include <functional>

namespace synthbench {

// Process-wide worker budget for data-parallel kernels. 0 = hardware
// concurrency. All kernels write to pre-indexed slots or combine commutative
// integer sums, so results are identical for any worker count.
void set_worker_budget(unsigned workers);
unsigned worker_budget();
unsigned effective_workers(std::size_t n);

// Run fn over [0, n) split into contiguous blocks, one per worker.
void parallel_for_blocks(std::size_t n, const std::function<void(std::size_t begin, std::size_t end)>& fn);

}  // namespace synthbench
