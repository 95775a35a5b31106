#ifndef FBU_PARALLEL_HPP
#define FBU_PARALLEL_HPP

#include <cstddef>
#include <functional>

// Deterministic work sharing: every index range is assigned to exactly one
// worker by a static partition, and workers never reduce across ranges, so
// results are bitwise identical for any thread count.

namespace fbu {

/// Global worker count used by parallel_for (default 1). Set once from the
/// CLI --threads flag before solvers run.
void set_thread_count(int n);
int thread_count();

/// Runs fn(begin, end) over a static contiguous partition of [0, n).
/// fn must only write to outputs indexed inside its own [begin, end).
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace fbu

#endif
