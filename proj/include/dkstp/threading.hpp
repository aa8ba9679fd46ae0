#pragma once

#include "dkstp/types.hpp"

#include <functional>

namespace dkstp {

// Runs fn(i) for every i in [0, n) using up to `threads` workers (0 means
// hardware concurrency).  Work is pre-partitioned into contiguous index
// ranges, so which worker runs an index never depends on timing; callers
// write results into preallocated slots and results are identical for any
// thread count.  The first exception thrown by any worker is rethrown.
void parallel_for(Index n, int threads, const std::function<void(Index)>& fn);

}  // namespace dkstp
