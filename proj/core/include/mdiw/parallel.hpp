#pragma once

#include <cstddef>
#include <functional>

namespace mdiw {

/// Worker cap: MDIW_NUM_THREADS when set and positive, otherwise the
/// hardware concurrency.
int max_threads();

/// Runs fn(i) for i in [0, n) across up to max_threads() workers. Callers
/// write results into preallocated index-addressed storage, so output order
/// never depends on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace mdiw
