#pragma once

#include <cstddef>
#include <functional>

namespace frd {

/// Number of workers to use when the caller passes 0: FRD_WORKERS if set,
/// otherwise the hardware concurrency.
std::size_t default_worker_count();

/// Calls body(i) for every i in [0, count) on up to `workers` threads.
/// Each index is visited exactly once; callers write into preallocated slots,
/// so results never depend on scheduling. The first exception thrown by any
/// body is rethrown after all threads join.
void parallel_for(std::size_t count, std::size_t workers,
                  const std::function<void(std::size_t)>& body);

}  // namespace frd
