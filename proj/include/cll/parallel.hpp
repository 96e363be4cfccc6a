#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace cll {

// Number of workers: explicit request > CLL_JOBS env > hardware concurrency.
int resolve_jobs(int requested);

// Runs fn(i) for i in [0, count) on `jobs` threads. Results must be written to
// preallocated slots indexed by i so output order is deterministic regardless
// of scheduling. The first exception thrown by any task is rethrown.
void parallel_for(int jobs, std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace cll
