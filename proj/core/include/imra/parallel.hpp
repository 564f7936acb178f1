#pragma once

#include <cstddef>
#include <functional>

namespace imra {

/// Worker count for internal loops: IMRA_THREADS when set to a positive
/// value, otherwise the hardware concurrency (IMRA_THREADS=0 means auto).
int thread_count();

/// Runs body(begin, end) over a partition of [0, n). Blocks until done;
/// the first exception thrown by any chunk is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body,
                  std::size_t min_chunk = 64);

}  // namespace imra
