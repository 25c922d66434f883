#pragma once

#include <cstddef>
#include <functional>

namespace sortnetc {

/// Worker count: hardware concurrency capped by the SORTNETC_THREADS
/// environment variable when it is set to a positive integer.
std::size_t worker_count();

/// Runs body(i) for i in [0, count) across worker_count() threads in
/// contiguous chunks. Exceptions from workers are rethrown on the caller.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace sortnetc
