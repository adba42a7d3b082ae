#pragma once

#include <cstddef>
#include <functional>

namespace signforge::util {

/// Worker cap: min(hardware_concurrency, SIGNFORGE_THREADS if set).
std::size_t worker_count();

/// Runs fn(i) for i in [0, n). Work is split into contiguous chunks over at
/// most worker_count() threads. Each index must be independent; results must
/// be written to preassigned slots so parallelism never changes outputs.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace signforge::util
