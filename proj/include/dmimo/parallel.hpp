#pragma once

#include <cstddef>
#include <functional>

namespace dmimo {

// Worker-count resolution order: programmatic override, then the SIM_WORKERS
// environment variable, then hardware concurrency.
void set_worker_override(int workers);  // 0 clears the override
int worker_count();

// Blocking loop over [0, n). Work is split into contiguous chunks; results
// must be written to per-index slots so the outcome is independent of the
// worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace dmimo
