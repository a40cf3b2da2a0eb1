#pragma once

#include <cstdint>
#include <functional>

namespace nimbus {

// Worker count used for data-parallel sections. Defaults to the hardware
// concurrency, capped by the NIMBUS_THREADS environment variable.
int worker_count();

// Runs fn(i) for i in [0, n). Results must be written to caller-owned,
// index-addressed storage so the outcome is independent of scheduling.
void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& fn);

}  // namespace nimbus
