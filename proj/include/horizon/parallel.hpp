#pragma once

#include <cstddef>
#include <functional>

namespace horizon {

// Worker count: HORIZON_RISK_THREADS when set to a positive integer,
// otherwise the hardware concurrency (at least 1).
int worker_count();

// Calls body(k) for k in [0, count) on up to `workers` threads. Each index
// runs exactly once; the first exception thrown is rethrown after all
// workers finish.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& body);

}  // namespace horizon
