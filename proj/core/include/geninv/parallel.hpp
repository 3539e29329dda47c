#pragma once

#include <cstddef>
#include <functional>

namespace geninv {

/// Worker count used by parallel_for: hardware concurrency, capped by the
/// GENINV_LAB_THREADS environment variable when set.
unsigned max_threads();

/// Runs fn(i) for i in [0, n) over contiguous chunks. Each index writes only
/// its own slot, so results do not depend on the worker count. If any call
/// throws, the exception from the smallest index is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace geninv
