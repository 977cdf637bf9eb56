#pragma once

#include <cstddef>
#include <functional>

namespace heatdml {

// Runs fn(i) for i in [0, n) on at most `jobs` threads (serial when jobs <= 1).
// fn must only write to per-index state; under that contract results are
// identical for every jobs value. The first exception thrown by any fn is
// rethrown after all workers finish.
void parallel_for(std::size_t n, int jobs,
                  const std::function<void(std::size_t)>& fn);

}  // namespace heatdml
