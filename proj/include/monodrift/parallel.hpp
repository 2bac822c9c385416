// Index-parallel work with deterministic results: workers pull indices from
// a shared counter, each index writes only its own slot, and reductions are
// performed afterwards in index order.

#pragma once

#include <cstdint>
#include <functional>

namespace monodrift {

void parallel_for(std::int64_t n, int workers, const std::function<void(std::int64_t)>& fn);

}  // namespace monodrift
