#pragma once

#include <cstdint>
#include <functional>

namespace dgsp {

/// Index-addressed parallel loop. fn(i) must touch only index-i state, so
/// results are identical for any worker count.
void parallel_for(std::int64_t count, int workers, const std::function<void(std::int64_t)>& fn);

}  // namespace dgsp
