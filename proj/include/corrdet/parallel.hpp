#pragma once

#include <cstddef>
#include <functional>

namespace corrdet {

/// Worker count used when 0 is requested.
unsigned default_workers();

/// Calls fn(k) for k in [0, count), split into contiguous static chunks over
/// `workers` threads. The first exception (by chunk order) is rethrown after
/// all threads join.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& fn);

}  // namespace corrdet
