#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <vector>

namespace ragloop::util {

/// Calls `fn(i)` for i in [0, n) on up to `workers` threads. Indices are
/// handed out in ascending order; once `cancel` is set no new index starts.
/// Returns which indices ran. The first exception thrown by `fn` is rethrown
/// after all threads join.
std::vector<bool> parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& fn,
                               const std::atomic<bool>* cancel = nullptr);

} // namespace ragloop::util
