#pragma once

#include <cstddef>
#include <functional>

namespace npe {

/// Worker count used by parallel_for (default 1). Values below 1 clamp to 1.
void set_thread_count(int threads);
int thread_count() noexcept;

/// Calls body(i) for i in [0, n) on up to thread_count() threads. Indices
/// are handed out dynamically; results must be stored per index so that
/// output does not depend on scheduling. The first exception is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace npe
