#pragma once

#include <cstddef>
#include <functional>

namespace zeta_ladder {

/// std::thread::hardware_concurrency(), at least 1.
[[nodiscard]] unsigned default_threads() noexcept;

/// Runs body(i) for i in [0, n) on up to `threads` workers (0 = default).
/// Indices are split into contiguous blocks; the first exception thrown by
/// any worker is rethrown on the calling thread after all workers join.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace zeta_ladder
