#pragma once

#include <cstddef>
#include <functional>

namespace lucid {

/// Runs body(i) for i in [0, count) on up to `threads` threads and returns
/// once all calls finished. Results must be written to per-index slots; the
/// caller merges them in index order, which keeps outcomes independent of
/// the thread count. Exceptions from body are rethrown (first one wins).
void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace lucid
