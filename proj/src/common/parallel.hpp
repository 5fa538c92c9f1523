#pragma once

#include <cstddef>
#include <functional>

namespace facekit {

// Splits [0, n) into contiguous chunks, one worker thread per chunk.
// Workers write disjoint outputs only; any cross-item reduction must happen
// after the join, in index order, so results do not depend on thread count.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t, std::size_t)>& body);

int default_thread_count();

}  // namespace facekit
