#pragma once

#include <cstddef>
#include <functional>

namespace wedge {

// Worker-count resolution: an explicit request wins, then the
// WEDGE_WORKERS environment variable, then the hardware thread count.
// Always returns at least 1.
int resolve_workers(int requested) noexcept;

// Runs fn(begin, end) over a static partition of [0, n) into contiguous
// ranges of at least min_chunk elements, at most `workers` of them, each
// on its own thread. Exceptions from workers are rethrown on the caller.
void parallel_ranges(std::size_t n, std::size_t min_chunk, int workers,
                     const std::function<void(std::size_t, std::size_t)>& fn);

// Runs fn(chunk_index) for chunk_index in [0, num_chunks) on a pool of
// `workers` threads. Chunk-to-thread assignment is unspecified; callers
// must key all output on the chunk index so results do not depend on
// scheduling.
void parallel_chunks(std::size_t num_chunks, int workers,
                     const std::function<void(std::size_t)>& fn);

}  // namespace wedge
