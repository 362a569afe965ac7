#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace bsc {

// Global worker count used by the batch loops below. 1 = serial.
void set_thread_count(int n);
int thread_count();

// Runs fn(chunk_index) for chunk_index in [0, n_chunks). Chunks are fixed
// units of work (typically one grid plane or one table row), so the work
// performed per chunk does not depend on the thread count. Reductions must
// be done by the caller over per-chunk partials in chunk order; that keeps
// results bit-identical for any thread count.
void for_each_chunk(std::size_t n_chunks, const std::function<void(std::size_t)>& fn);

// Convenience: evaluates fn(i) -> double per chunk and sums partials in
// fixed chunk order.
double sum_over_chunks(std::size_t n_chunks, const std::function<double(std::size_t)>& fn);

}  // namespace bsc
