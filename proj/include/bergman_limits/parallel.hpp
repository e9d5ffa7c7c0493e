#pragma once

// Deterministic chunked parallelism. Work is split into chunks whose boundaries do not
// depend on the thread count; callers combine per-chunk results in chunk order, so
// results are bit-identical for any number of threads.

#include <cstddef>
#include <functional>

namespace bl {

/// Threads used by parallel_chunks. 0 means: BERGMAN_LIMITS_THREADS, else hardware concurrency.
void set_thread_count(int n);
int thread_count();

/// Calls fn(chunk) for chunk in [0, chunks).
void parallel_chunks(size_t chunks, const std::function<void(size_t)>& fn);

inline size_t chunk_count(size_t n, size_t chunk) { return (n + chunk - 1) / chunk; }

}  // namespace bl
