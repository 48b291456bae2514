#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>

namespace qnnent {

/// Worker count used by library-internal loops. Defaults to the hardware concurrency.
int  thread_count();
void set_thread_count(int n);

/// Runs body(lo, hi) over a static partition of [begin, end). Chunks are disjoint,
/// so any per-index computation gives the same result for every thread count.
/// Ranges shorter than `min_parallel` run on the calling thread.
void parallel_for(std::uint64_t begin, std::uint64_t end,
                  const std::function<void(std::uint64_t, std::uint64_t)> &body, std::uint64_t min_parallel = 256);

/// Pairwise (balanced tree) sum with a fixed reduction order. Destroys `values`.
std::complex<double> pairwise_sum(std::span<std::complex<double>> values);

} // namespace qnnent
