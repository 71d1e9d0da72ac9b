#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

namespace cpskit::parallel {

/// Worker count: explicit override if set, else CPSKIT_THREADS, else the
/// hardware concurrency (at least 1).
int worker_count();

/// Overrides the worker count for this process; n <= 0 restores the default.
void set_worker_count(int n);

/// Runs body(begin, end) over contiguous chunks of [0, count). Chunking is a
/// function of `count` and `grain` only, never of the worker count, so any
/// per-chunk partial result is reproducible.
void for_chunks(std::size_t count, std::size_t grain,
                const std::function<void(std::size_t chunk, std::size_t begin,
                                         std::size_t end)>& body);

std::size_t chunk_count(std::size_t count, std::size_t grain);

// Counter-based random numbers: every (seed, index, lane) triple maps to a
// fixed value, so Monte Carlo samples do not depend on scheduling.
std::uint64_t mix64(std::uint64_t x);
std::uint64_t random_bits(std::uint64_t seed, std::uint64_t index,
                          std::uint64_t lane);
/// Uniform on the open interval (0, 1).
double uniform01(std::uint64_t seed, std::uint64_t index, std::uint64_t lane);
/// Standard normal via Box-Muller on lanes (2*lane, 2*lane+1).
double standard_normal(std::uint64_t seed, std::uint64_t index,
                       std::uint64_t lane = 0);

}  // namespace cpskit::parallel
