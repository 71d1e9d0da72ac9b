#include "cpskit/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace cpskit::parallel {

namespace {

std::atomic<int> g_override{0};

int env_threads() {
  const char* text = std::getenv("CPSKIT_THREADS");
  if (text == nullptr) return 0;
  char* end = nullptr;
  const long value = std::strtol(text, &end, 10);
  if (end == text || value <= 0) return 0;
  return static_cast<int>(std::min<long>(value, 1024));
}

}  // namespace

int worker_count() {
  if (const int n = g_override.load(); n > 0) return n;
  if (const int n = env_threads(); n > 0) return n;
  return std::max(1u, std::thread::hardware_concurrency());
}

void set_worker_count(int n) { g_override.store(n > 0 ? n : 0); }

std::size_t chunk_count(std::size_t count, std::size_t grain) {
  grain = std::max<std::size_t>(grain, 1);
  return (count + grain - 1) / grain;
}

void for_chunks(std::size_t count, std::size_t grain,
                const std::function<void(std::size_t, std::size_t, std::size_t)>&
                    body) {
  grain = std::max<std::size_t>(grain, 1);
  const std::size_t chunks = chunk_count(count, grain);
  if (chunks == 0) return;
  const auto run = [&](std::size_t chunk) {
    const std::size_t begin = chunk * grain;
    body(chunk, begin, std::min(count, begin + grain));
  };
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(worker_count()), chunks);
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) run(c);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t c = next++; c < chunks; c = next++) {
        try {
          run(c);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

std::uint64_t mix64(std::uint64_t x) {
  // splitmix64 finalizer
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t random_bits(std::uint64_t seed, std::uint64_t index,
                          std::uint64_t lane) {
  return mix64(mix64(mix64(seed) ^ index) ^ (lane * 0xd1b54a32d192ed03ULL));
}

double uniform01(std::uint64_t seed, std::uint64_t index, std::uint64_t lane) {
  // 53 random mantissa bits, shifted off zero.
  const std::uint64_t bits = random_bits(seed, index, lane) >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double standard_normal(std::uint64_t seed, std::uint64_t index,
                       std::uint64_t lane) {
  const double u1 = uniform01(seed, index, 2 * lane);
  const double u2 = uniform01(seed, index, 2 * lane + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.141592653589793 * u2);
}

}  // namespace cpskit::parallel
