#pragma once

// Shared plumbing: reproducible RNG streams and a deterministic chunked
// parallel-for.  Everything here is chosen so that results are bitwise
// independent of the number of worker threads: work is split into a fixed
// chunk grid, each chunk produces its own partial result, and partials are
// merged in chunk order on the calling thread.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

namespace aplab {

// SplitMix64 step; used only to expand user seeds into stream seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Independent generator for stream `stream_id` of a user-visible seed.
inline std::mt19937_64 make_stream_rng(std::uint64_t seed, std::uint64_t stream_id) {
  std::uint64_t s = seed;
  (void)splitmix64(s);
  s ^= 0x5851f42d4c957f2dULL * (stream_id + 1);
  std::uint64_t a = splitmix64(s), b = splitmix64(s);
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return std::mt19937_64(seq);
}

// Uniform draw from [0, n) by rejection; bit-reproducible everywhere
// (std::uniform_int_distribution is implementation-defined).
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("uniform_below: n must be positive");
  const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
  for (;;) {
    std::uint64_t x = rng();
    if (x >= threshold) return x % n;
  }
}

// Runs fn(chunk_index, begin, end) over [0, n) split into fixed-size chunks.
// The chunk grid depends only on n and chunk_count, never on `threads`, so
// any per-chunk outputs can be merged deterministically by the caller.
inline void parallel_chunks(std::uint64_t n, unsigned threads, std::uint64_t chunk_count,
                            const std::function<void(std::uint64_t, std::uint64_t, std::uint64_t)>& fn) {
  if (n == 0) return;
  if (chunk_count == 0 || chunk_count > n) chunk_count = n;
  if (threads == 0) threads = 1;
  const std::uint64_t base = n / chunk_count, rem = n % chunk_count;
  auto chunk_bounds = [&](std::uint64_t c) {
    std::uint64_t lo = c * base + std::min<std::uint64_t>(c, rem);
    std::uint64_t hi = lo + base + (c < rem ? 1 : 0);
    return std::pair<std::uint64_t, std::uint64_t>{lo, hi};
  };
  if (threads == 1 || chunk_count == 1) {
    for (std::uint64_t c = 0; c < chunk_count; ++c) {
      auto [lo, hi] = chunk_bounds(c);
      fn(c, lo, hi);
    }
    return;
  }
  std::atomic<std::uint64_t> next{0};
  auto worker = [&]() {
    for (;;) {
      std::uint64_t c = next.fetch_add(1);
      if (c >= chunk_count) return;
      auto [lo, hi] = chunk_bounds(c);
      fn(c, lo, hi);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

inline std::int64_t mod_reduce(std::int64_t v, std::int64_t n) {
  std::int64_t r = v % n;
  return r < 0 ? r + n : r;
}

}  // namespace aplab
