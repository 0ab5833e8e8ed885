#pragma once

// Multiplicative-function tables and prime sieves.
//
// Two tiers:
//   * PrimeSieve   — bit-packed primality to `limit`, built segment by
//                    segment (cache-sized blocks), cheap enough for limits
//                    around 2e8 (1 bit per integer).
//   * SieveTables  — full tables of mu, Lambda, phi and smallest prime
//                    factor via a linear sieve; ~17 bytes per integer, so
//                    intended for limits up to ~1e8 in-core.
//
// On top of these sit the W-trick quantities: W = product of primes <= w,
// and the prime-indicator von Mangoldt variant
//     lambda_w(n) = (phi(W)/W) * log(Wn+1)  if Wn+1 is prime, else 0,
// whose average over n <= N tends to 1 for fixed w.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace aplab {

// Bit-packed primality table on [0, limit], segmented construction.
class PrimeSieve {
 public:
  explicit PrimeSieve(std::uint64_t limit, std::uint64_t segment = 1u << 18);

  bool is_prime(std::uint64_t n) const {
    return n <= limit_ && (words_[n >> 6] >> (n & 63)) & 1;
  }
  std::uint64_t limit() const { return limit_; }

  // Primes in [lo, hi] in increasing order.
  std::vector<std::uint64_t> primes_in(std::uint64_t lo, std::uint64_t hi) const;

 private:
  std::uint64_t limit_;
  std::vector<std::uint64_t> words_;
};

// mu, Lambda, phi, smallest-prime-factor and primality on [0, limit].
struct SieveTables {
  std::uint64_t limit = 0;
  std::vector<std::uint8_t> is_prime;   // 0/1
  std::vector<std::int8_t> mobius;      // mu(n) in {-1,0,1}
  std::vector<double> mangoldt;         // Lambda(n) = log p on prime powers
  std::vector<std::uint32_t> totient;   // Euler phi
  std::vector<std::uint32_t> spf;       // smallest prime factor; spf[1] = 1

  bool prime(std::uint64_t n) const { return n <= limit && is_prime[n]; }

  // Distinct prime factors of 1 <= n <= limit via the spf table.
  std::vector<std::uint64_t> distinct_primes(std::uint64_t n) const;

  // Binary cache round-trip; layout documented in docs/formats.md.
  void save(const std::string& path) const;
  static SieveTables load(const std::string& path);
};

// Linear sieve filling all tables. Requires limit >= 2.
SieveTables build_tables(std::uint64_t limit);

// W-trick constants for a prime cutoff w.
struct WTrick {
  std::uint64_t w = 0;      // sieving cutoff (primes <= w enter W)
  std::uint64_t W = 1;      // primorial of w
  std::uint64_t phi_W = 1;  // phi(W) = prod (p-1)
};

// Product of primes <= w. Throws std::overflow_error once the product
// leaves the signed 64-bit range: the primorial through 47 is
// 614889782588491410, and including 53 overflows, so w <= 52 is the
// usable range.
WTrick make_wtrick(std::uint64_t w);

// lambda_w(n) as above. Requires W*n + 1 <= tables.limit.
double modified_mangoldt(std::uint64_t n, const WTrick& wt, const SieveTables& tables);

// Deterministic Miller-Rabin, exact for all 64-bit inputs.
bool is_prime_u64(std::uint64_t n);

}  // namespace aplab
