#include "aplab/sieve.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <stdexcept>

namespace aplab {

PrimeSieve::PrimeSieve(std::uint64_t limit, std::uint64_t segment) : limit_(limit) {
  words_.assign(limit / 64 + 1, 0);
  if (limit < 2) return;
  if (segment < 64) segment = 64;

  // Sieving primes up to sqrt(limit) by a plain odd-only Eratosthenes.
  std::uint64_t root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(limit))) + 1;
  while (root * root > limit + 1) --root;
  std::vector<std::uint8_t> small(root + 1, 1);
  std::vector<std::uint64_t> base;
  for (std::uint64_t p = 2; p <= root; ++p) {
    if (!small[p]) continue;
    base.push_back(p);
    for (std::uint64_t q = p * p; q <= root; q += p) small[q] = 0;
  }

  std::vector<std::uint8_t> seg;
  for (std::uint64_t lo = 2; lo <= limit; lo += segment) {
    std::uint64_t hi = std::min(limit, lo + segment - 1);
    seg.assign(hi - lo + 1, 1);
    for (std::uint64_t p : base) {
      if (p * p > hi) break;
      std::uint64_t start = std::max(p * p, ((lo + p - 1) / p) * p);
      for (std::uint64_t q = start; q <= hi; q += p) seg[q - lo] = 0;
    }
    for (std::uint64_t n = lo; n <= hi; ++n)
      if (seg[n - lo]) words_[n >> 6] |= 1ULL << (n & 63);
  }
}

std::vector<std::uint64_t> PrimeSieve::primes_in(std::uint64_t lo, std::uint64_t hi) const {
  std::vector<std::uint64_t> out;
  hi = std::min(hi, limit_);
  for (std::uint64_t n = std::max<std::uint64_t>(lo, 2); n <= hi; ++n)
    if (is_prime(n)) out.push_back(n);
  return out;
}

SieveTables build_tables(std::uint64_t limit) {
  if (limit < 2) throw std::invalid_argument("build_tables: limit must be >= 2");
  SieveTables t;
  t.limit = limit;
  t.is_prime.assign(limit + 1, 0);
  t.mobius.assign(limit + 1, 0);
  t.mangoldt.assign(limit + 1, 0.0);
  t.totient.assign(limit + 1, 0);
  t.spf.assign(limit + 1, 0);

  // Linear (Euler) sieve: each composite is crossed once via its smallest
  // prime factor, giving spf, mu and phi by the standard recurrences.
  std::vector<std::uint32_t> primes;
  std::vector<std::uint8_t> prime_power(limit + 1, 0);  // n == p^k?
  t.mobius[1] = 1;
  t.totient[1] = 1;
  t.spf[1] = 1;
  for (std::uint64_t n = 2; n <= limit; ++n) {
    if (t.spf[n] == 0) {
      t.spf[n] = static_cast<std::uint32_t>(n);
      t.is_prime[n] = 1;
      t.mobius[n] = -1;
      t.totient[n] = static_cast<std::uint32_t>(n - 1);
      prime_power[n] = 1;
      primes.push_back(static_cast<std::uint32_t>(n));
    }
    for (std::uint32_t p : primes) {
      if (p > t.spf[n] || p * static_cast<std::uint64_t>(n) > limit) break;
      std::uint64_t m = p * static_cast<std::uint64_t>(n);
      t.spf[m] = p;
      if (n % p == 0) {
        t.mobius[m] = 0;
        t.totient[m] = static_cast<std::uint32_t>(t.totient[n] * static_cast<std::uint64_t>(p));
        prime_power[m] = prime_power[n];  // p * p^k = p^{k+1}
      } else {
        t.mobius[m] = static_cast<std::int8_t>(-t.mobius[n]);
        t.totient[m] = static_cast<std::uint32_t>(t.totient[n] * static_cast<std::uint64_t>(p - 1));
        prime_power[m] = 0;
      }
    }
  }
  for (std::uint64_t n = 2; n <= limit; ++n)
    if (prime_power[n]) t.mangoldt[n] = std::log(static_cast<double>(t.spf[n]));
  return t;
}

std::vector<std::uint64_t> SieveTables::distinct_primes(std::uint64_t n) const {
  if (n < 1 || n > limit) throw std::out_of_range("distinct_primes: n outside table");
  std::vector<std::uint64_t> ps;
  while (n > 1) {
    std::uint64_t p = spf[n];
    ps.push_back(p);
    while (n % p == 0) n /= p;
  }
  return ps;
}

WTrick make_wtrick(std::uint64_t w) {
  if (w < 2) throw std::invalid_argument("make_wtrick: w must be >= 2");
  WTrick wt;
  wt.w = w;
  std::vector<std::uint8_t> small(w + 1, 1);
  for (std::uint64_t p = 2; p <= w; ++p) {
    if (!small[p]) continue;
    for (std::uint64_t q = p * p; q <= w; q += p) small[q] = 0;
    if (wt.W > UINT64_MAX / p || wt.W * p > static_cast<std::uint64_t>(INT64_MAX))
      throw std::overflow_error("make_wtrick: primorial exceeds 64-bit range at p=" + std::to_string(p));
    wt.W *= p;
    wt.phi_W *= (p - 1);
  }
  return wt;
}

double modified_mangoldt(std::uint64_t n, const WTrick& wt, const SieveTables& tables) {
  if (n > (tables.limit - 1) / wt.W) throw std::out_of_range("modified_mangoldt: W*n+1 exceeds table limit");
  std::uint64_t m = wt.W * n + 1;
  if (!tables.is_prime[m]) return 0.0;
  return static_cast<double>(wt.phi_W) / static_cast<double>(wt.W) * std::log(static_cast<double>(m));
}

namespace {

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod_u64(r, a, m);
    a = mulmod_u64(a, a, m);
    e >>= 1;
  }
  return r;
}

}  // namespace

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) d >>= 1, ++s;
  // This base set is a proven deterministic witness set for all n < 3.3e24.
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = powmod_u64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod_u64(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

namespace {

constexpr char kSieveMagic[8] = {'A', 'P', 'S', 'I', 'E', 'V', 'E', '1'};
constexpr std::uint32_t kSieveVersion = 1;

void write_bytes(std::FILE* f, const void* p, std::size_t n) {
  if (std::fwrite(p, 1, n, f) != n) throw std::runtime_error("sieve cache: short write");
}

void read_bytes(std::FILE* f, void* p, std::size_t n) {
  if (std::fread(p, 1, n, f) != n) throw std::runtime_error("sieve cache: short read");
}

}  // namespace

void SieveTables::save(const std::string& path) const {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw std::runtime_error("sieve cache: cannot open " + path);
  try {
    write_bytes(f, kSieveMagic, 8);
    write_bytes(f, &kSieveVersion, 4);
    std::uint64_t lim = limit;
    write_bytes(f, &lim, 8);
    write_bytes(f, is_prime.data(), is_prime.size());
    write_bytes(f, mobius.data(), mobius.size());
    write_bytes(f, mangoldt.data(), mangoldt.size() * 8);
    write_bytes(f, totient.data(), totient.size() * 4);
    write_bytes(f, spf.data(), spf.size() * 4);
  } catch (...) {
    std::fclose(f);
    throw;
  }
  std::fclose(f);
}

SieveTables SieveTables::load(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) throw std::runtime_error("sieve cache: cannot open " + path);
  SieveTables t;
  try {
    char magic[8];
    std::uint32_t version;
    read_bytes(f, magic, 8);
    if (std::memcmp(magic, kSieveMagic, 8) != 0) throw std::runtime_error("sieve cache: bad magic");
    read_bytes(f, &version, 4);
    if (version != kSieveVersion) throw std::runtime_error("sieve cache: unsupported version");
    read_bytes(f, &t.limit, 8);
    std::size_t n = t.limit + 1;
    t.is_prime.resize(n);
    t.mobius.resize(n);
    t.mangoldt.resize(n);
    t.totient.resize(n);
    t.spf.resize(n);
    read_bytes(f, t.is_prime.data(), n);
    read_bytes(f, t.mobius.data(), n);
    read_bytes(f, t.mangoldt.data(), n * 8);
    read_bytes(f, t.totient.data(), n * 4);
    read_bytes(f, t.spf.data(), n * 4);
  } catch (...) {
    std::fclose(f);
    throw;
  }
  std::fclose(f);
  return t;
}

}  // namespace aplab
