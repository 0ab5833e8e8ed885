#include "aplab/primes_ap.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <json.hpp>

#include "aplab/cutoff.hpp"
#include "aplab/majorant.hpp"
#include "aplab/util.hpp"

namespace aplab {

namespace {

std::vector<std::uint64_t> primes_up_to(std::uint64_t limit, const SieveTables& tables) {
  if (tables.limit < limit) throw std::out_of_range("primes_ap: tables must cover the limit");
  std::vector<std::uint64_t> primes;
  for (std::uint64_t n = 2; n <= limit; ++n) {
    if (tables.is_prime[n]) primes.push_back(n);
  }
  return primes;
}

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t powmod_u64(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t acc = 1 % m;
  base %= m;
  while (exp) {
    if (exp & 1u) acc = mulmod_u64(acc, base, m);
    base = mulmod_u64(base, base, m);
    exp >>= 1;
  }
  return acc;
}

std::uint64_t isqrt_u64(std::uint64_t n) {
  std::uint64_t r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

void require_ap_args(std::uint64_t limit, int k, const SieveTables& tables, const char* who) {
  if (k < 3) throw std::invalid_argument(std::string(who) + ": k must be >= 3");
  if (tables.limit < limit) {
    throw std::out_of_range(std::string(who) + ": tables must cover the limit");
  }
}

}  // namespace

std::uint64_t count_prime_aps(std::uint64_t limit, int k, const SieveTables& tables,
                              unsigned threads) {
  require_ap_args(limit, k, tables, "count_prime_aps");
  const std::vector<std::uint64_t> primes = primes_up_to(limit, tables);
  const std::uint64_t span = static_cast<std::uint64_t>(k - 1);

  constexpr std::uint64_t kChunks = 128;
  std::vector<std::uint64_t> partial(kChunks, 0);
  parallel_chunks(primes.size(), threads, kChunks,
                  [&](std::uint64_t chunk, std::uint64_t lo, std::uint64_t hi) {
                    std::uint64_t local = 0;
                    for (std::uint64_t i = lo; i < hi; ++i) {
                      const std::uint64_t first = primes[i];
                      for (std::size_t j = i + 1; j < primes.size(); ++j) {
                        const std::uint64_t d = primes[j] - first;
                        if (first + span * d > limit) break;
                        bool ok = true;
                        std::uint64_t term = primes[j];
                        for (int s = 2; s < k; ++s) {
                          term += d;
                          if (!tables.is_prime[term]) {
                            ok = false;
                            break;
                          }
                        }
                        local += ok ? 1 : 0;
                      }
                    }
                    partial[chunk] = local;
                  });
  std::uint64_t total = 0;
  for (std::uint64_t c : partial) total += c;
  return total;
}

PrimeApCountRow prime_ap_count_row(std::uint64_t limit, int k, const SieveTables& tables,
                                   unsigned threads) {
  PrimeApCountRow row;
  row.limit = limit;
  row.k = k;
  row.count = count_prime_aps(limit, k, tables, threads);
  const double n = static_cast<double>(limit);
  row.scale = n * n / std::pow(std::log(n), k);
  row.ratio = static_cast<double>(row.count) / row.scale;
  return row;
}

void save_count_rows_csv(const std::vector<PrimeApCountRow>& rows, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw std::runtime_error("save_count_rows_csv: cannot open " + path);
  bool ok = std::fputs("N,k,count,scale,ratio\r\n", f) >= 0;
  for (const PrimeApCountRow& row : rows) {
    if (!ok) break;
    ok = std::fprintf(f, "%" PRIu64 ",%d,%" PRIu64 ",%.17g,%.17g\r\n", row.limit, row.k,
                      row.count, row.scale, row.ratio) > 0;
  }
  std::fclose(f);
  if (!ok) throw std::runtime_error("save_count_rows_csv: short write to " + path);
}

namespace {

// Lifts a supported residue progression (x, x+d, ..., x+(k-1)d mod N,
// all inside the window [ceil(N/2), N)) to its ascending integer form
// and checks the claims that make it an honest prime progression.
// These hold unconditionally for a correctly built window, so any failure
// is a defect: std::logic_error.
void verify_supported_ap(std::int64_t N, int k, const WTrick& wt, std::uint64_t x,
                         std::uint64_t d, std::vector<std::uint64_t>* residues_out,
                         std::vector<std::uint64_t>* primes_out) {
  const std::uint64_t n = static_cast<std::uint64_t>(N);
  const std::uint64_t lo = (n + 1) / 2;
  const std::int64_t step_centered =
      d <= (n - 1) / 2 ? static_cast<std::int64_t>(d)
                       : static_cast<std::int64_t>(d) - static_cast<std::int64_t>(n);
  std::vector<std::uint64_t> res(static_cast<std::size_t>(k));
  std::uint64_t r = x;
  for (int j = 0; j < k; ++j) {
    if (r < lo || r >= n) throw std::logic_error("weighted_ap_density_lambda: support outside window");
    res[static_cast<std::size_t>(j)] = r;
    r += d;
    if (r >= n) r -= n;
  }
  for (int j = 0; j + 1 < k; ++j) {
    const std::int64_t diff = static_cast<std::int64_t>(res[static_cast<std::size_t>(j + 1)]) -
                              static_cast<std::int64_t>(res[static_cast<std::size_t>(j)]);
    if (diff != step_centered) {
      throw std::logic_error("weighted_ap_density_lambda: residues wrap around the window");
    }
  }
  if (step_centered < 0) std::reverse(res.begin(), res.end());
  const std::uint64_t start = res.front();
  const std::uint64_t step = res[1] - res[0];
  if (step == 0 || start < lo || start + static_cast<std::uint64_t>(k - 1) * step >= n) {
    throw std::logic_error("weighted_ap_density_lambda: lifted progression leaves [N/2, N)");
  }
  std::vector<std::uint64_t> lifted(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) {
    const std::uint64_t value = wt.W * res[static_cast<std::size_t>(j)] + 1;
    if (!is_prime_u64(value)) {
      throw std::logic_error("weighted_ap_density_lambda: lifted term fails primality");
    }
    lifted[static_cast<std::size_t>(j)] = value;
  }
  if (residues_out) *residues_out = std::move(res);
  if (primes_out) *primes_out = std::move(lifted);
}

}  // namespace

WeightedApDensityReport weighted_ap_density_lambda(std::int64_t N, int k, std::uint64_t w,
                                                   const SieveTables& tables, unsigned threads) {
  if (k < 3) throw std::invalid_argument("weighted_ap_density_lambda: k must be >= 3");
  const MajorantParams params =
      MajorantParams::asymptotic_defaults(N, k, w, smooth_bump_cutoff(0.5));
  const CyclicFunction f = restrict_to_window(params, tables);
  const std::uint64_t n = static_cast<std::uint64_t>(N);

  WeightedApDensityReport rep;
  rep.modulus = N;
  rep.k = k;
  rep.w = w;

  long double trivial_sum = 0.0L;
  for (std::uint64_t x = 0; x < n; ++x) {
    long double p = 1.0L;
    for (int j = 0; j < k; ++j) p *= f.values[x];
    trivial_sum += p;
  }

  struct ChunkFind {
    bool any = false;
    std::uint64_t x = 0;
    std::uint64_t d = 0;
  };
  constexpr std::uint64_t kChunks = 64;
  std::vector<long double> partial(kChunks, 0.0L);
  std::vector<std::uint64_t> supported(kChunks, 0);
  std::vector<ChunkFind> found(kChunks);
  parallel_chunks(n, threads, kChunks, [&](std::uint64_t chunk, std::uint64_t lo,
                                           std::uint64_t hi) {
    long double acc = 0.0L;
    std::uint64_t hits = 0;
    ChunkFind find;
    for (std::uint64_t x = lo; x < hi; ++x) {
      if (f.values[x] == 0.0) continue;
      for (std::uint64_t d = 1; d < n; ++d) {
        long double p = f.values[x];
        std::uint64_t idx = x;
        for (int j = 1; j < k && p != 0.0L; ++j) {
          idx += d;
          if (idx >= n) idx -= n;
          p *= f.values[idx];
        }
        if (p == 0.0L) continue;
        acc += p;
        ++hits;
        verify_supported_ap(N, k, params.wt, x, d, nullptr, nullptr);
        if (!find.any) find = {true, x, d};
      }
    }
    partial[chunk] = acc;
    supported[chunk] = hits;
    found[chunk] = find;
  });

  long double nontrivial_sum = 0.0L;
  for (std::uint64_t c = 0; c < kChunks; ++c) {
    nontrivial_sum += partial[c];
    rep.support_ap_count += supported[c];
  }
  const long double denom = static_cast<long double>(n) * static_cast<long double>(n);
  rep.trivial_density = static_cast<double>(trivial_sum / denom);
  rep.nontrivial_density = static_cast<double>(nontrivial_sum / denom);
  rep.total_density = static_cast<double>((trivial_sum + nontrivial_sum) / denom);
  rep.nontrivial_positive = rep.nontrivial_density > 0.0;
  for (std::uint64_t c = 0; c < kChunks; ++c) {
    if (found[c].any) {
      verify_supported_ap(N, k, params.wt, found[c].x, found[c].d, &rep.witness_residues,
                          &rep.witness_primes);
      break;
    }
  }
  return rep;
}

std::string WeightedApDensityReport::to_json_string(int indent) const {
  nlohmann::json j;
  j["modulus"] = modulus;
  j["k"] = k;
  j["w"] = w;
  j["total_density"] = total_density;
  j["trivial_density"] = trivial_density;
  j["nontrivial_density"] = nontrivial_density;
  j["nontrivial_positive"] = nontrivial_positive;
  j["support_ap_count"] = support_ap_count;
  j["witness_residues"] = witness_residues;
  j["witness_primes"] = witness_primes;
  return j.dump(indent);
}

std::pair<std::uint64_t, std::uint64_t> two_squares_decompose(std::uint64_t p) {
  if (p % 4 != 1 || !is_prime_u64(p)) {
    throw std::invalid_argument("two_squares_decompose: p must be a prime == 1 (mod 4)");
  }
  // Square root of -1: g^((p-1)/4) for the smallest quadratic non-residue g.
  std::uint64_t root = 0;
  for (std::uint64_t g = 2; g < p; ++g) {
    if (powmod_u64(g, (p - 1) / 2, p) == p - 1) {
      root = powmod_u64(g, (p - 1) / 4, p);
      break;
    }
  }
  std::uint64_t a = 0, b = 0;
  if (root != 0 && mulmod_u64(root, root, p) == p - 1) {
    // Euclidean descent: the first remainder below sqrt(p) is one leg.
    std::uint64_t r0 = p, r1 = root;
    while (r1 * r1 > p) {
      const std::uint64_t t = r0 % r1;
      r0 = r1;
      r1 = t;
    }
    const std::uint64_t rest = p - r1 * r1;
    const std::uint64_t s = isqrt_u64(rest);
    if (s * s == rest && r1 > 0) {
      a = std::min(r1, s);
      b = std::max(r1, s);
    }
  }
  if (a == 0) {
    // Exhaustive fallback; Fermat guarantees a representation exists.
    for (std::uint64_t c = 1; c * c * 2 <= p; ++c) {
      const std::uint64_t rest = p - c * c;
      const std::uint64_t s = isqrt_u64(rest);
      if (s * s == rest) {
        a = c;
        b = s;
        break;
      }
    }
  }
  if (a * a + b * b != p) {
    throw std::logic_error("two_squares_decompose: no representation found");
  }
  return {a, b};
}

std::vector<TwoSquaresAp> two_squares_ap_demo(std::uint64_t limit, int k,
                                              const SieveTables& tables,
                                              std::size_t max_results, unsigned threads) {
  require_ap_args(limit, k, tables, "two_squares_ap_demo");
  std::vector<std::uint64_t> elig;
  for (std::uint64_t n = 5; n <= limit; ++n) {
    if (tables.is_prime[n] && n % 4 == 1) elig.push_back(n);
  }
  const std::uint64_t span = static_cast<std::uint64_t>(k - 1);

  constexpr std::uint64_t kChunks = 64;
  std::vector<std::vector<TwoSquaresAp>> partial(kChunks);
  parallel_chunks(
      elig.size(), threads, kChunks,
      [&](std::uint64_t chunk, std::uint64_t lo, std::uint64_t hi) {
        std::vector<TwoSquaresAp>& local = partial[chunk];
        for (std::uint64_t i = lo; i < hi && local.size() < max_results; ++i) {
          const std::uint64_t first = elig[i];
          for (std::size_t j = i + 1; j < elig.size() && local.size() < max_results; ++j) {
            const std::uint64_t d = elig[j] - first;
            if (first + span * d > limit) break;
            bool ok = true;
            std::uint64_t term = elig[j];
            for (int s = 2; s < k; ++s) {
              term += d;
              if (!tables.is_prime[term] || term % 4 != 1) {
                ok = false;
                break;
              }
            }
            if (!ok) continue;
            TwoSquaresAp ap;
            ap.first = first;
            ap.difference = d;
            ap.terms.resize(static_cast<std::size_t>(k));
            for (int s = 0; s < k; ++s) {
              const std::uint64_t p = first + static_cast<std::uint64_t>(s) * d;
              // Emission re-verification: primality independent of the
              // sieve table, residue class, and the exact decomposition.
              if (!is_prime_u64(p) || p % 4 != 1 || d == 0) {
                throw std::logic_error("two_squares_ap_demo: emitted term fails re-verification");
              }
              const auto [a, b] = two_squares_decompose(p);
              ap.terms[static_cast<std::size_t>(s)] = TwoSquaresTerm{p, a, b};
            }
            local.push_back(std::move(ap));
          }
        }
      });

  std::vector<TwoSquaresAp> out;
  for (std::uint64_t c = 0; c < kChunks && out.size() < max_results; ++c) {
    for (TwoSquaresAp& ap : partial[c]) {
      if (out.size() >= max_results) break;
      out.push_back(std::move(ap));
    }
  }
  return out;
}

void save_two_squares_csv(const std::vector<TwoSquaresAp>& aps, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw std::runtime_error("save_two_squares_csv: cannot open " + path);
  bool ok = std::fputs("first,difference,term_index,prime,a,b\r\n", f) >= 0;
  for (const TwoSquaresAp& ap : aps) {
    for (std::size_t t = 0; t < ap.terms.size() && ok; ++t) {
      ok = std::fprintf(f, "%" PRIu64 ",%" PRIu64 ",%zu,%" PRIu64 ",%" PRIu64 ",%" PRIu64 "\r\n",
                        ap.first, ap.difference, t, ap.terms[t].prime, ap.terms[t].a,
                        ap.terms[t].b) > 0;
    }
    if (!ok) break;
  }
  std::fclose(f);
  if (!ok) throw std::runtime_error("save_two_squares_csv: short write to " + path);
}

}  // namespace aplab
