#pragma once

// Direct progression counts inside the primes, the exact k-AP density
// of the windowed minorated function the pipeline feeds downstream, and
// the classical demo that the primes that are sums of two squares also
// contain progressions.

#include <cstdint>
#include <string>
#include <vector>

#include "aplab/sieve.hpp"

namespace aplab {

// Exact number of k-term progressions first, first+d, ..., first+(k-1)d
// with d > 0 and every term prime and <= limit.  The second term runs
// over the prime list (the (first term, difference) double loop with
// composite second terms skipped); the remaining terms early-exit on
// the first composite.  Parallel over first-term ranges, partial counts
// merged by addition.  Requires k >= 3 and tables.limit >= limit.
std::uint64_t count_prime_aps(std::uint64_t limit, int k, const SieveTables& tables,
                              unsigned threads = 1);

// One sweep row: the count against its N^2 / log^k N scale.
struct PrimeApCountRow {
  std::uint64_t limit = 0;
  int k = 0;
  std::uint64_t count = 0;
  double scale = 0.0;  // limit^2 / log^k(limit)
  double ratio = 0.0;  // count / scale
};

PrimeApCountRow prime_ap_count_row(std::uint64_t limit, int k, const SieveTables& tables,
                                   unsigned threads = 1);

// CSV "N,k,count,scale,ratio" (CRLF, %.17g for the real columns).
void save_count_rows_csv(const std::vector<PrimeApCountRow>& rows, const std::string& path);

// Exact O(N^2) k-AP density of the windowed function f = delta_k *
// lambda_w on [ceil(N/2), N) (majorant module, default smooth bump
// cutoff): averages prod_j f(x + j d) over all (x, d) in Z_N^2 with the
// d = 0 diagonal isolated.  Every supported progression with d != 0 is
// re-verified: its residues lift to an honest ascending integer
// progression inside the window (no wraparound, asserted exactly), and
// each lifted term W*n + 1 passes an independent primality test.
struct WeightedApDensityReport {
  std::int64_t modulus = 0;
  int k = 0;
  std::uint64_t w = 0;
  double total_density = 0.0;       // E_{x,d} prod_j f(x + j d)
  double trivial_density = 0.0;     // d = 0 share of that average
  double nontrivial_density = 0.0;  // total - trivial
  bool nontrivial_positive = false;
  std::uint64_t support_ap_count = 0;  // ordered pairs (x, d != 0) with positive product

  // First supported progression in (x, d) scan order, lifted to the
  // ascending integer progression: window residues start, start+step,
  // ..., and the prime values W*residue + 1.  Empty when none exists.
  std::vector<std::uint64_t> witness_residues;
  std::vector<std::uint64_t> witness_primes;

  std::string to_json_string(int indent = 2) const;
};

WeightedApDensityReport weighted_ap_density_lambda(std::int64_t N, int k, std::uint64_t w,
                                                   const SieveTables& tables,
                                                   unsigned threads = 1);

// One term of a progression of primes p == 1 (mod 4) together with its
// exact two-squares decomposition a^2 + b^2 = p, a <= b.
struct TwoSquaresTerm {
  std::uint64_t prime = 0;
  std::uint64_t a = 0;
  std::uint64_t b = 0;
};

struct TwoSquaresAp {
  std::uint64_t first = 0;
  std::uint64_t difference = 0;     // > 0
  std::vector<TwoSquaresTerm> terms;  // k terms, ascending
};

// a^2 + b^2 = p for a prime p == 1 (mod 4): square root of -1 mod p via
// a quadratic non-residue power, then Euclidean descent; the returned
// pair always satisfies a <= b and a^2 + b^2 == p by exact recomputation.
// Throws std::invalid_argument unless p is a prime == 1 (mod 4).
std::pair<std::uint64_t, std::uint64_t> two_squares_decompose(std::uint64_t p);

// Searches the primes == 1 (mod 4) up to limit for k-term progressions
// and decomposes every term.  Results in (first, difference) order,
// truncated to max_results; every emitted progression is re-verified
// (terms prime and == 1 mod 4, positive difference, exact squares).
// Requires k >= 3 and tables.limit >= limit.
std::vector<TwoSquaresAp> two_squares_ap_demo(std::uint64_t limit, int k,
                                              const SieveTables& tables,
                                              std::size_t max_results = 1000,
                                              unsigned threads = 1);

// CSV "first,difference,term_index,prime,a,b" (CRLF), one row per term.
void save_two_squares_csv(const std::vector<TwoSquaresAp>& aps, const std::string& path);

}  // namespace aplab
