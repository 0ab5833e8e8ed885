#pragma once

// Pseudorandom majorant for the W-tricked primes on Z_N.
//
// With W = prod_{p <= w} p, truncation R and cutoff chi, the majorant is
//
//              { (phi(W)/W) * lambda_chi_R(W n + 1)^2 / (c_chi log R),  N/2 <= n < N
//     nu(n) =  {
//              { 1,                                                     otherwise,
//
// and the lower object it dominates is f(n) = delta_k * lambda_w(n) on the
// same window (lambda_w the prime-indicator von Mangoldt variant), with
// delta_k = 1 / (k 2^{k+4} c_chi).  The pointwise bound nu >= f holds as
// soon as log R >= log(WN+1) / (k 2^{k+4}); asymptotic_defaults picks
// R = N^{1/(k 2^{k+3})}, which satisfies it for every N >= W.

#include <cstdint>

#include "aplab/cutoff.hpp"
#include "aplab/cyclic.hpp"
#include "aplab/sieve.hpp"

namespace aplab {

struct MajorantParams {
  std::int64_t N = 0;   // cyclic modulus; must be odd and coprime to (k-1)!
  int k = 3;            // progression length the downstream counting targets
  WTrick wt;            // W-trick constants
  CutoffFunction chi;   // cutoff
  double R = 0.0;       // divisor-sum truncation
  double c = 0.0;       // c_chi, cached
  double delta_k = 0.0; // density scale for the minorated function

  // R from the asymptotic recipe N^{1/(k 2^{k+3})} and the matching
  // delta_k; chi and w are explicit knobs.
  static MajorantParams asymptotic_defaults(std::int64_t N, int k, std::uint64_t w,
                                            CutoffFunction chi);

  // Same but with an explicit truncation R (the useful regime at desk-scale
  // N; the default R only exceeds 2 beyond N ~ 2^192).
  static MajorantParams with_truncation(std::int64_t N, int k, std::uint64_t w,
                                        CutoffFunction chi, double R);
};

// Validates N (odd, coprime to (k-1)!, positive) and throws
// std::invalid_argument otherwise.
void validate_modulus(std::int64_t N, int k);

// Builds nu. Requires tables.limit >= W*N + 1 (throws std::out_of_range).
// Deterministic and thread-count independent.
CyclicFunction build_majorant(const MajorantParams& params, const SieveTables& tables,
                              unsigned threads = 1);

// f = delta_k * lambda_w on the window [N/2, N), 0 elsewhere.
CyclicFunction restrict_to_window(const MajorantParams& params, const SieveTables& tables);

struct MajorizationReport {
  std::uint64_t checked = 0;
  std::uint64_t violations = 0;
  double min_slack = 0.0;        // min over the window of nu(n) - f(n)
  std::int64_t argmin = -1;      // residue attaining min_slack
  std::int64_t first_violation = -1;
  bool threshold_ok = false;     // log R >= c_chi * delta_k * log(WN+1)
};

// Scans the window for nu(n) >= f(n); reports rather than aborts.
MajorizationReport check_majorizes(const CyclicFunction& nu, const CyclicFunction& f,
                                   const MajorantParams& params);

}  // namespace aplab
