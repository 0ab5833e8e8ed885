#pragma once

// Linear forms for k-term progressions and the correlation experiments
// built on them.
//
// The k-AP system over t = k variables consists of
//     psi_j(x) = sum_{i != j} (j - i) x_i,        j = k, k-1, ..., 1,
// so that substituting x = psi_1 and d = x_1 + ... + x_k turns the tuple
// (psi_1, ..., psi_k) into the progression x, x+d, ..., x+(k-1)d.  For
// k = 3 this reads {2x1 + x2, x1 - x3, -x2 - 2x3}.
//
// The doubled-variable correlation of a weight nu on Z_N replaces each
// x_i by two copies x_i^(0), x_i^(1) and, for a 0/1 exponent pattern
// n_{j,omega}, evaluates
//     E prod_{j, omega} nu(psi_j(x^(omega)))^{n_{j,omega}},
// a product of up to k 2^{k-1} factors (12 when k = 3).  The measure nu
// satisfies the k-linear-forms condition when all these expectations
// approach 1.
//
// Exact evaluation eliminates the two copies of x_1 innermost (every form
// except psi_1 contains x_1), costing O(N^{2k-1}) — usable to N ~ 60 at
// k = 3 — behind an explicit operation budget.  The Monte-Carlo path
// samples disjoint seeded streams and merges them by count, so results
// are bitwise independent of the thread count.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "aplab/cutoff.hpp"
#include "aplab/cyclic.hpp"
#include "aplab/sieve.hpp"

namespace aplab {

struct LinearForm {
  std::vector<std::int64_t> coeffs;  // homogeneous part
  std::int64_t constant = 0;
  std::int64_t w_scale = 1;  // evaluated value is w_scale * <coeffs, x> + constant

  std::int64_t eval(const std::vector<std::int64_t>& x) const;
};

struct LinearFormsSystem {
  std::size_t t = 0;  // number of variables
  std::vector<LinearForm> forms;

  // No two homogeneous parts are rational multiples of each other.
  bool pairwise_independent() const;
};

// Half-open integer box prod [lo_i, hi_i).
struct Box {
  std::vector<std::pair<std::int64_t, std::int64_t>> dims;
  std::int64_t side(std::size_t i) const { return dims[i].second - dims[i].first; }
};

// The k-AP system described above (forms ordered j = k down to 1).
LinearFormsSystem kap_forms(int k);

// 0/1 exponents on the k 2^{k-1} doubled-variable factors.  Factor
// (j, omega) lives at slot (j-1)*2^{k-1} + bits(omega), where bit
// position of variable i (i != j) is i-1 for i < j and i-2 for i > j.
struct ExponentPattern {
  int k = 0;
  std::vector<std::uint8_t> on;  // size k * 2^{k-1}

  static ExponentPattern all_ones(int k);
  static ExponentPattern all_zeros(int k);
  // Single factor (j, omega_bits) switched on.
  static ExponentPattern single(int k, int j, std::uint32_t omega_bits);

  std::size_t slot(int j, std::uint32_t omega_bits) const;
  std::size_t active_count() const;
  std::string to_string() const;  // '0'/'1' string, slot order
};

// All 2^{k 2^{k-1}} patterns; enumeration is only sane for k = 3 (4096)
// and refuses larger k.
std::vector<ExponentPattern> all_patterns(int k);

// Deterministic sample of `count` patterns that always contains the
// all-ones pattern and every single-factor pattern.
std::vector<ExponentPattern> sample_patterns(int k, std::size_t count, std::uint64_t seed);

// Thrown when an exact evaluation would exceed its operation budget; the
// message points at the Monte-Carlo path.
struct OperationBudgetExceeded : std::runtime_error {
  explicit OperationBudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

// Exact doubled-variable expectation for the k-AP system on Z_N.
// Throws OperationBudgetExceeded if the contraction would take more than
// op_budget inner operations (default ~ the N = 60, k = 3 cost).
double lf_expectation_exact(const CyclicFunction& nu, const ExponentPattern& pattern,
                            std::uint64_t op_budget = 10'000'000'000ULL);

struct McReport {
  double estimate = 0.0;
  double stderr_est = 0.0;  // standard error of the mean
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::uint32_t streams = 0;
  bool antithetic = false;

  std::string to_json_string(int indent = 2) const;
};

// Monte-Carlo counterpart; >= 1000 samples enforced.  Fixed (seed,
// streams) fully determines the result regardless of `threads`.
McReport lf_expectation_mc(const CyclicFunction& nu, const ExponentPattern& pattern,
                           std::uint64_t samples, std::uint64_t seed, std::uint32_t streams = 16,
                           unsigned threads = 1, bool antithetic = false);

struct BoxCorrelationReport {
  double lhs = 0.0;        // MC estimate of E prod lambda_chi_R(W psi_i + 1)^2
  double stderr_est = 0.0;
  double rhs = 0.0;        // (W c_chi log R / phi(W))^m
  double ratio = 0.0;      // lhs / rhs
  double ratio_lo = 0.0;   // 2-sigma band
  double ratio_hi = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::size_t m = 0;
  double R = 0.0;
  std::uint64_t w = 0;

  std::string to_json_string(int indent = 2) const;
};

// Squared-divisor-sum correlation over an integer box: Monte-Carlo
// estimate of E_{x in B} prod_i lambda_chi_R(W psi_i(x) + 1)^2 against
// its closed-form prediction.  Requires pairwise-independent forms and
// shifted values W psi + 1 >= 1 on the box (checked at the corners).
BoxCorrelationReport box_correlation_experiment(const LinearFormsSystem& system, const WTrick& wt,
                                                const Box& box, double R, const CutoffFunction& chi,
                                                std::uint64_t samples, std::uint64_t seed,
                                                std::uint32_t streams = 16, unsigned threads = 1);

// Exact count of solutions to {W psi_j(x) + 1 == 0 mod p : j in subset}
// over x in Z_p^t, via elimination mod p; returns (solutions, p^t).
// Exact for any prime p (no float arithmetic involved).
std::pair<std::uint64_t, std::uint64_t> local_zero_count(const LinearFormsSystem& system,
                                                         const WTrick& wt, std::uint64_t p,
                                                         std::uint32_t subset_mask);

}  // namespace aplab
