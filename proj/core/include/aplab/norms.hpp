#pragma once

// Discrepancy norms and the identities connecting them.
//
// The bipartite cut norm of a kernel g on X x Y is
//     ||g||_cut = sup_{A in X, B in Y} |E[g(x,y) 1_A(x) 1_B(y)]|.
// For a fixed A the optimal B is determined by the signs of the column
// sums, so the exact value needs only an enumeration of the smaller
// side (guarded at 25 vertices).  A seeded alternating-ascent heuristic
// provides lower bounds beyond that.
//
// On Z_N the arity-r cut norm replaces the kernel by f(x_1 + ... + x_r)
// and the subsets by indicator tensors A_j over Z_N^{r-1}:
//     ||f||_{cut,r} = sup |E[f(x_1+...+x_r) prod_j 1_{A_j}(x_{-j})]|.
// r = 2 reduces to the bipartite norm of M(x,y) = f(x+y); r >= 3 is
// heuristic only (cyclic coordinate ascent over the tensors).
//
// The Gowers-U^2 bound dominates the cut norm: for M(x,y) = f(x+y) the
// fourth moment E[M(x,y)M(x',y)M(x,y')M(x',y')] equals sum_xi |fhat(xi)|^4,
// computed in O(N log N); a matrix contraction E_{x,x'}[(E_y M M)^2]
// covers general kernels in O(N^3).
//
// Generalized convolutions average a product of (r-1)-variable functions
// over the fibre y_1 + ... + y_r = x; products of such convolutions stay
// in the class, which the tests exercise pointwise.
//
// strong_lf_check evaluates the degenerate-pair contraction
//     E[(nu(2x+y) - 1) g(x-z) g(x-z') g(-y-2z) g(-y-2z')]
// for all 16 ways of swapping the four g factors for a bounded model
// gtilde, via four codegree matrix products (O(N^3) total).

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "aplab/cyclic.hpp"
#include "aplab/matrix.hpp"

namespace aplab {

struct CutNormResult {
  double value = 0.0;  // |objective| at the witness, E-normalized
  bool exact = false;  // true: enumerated supremum; false: heuristic lower bound
  int r = 2;
  // One 0/1 indicator per side.  Bipartite: sizes {rows, cols}.  Z_N
  // arity r: r tensors over Z_N^{r-1}, row-major in the remaining
  // coordinates (increasing original index, first coordinate slowest).
  std::vector<std::vector<std::uint8_t>> witness;
};

// Signed E_{x,y}[g(x,y) 1_A(x) 1_B(y)].
double bipartite_objective(const Matrix& g, const std::vector<std::uint8_t>& A,
                           const std::vector<std::uint8_t>& B);

// Exact cut norm; requires min(rows, cols) <= 25 (the smaller side is
// enumerated in Gray-code order, the other side follows the sign rule).
// Throws std::length_error pointing at the heuristic when too large.
CutNormResult cutnorm_bipartite_exact(const Matrix& g, unsigned threads = 1);

// Alternating-ascent lower bound, best of `restarts` seeded starts.
// Deterministic in (seed, restarts); never exceeds the exact value.
CutNormResult cutnorm_bipartite_heuristic(const Matrix& g, unsigned restarts = 32,
                                          std::uint64_t seed = 0, unsigned threads = 1);

// M(x, y) = f(x + y).
Matrix sum_matrix(const CyclicFunction& f);

// Signed E over Z_N^r of f(c_1 x_1 + ... + c_r x_r) prod_j 1_{A_j}(x_{-j});
// zn_objective is the all-coefficients-one case.
double zn_objective_twisted(const CyclicFunction& f, const std::vector<std::int64_t>& coeffs,
                            const std::vector<std::vector<std::uint8_t>>& sets);
double zn_objective(const CyclicFunction& f, int r,
                    const std::vector<std::vector<std::uint8_t>>& sets);

struct ZnCutOptions {
  unsigned restarts = 32;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::size_t exact_limit = 25;   // r=2: exact enumeration up to this N
  unsigned sweep_limit = 200;     // r>=3: coordinate-ascent sweeps per restart
};

// r = 2: exact for N <= exact_limit, else heuristic.  r >= 3: heuristic
// cyclic coordinate ascent (guarded: r <= 4 and N^r <= 2e7; N <= 64 for
// r = 3).  Result flags exactness.
CutNormResult cutnorm_zn(const CyclicFunction& f, int r, const ZnCutOptions& opts = {});

// (E_{x,x'}[ (E_y M(x,y) M(x',y))^2 ])^{1/4} via one A A^T contraction.
double gowers_u2_bound(const Matrix& m);

enum class U2Method { automatic, fourier, matrix };

// Same bound for the additive kernel M(x,y) = f(x+y): Fourier path
// (sum_xi |fhat|^4)^{1/4} in O(N log N), matrix path as a cross-check.
double gowers_u2_bound(const CyclicFunction& f, U2Method method = U2Method::automatic);

// (h_1, ..., h_r)^*(x) = E_{y_1+...+y_r=x}[prod_j h_j(y_{-j})], each h_j
// given row-major over Z_N^{r-1} (same coordinate convention as the cut
// witnesses).  Guard: r in [2, 4] and N^r <= 2e7.
CyclicFunction generalized_convolution(std::int64_t N,
                                       const std::vector<std::vector<double>>& sides);

// r = 2 convenience: E_y[a(y) b(x - y)].
CyclicFunction convolve(const CyclicFunction& a, const CyclicFunction& b);

struct StrongLFReport {
  std::int64_t N = 0;
  // values[mask]: bit 0 -> g(x,z) swapped for gtilde, bit 1 -> g(x,z'),
  // bit 2 -> g(y,z), bit 3 -> g(y,z').
  std::array<double, 16> values{};

  static std::string pattern_label(unsigned mask);  // e.g. "gtgg"
  double max_abs() const;
  std::string to_json_string(int indent = 2) const;
};

// All 16 replacement-pattern values of the contraction documented above.
// Exact (no sampling); O(N^3) via four codegree products.
StrongLFReport strong_lf_check(const CyclicFunction& nu, const CyclicFunction& g,
                               const CyclicFunction& gtilde, unsigned threads = 1);

}  // namespace aplab
