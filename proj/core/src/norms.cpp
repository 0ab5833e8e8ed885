#include "aplab/norms.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstring>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include <fftw3.h>
#include <json.hpp>

#include "aplab/util.hpp"

namespace aplab {

namespace {

void require_nonempty(const Matrix& g, const char* who) {
  if (g.rows == 0 || g.cols == 0 || g.data.size() != g.rows * g.cols) {
    throw std::invalid_argument(std::string(who) + ": malformed matrix");
  }
}

// Best candidate from fixed row-set column sums: the optimal column set
// takes every positive (or every negative) entry.
struct SignedBest {
  double value = 0.0;  // unnormalized |sum|
  int sign = +1;
};

SignedBest column_rule(const std::vector<double>& colsum) {
  double plus = 0.0, minus = 0.0;
  for (double v : colsum) {
    if (v > 0.0) {
      plus += v;
    } else {
      minus += v;
    }
  }
  if (plus >= -minus) return {plus, +1};
  return {-minus, -1};
}

struct EnumBest {
  double value = -1.0;
  std::uint32_t row_bits = 0;
  int sign = +1;
};

// Exact cut norm with rows enumerated; caller guarantees rows <= 25.
CutNormResult exact_rows_enumerated(const Matrix& g, unsigned threads) {
  const std::size_t m = g.rows, n = g.cols;
  const unsigned high_bits = m > 14 ? static_cast<unsigned>(std::min<std::size_t>(m - 14, 8)) : 0;
  const std::size_t low_bits = m - high_bits;
  const std::uint64_t prefixes = 1ULL << high_bits;
  std::vector<EnumBest> per_prefix(prefixes);

  parallel_chunks(prefixes, threads, prefixes,
                  [&](std::uint64_t, std::uint64_t lo, std::uint64_t hi) {
    std::vector<double> colsum(n);
    for (std::uint64_t prefix = lo; prefix < hi; ++prefix) {
      std::fill(colsum.begin(), colsum.end(), 0.0);
      for (std::size_t r = 0; r < high_bits; ++r) {
        if ((prefix >> r) & 1ULL) {
          const double* row = g.row(low_bits + r);
          for (std::size_t y = 0; y < n; ++y) colsum[y] += row[y];
        }
      }
      EnumBest best;
      const std::uint64_t steps = 1ULL << low_bits;
      std::uint32_t gray = 0;
      for (std::uint64_t t = 0;; ++t) {
        const SignedBest cand = column_rule(colsum);
        if (cand.value > best.value) {
          best = {cand.value, gray, cand.sign};
        }
        if (t + 1 == steps) break;
        const unsigned bit = static_cast<unsigned>(__builtin_ctzll(t + 1));
        const std::uint32_t next = gray ^ (1u << bit);
        const double* row = g.row(bit);
        if ((next >> bit) & 1u) {
          for (std::size_t y = 0; y < n; ++y) colsum[y] += row[y];
        } else {
          for (std::size_t y = 0; y < n; ++y) colsum[y] -= row[y];
        }
        gray = next;
      }
      per_prefix[prefix].value = best.value;
      per_prefix[prefix].row_bits =
          best.row_bits | static_cast<std::uint32_t>(prefix << low_bits);
      per_prefix[prefix].sign = best.sign;
    }
  });

  EnumBest best;
  for (const EnumBest& b : per_prefix) {
    if (b.value > best.value) best = b;
  }

  // Reconstruct the witness and recompute everything from scratch so the
  // reported value is exactly the bilinear form at the witness.
  CutNormResult res;
  res.exact = true;
  res.r = 2;
  res.witness.assign(2, {});
  res.witness[0].assign(m, 0);
  res.witness[1].assign(n, 0);
  std::vector<double> colsum(n, 0.0);
  for (std::size_t r = 0; r < m; ++r) {
    if ((best.row_bits >> r) & 1u) {
      res.witness[0][r] = 1;
      const double* row = g.row(r);
      for (std::size_t y = 0; y < n; ++y) colsum[y] += row[y];
    }
  }
  double total = 0.0;
  for (std::size_t y = 0; y < n; ++y) {
    if (best.sign * colsum[y] > 0.0) {
      res.witness[1][y] = 1;
      total += colsum[y];
    }
  }
  res.value = std::abs(total) / (static_cast<double>(m) * static_cast<double>(n));
  return res;
}

}  // namespace

double bipartite_objective(const Matrix& g, const std::vector<std::uint8_t>& A,
                           const std::vector<std::uint8_t>& B) {
  require_nonempty(g, "bipartite_objective");
  if (A.size() != g.rows || B.size() != g.cols) {
    throw std::invalid_argument("bipartite_objective: witness size mismatch");
  }
  double total = 0.0;
  for (std::size_t x = 0; x < g.rows; ++x) {
    if (!A[x]) continue;
    const double* row = g.row(x);
    double s = 0.0;
    for (std::size_t y = 0; y < g.cols; ++y) {
      if (B[y]) s += row[y];
    }
    total += s;
  }
  return total / (static_cast<double>(g.rows) * static_cast<double>(g.cols));
}

CutNormResult cutnorm_bipartite_exact(const Matrix& g, unsigned threads) {
  require_nonempty(g, "cutnorm_bipartite_exact");
  if (std::min(g.rows, g.cols) > 25) {
    throw std::length_error(
        "cutnorm_bipartite_exact: smaller side exceeds 25; use "
        "cutnorm_bipartite_heuristic");
  }
  if (g.rows <= g.cols) return exact_rows_enumerated(g, threads);
  CutNormResult res = exact_rows_enumerated(transposed(g), threads);
  std::swap(res.witness[0], res.witness[1]);
  return res;
}

CutNormResult cutnorm_bipartite_heuristic(const Matrix& g, unsigned restarts, std::uint64_t seed,
                                          unsigned threads) {
  require_nonempty(g, "cutnorm_bipartite_heuristic");
  if (restarts == 0) {
    throw std::invalid_argument("cutnorm_bipartite_heuristic: restarts must be >= 1");
  }
  const std::size_t m = g.rows, n = g.cols;

  struct RestartBest {
    double value = -1.0;
    std::vector<std::uint8_t> A, B;
  };
  std::vector<RestartBest> per_restart(restarts);

  parallel_chunks(restarts, threads, restarts,
                  [&](std::uint64_t, std::uint64_t lo, std::uint64_t hi) {
    for (std::uint64_t s = lo; s < hi; ++s) {
      auto rng = make_stream_rng(seed, s);
      std::vector<std::uint8_t> b_init(n);
      for (auto& bit : b_init) bit = static_cast<std::uint8_t>(rng() & 1u);

      RestartBest best;
      for (int sign : {+1, -1}) {
        std::vector<std::uint8_t> B = b_init, A(m, 0);
        std::vector<double> rowsum(m), colsum(n);
        double prev = -1.0;
        for (unsigned iter = 0; iter < 200; ++iter) {
          for (std::size_t x = 0; x < m; ++x) {
            const double* row = g.row(x);
            double acc = 0.0;
            for (std::size_t y = 0; y < n; ++y) {
              if (B[y]) acc += row[y];
            }
            rowsum[x] = acc;
            A[x] = sign * acc > 0.0 ? 1 : 0;
          }
          std::fill(colsum.begin(), colsum.end(), 0.0);
          for (std::size_t x = 0; x < m; ++x) {
            if (!A[x]) continue;
            const double* row = g.row(x);
            for (std::size_t y = 0; y < n; ++y) colsum[y] += row[y];
          }
          double obj = 0.0;
          for (std::size_t y = 0; y < n; ++y) {
            B[y] = sign * colsum[y] > 0.0 ? 1 : 0;
            if (B[y]) obj += sign * colsum[y];
          }
          if (obj <= prev + 1e-15) break;
          prev = obj;
        }
        if (prev > best.value) {
          best.value = prev;
          best.A = A;
          best.B = B;
        }
      }
      per_restart[s] = std::move(best);
    }
  });

  const RestartBest* winner = &per_restart[0];
  for (const RestartBest& rb : per_restart) {
    if (rb.value > winner->value) winner = &rb;
  }
  CutNormResult res;
  res.exact = false;
  res.r = 2;
  if (winner->A.empty()) {
    res.witness = {std::vector<std::uint8_t>(m, 0), std::vector<std::uint8_t>(n, 0)};
    res.value = 0.0;
    return res;
  }
  res.witness = {winner->A, winner->B};
  res.value = std::abs(bipartite_objective(g, res.witness[0], res.witness[1]));
  return res;
}

Matrix sum_matrix(const CyclicFunction& f) {
  const std::int64_t N = f.modulus;
  if (N < 1) throw std::invalid_argument("sum_matrix: empty cyclic group");
  Matrix m(static_cast<std::size_t>(N), static_cast<std::size_t>(N));
  for (std::int64_t x = 0; x < N; ++x) {
    for (std::int64_t y = 0; y < N; ++y) {
      m.at(static_cast<std::size_t>(x), static_cast<std::size_t>(y)) = f.at(x + y);
    }
  }
  return m;
}

namespace {

// Strides for x_{-j} over Z_N^{r-1}: coordinates i != j in increasing
// order, first coordinate slowest.
std::vector<std::uint64_t> minus_j_strides(int r, std::int64_t N, int j) {
  std::vector<std::uint64_t> strides(static_cast<std::size_t>(r), 0);
  int pos = 0;
  for (int i = 0; i < r; ++i) {
    if (i == j) continue;
    int exponent = r - 2 - pos;
    std::uint64_t s = 1;
    for (int e = 0; e < exponent; ++e) s *= static_cast<std::uint64_t>(N);
    strides[static_cast<std::size_t>(i)] = s;
    ++pos;
  }
  return strides;
}

void check_zn_budget(int r, std::int64_t N, const char* who) {
  if (r < 2 || r > 4) throw std::invalid_argument(std::string(who) + ": r must be in [2, 4]");
  if (N < 1) throw std::invalid_argument(std::string(who) + ": empty cyclic group");
  long double cost = 1.0L;
  for (int i = 0; i < r; ++i) cost *= static_cast<long double>(N);
  if (cost > 2e7L) {
    throw std::length_error(std::string(who) + ": N^r exceeds the evaluation budget");
  }
}

}  // namespace

double zn_objective_twisted(const CyclicFunction& f, const std::vector<std::int64_t>& coeffs,
                            const std::vector<std::vector<std::uint8_t>>& sets) {
  const int r = static_cast<int>(coeffs.size());
  const std::int64_t N = f.modulus;
  check_zn_budget(r, N, "zn_objective_twisted");
  if (static_cast<int>(sets.size()) != r) {
    throw std::invalid_argument("zn_objective_twisted: need one indicator per side");
  }
  std::uint64_t side_size = 1;
  for (int i = 0; i < r - 1; ++i) side_size *= static_cast<std::uint64_t>(N);
  for (const auto& s : sets) {
    if (s.size() != side_size) {
      throw std::invalid_argument("zn_objective_twisted: indicator size mismatch");
    }
  }
  std::vector<std::vector<std::uint64_t>> strides;
  for (int j = 0; j < r; ++j) strides.push_back(minus_j_strides(r, N, j));
  std::vector<std::int64_t> cmod(coeffs.size());
  for (std::size_t i = 0; i < coeffs.size(); ++i) cmod[i] = mod_reduce(coeffs[i], N);

  std::vector<std::int64_t> x(static_cast<std::size_t>(r), 0);
  long double total = 0.0L;
  std::uint64_t tuples = side_size * static_cast<std::uint64_t>(N);
  for (std::uint64_t it = 0;; ++it) {
    bool in_all = true;
    for (int j = 0; j < r && in_all; ++j) {
      std::uint64_t flat = 0;
      for (int i = 0; i < r; ++i) {
        if (i != j) flat += static_cast<std::uint64_t>(x[static_cast<std::size_t>(i)]) *
                            strides[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
      }
      in_all = sets[static_cast<std::size_t>(j)][flat] != 0;
    }
    if (in_all) {
      std::int64_t arg = 0;
      for (int i = 0; i < r; ++i) {
        arg = (arg + cmod[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)]) % N;
      }
      total += f.values[static_cast<std::size_t>(arg)];
    }
    if (it + 1 == tuples) break;
    for (std::size_t v = 0;; ++v) {
      if (++x[v] < N) break;
      x[v] = 0;
    }
  }
  long double denom = 1.0L;
  for (int i = 0; i < r; ++i) denom *= static_cast<long double>(N);
  return static_cast<double>(total / denom);
}

double zn_objective(const CyclicFunction& f, int r,
                    const std::vector<std::vector<std::uint8_t>>& sets) {
  return zn_objective_twisted(f, std::vector<std::int64_t>(static_cast<std::size_t>(r), 1), sets);
}

namespace {

// Cyclic coordinate ascent for the arity-r cut norm, one seeded restart.
struct ZnBest {
  double value = -1.0;  // unnormalized signed objective (already >= 0)
  std::vector<std::vector<std::uint8_t>> sets;
};

ZnBest zn_ascent_restart(const CyclicFunction& f, int r, std::uint64_t seed, std::uint64_t restart,
                         unsigned sweep_limit) {
  const std::int64_t N = f.modulus;
  std::uint64_t side_size = 1;
  for (int i = 0; i < r - 1; ++i) side_size *= static_cast<std::uint64_t>(N);
  std::vector<std::vector<std::uint64_t>> strides;
  for (int j = 0; j < r; ++j) strides.push_back(minus_j_strides(r, N, j));

  auto rng = make_stream_rng(seed, restart);
  ZnBest best;
  std::vector<std::vector<std::uint8_t>> init(static_cast<std::size_t>(r));
  init[0].assign(side_size, 0);  // filled by the first update
  for (int j = 1; j < r; ++j) {
    init[static_cast<std::size_t>(j)].resize(side_size);
    for (auto& bit : init[static_cast<std::size_t>(j)]) {
      bit = static_cast<std::uint8_t>(rng() & 1u);
    }
  }

  std::vector<double> coeff(side_size);
  std::vector<std::int64_t> x(static_cast<std::size_t>(r));
  const std::uint64_t tuples = side_size * static_cast<std::uint64_t>(N);

  for (int sign : {+1, -1}) {
    auto sets = init;
    double prev = -1.0;
    double obj = 0.0;
    for (unsigned sweep = 0; sweep < sweep_limit; ++sweep) {
      for (int j = 0; j < r; ++j) {
        std::fill(coeff.begin(), coeff.end(), 0.0);
        std::fill(x.begin(), x.end(), 0);
        for (std::uint64_t it = 0;; ++it) {
          bool in_others = true;
          std::uint64_t flat_j = 0;
          std::int64_t arg = 0;
          for (int i = 0; i < r; ++i) {
            arg += x[static_cast<std::size_t>(i)];
          }
          for (int jj = 0; jj < r && in_others; ++jj) {
            std::uint64_t flat = 0;
            for (int i = 0; i < r; ++i) {
              if (i != jj) {
                flat += static_cast<std::uint64_t>(x[static_cast<std::size_t>(i)]) *
                        strides[static_cast<std::size_t>(jj)][static_cast<std::size_t>(i)];
              }
            }
            if (jj == j) {
              flat_j = flat;
            } else {
              in_others = sets[static_cast<std::size_t>(jj)][flat] != 0;
            }
          }
          if (in_others) coeff[flat_j] += f.values[static_cast<std::size_t>(arg % N)];
          if (it + 1 == tuples) break;
          for (std::size_t v = 0;; ++v) {
            if (++x[v] < N) break;
            x[v] = 0;
          }
        }
        obj = 0.0;
        auto& mine = sets[static_cast<std::size_t>(j)];
        for (std::uint64_t idx = 0; idx < side_size; ++idx) {
          const double s = sign * coeff[idx];
          mine[idx] = s > 0.0 ? 1 : 0;
          if (mine[idx]) obj += s;
        }
      }
      if (obj <= prev + 1e-15) break;
      prev = obj;
    }
    if (prev > best.value) {
      best.value = prev;
      best.sets = sets;
    }
  }
  return best;
}

}  // namespace

CutNormResult cutnorm_zn(const CyclicFunction& f, int r, const ZnCutOptions& opts) {
  const std::int64_t N = f.modulus;
  if (r == 2) {
    const Matrix m = sum_matrix(f);
    CutNormResult res = static_cast<std::size_t>(N) <= opts.exact_limit
                            ? cutnorm_bipartite_exact(m, opts.threads)
                            : cutnorm_bipartite_heuristic(m, opts.restarts, opts.seed,
                                                          opts.threads);
    res.r = 2;
    return res;
  }
  check_zn_budget(r, N, "cutnorm_zn");
  if (r == 3 && N > 64) {
    throw std::length_error("cutnorm_zn: r = 3 supports N <= 64");
  }
  if (opts.restarts == 0) throw std::invalid_argument("cutnorm_zn: restarts must be >= 1");

  std::vector<ZnBest> per_restart(opts.restarts);
  parallel_chunks(opts.restarts, opts.threads, opts.restarts,
                  [&](std::uint64_t, std::uint64_t lo, std::uint64_t hi) {
    for (std::uint64_t s = lo; s < hi; ++s) {
      per_restart[s] = zn_ascent_restart(f, r, opts.seed, s, opts.sweep_limit);
    }
  });
  const ZnBest* winner = &per_restart[0];
  for (const ZnBest& b : per_restart) {
    if (b.value > winner->value) winner = &b;
  }
  CutNormResult res;
  res.exact = false;
  res.r = r;
  res.witness = winner->sets;
  res.value = std::abs(zn_objective(f, r, res.witness));
  return res;
}

double gowers_u2_bound(const Matrix& m) {
  require_nonempty(m, "gowers_u2_bound");
  const Matrix c = multiply_transposed(m, m);  // C(x,x') = sum_y M M
  long double acc = 0.0L;
  for (double v : c.data) acc += static_cast<long double>(v) * v;
  const long double ny = static_cast<long double>(m.cols);
  const long double nx = static_cast<long double>(m.rows);
  long double fourth = acc / (nx * nx * ny * ny);
  if (fourth < 0.0L) fourth = 0.0L;
  return static_cast<double>(std::pow(fourth, 0.25L));
}

namespace {
std::mutex fftw_plan_mutex;
}

double gowers_u2_bound(const CyclicFunction& f, U2Method method) {
  const std::int64_t N = f.modulus;
  if (N < 1) throw std::invalid_argument("gowers_u2_bound: empty cyclic group");
  if (method == U2Method::matrix) return gowers_u2_bound(sum_matrix(f));

  // sum_xi |fhat(xi)|^4 with fhat(xi) = E_n f(n) e(-n xi / N); the
  // real-input transform stores xi = 0..N/2, conjugate pairs double up.
  std::vector<double> in(f.values);
  const std::size_t nbins = static_cast<std::size_t>(N) / 2 + 1;
  std::vector<double> out(2 * nbins);
  {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex);
    fftw_plan plan = fftw_plan_dft_r2c_1d(static_cast<int>(N), in.data(),
                                          reinterpret_cast<fftw_complex*>(out.data()),
                                          FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
  }
  const double scale = 1.0 / static_cast<double>(N);
  auto quartic = [&](std::size_t bin) {
    const double re = out[2 * bin] * scale, im = out[2 * bin + 1] * scale;
    const double sq = re * re + im * im;
    return sq * sq;
  };
  long double acc = quartic(0);
  const bool even = N % 2 == 0;
  if (even && N > 1) acc += quartic(static_cast<std::size_t>(N) / 2);
  const std::size_t interior_end = even ? static_cast<std::size_t>(N) / 2 : nbins;
  for (std::size_t b = 1; b < interior_end; ++b) acc += 2.0L * quartic(b);
  if (acc < 0.0L) acc = 0.0L;
  return static_cast<double>(std::pow(acc, 0.25L));
}

CyclicFunction generalized_convolution(std::int64_t N,
                                       const std::vector<std::vector<double>>& sides) {
  const int r = static_cast<int>(sides.size());
  check_zn_budget(r, N, "generalized_convolution");
  std::uint64_t side_size = 1;
  for (int i = 0; i < r - 1; ++i) side_size *= static_cast<std::uint64_t>(N);
  for (const auto& h : sides) {
    if (h.size() != side_size) {
      throw std::invalid_argument("generalized_convolution: side size mismatch");
    }
  }

  // Enumerate (y_1, ..., y_{r-1}); y_r = x - sum is the fastest-varying
  // coordinate (stride 1) of every side j < r, and side r never sees it.
  std::vector<std::vector<std::uint64_t>> strides;
  for (int j = 0; j < r; ++j) strides.push_back(minus_j_strides(r, N, j));

  CyclicFunction outf;
  outf.modulus = N;
  outf.values.assign(static_cast<std::size_t>(N), 0.0);
  std::vector<std::int64_t> y(static_cast<std::size_t>(r - 1), 0);
  std::vector<std::uint64_t> base(static_cast<std::size_t>(r - 1), 0);
  for (std::uint64_t it = 0;; ++it) {
    std::int64_t s = 0;
    for (int i = 0; i < r - 1; ++i) s += y[static_cast<std::size_t>(i)];
    s %= N;
    std::uint64_t flat_last = 0;
    for (int i = 0; i < r - 1; ++i) {
      flat_last += static_cast<std::uint64_t>(y[static_cast<std::size_t>(i)]) *
                   strides[static_cast<std::size_t>(r - 1)][static_cast<std::size_t>(i)];
    }
    for (int j = 0; j < r - 1; ++j) {
      std::uint64_t b = 0;
      for (int i = 0; i < r - 1; ++i) {
        if (i != j) {
          b += static_cast<std::uint64_t>(y[static_cast<std::size_t>(i)]) *
               strides[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
        }
      }
      base[static_cast<std::size_t>(j)] = b;
    }
    const double hr = sides[static_cast<std::size_t>(r - 1)][flat_last];
    if (hr != 0.0) {
      for (std::int64_t xval = 0; xval < N; ++xval) {
        const std::int64_t yr = mod_reduce(xval - s, N);
        double prod = hr;
        for (int j = 0; j < r - 1; ++j) {
          prod *= sides[static_cast<std::size_t>(j)]
                       [base[static_cast<std::size_t>(j)] + static_cast<std::uint64_t>(yr)];
        }
        outf.values[static_cast<std::size_t>(xval)] += prod;
      }
    }
    if (it + 1 == side_size) break;
    for (std::size_t v = 0;; ++v) {
      if (++y[v] < N) break;
      y[v] = 0;
    }
  }
  const double denom = static_cast<double>(side_size);
  for (double& v : outf.values) v /= denom;
  return outf;
}

CyclicFunction convolve(const CyclicFunction& a, const CyclicFunction& b) {
  if (a.modulus != b.modulus) throw std::invalid_argument("convolve: modulus mismatch");
  return generalized_convolution(a.modulus, {a.values, b.values});
}

std::string StrongLFReport::pattern_label(unsigned mask) {
  std::string label(4, 'g');
  for (unsigned i = 0; i < 4; ++i) {
    if ((mask >> i) & 1u) label[i] = 't';
  }
  return label;
}

double StrongLFReport::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

std::string StrongLFReport::to_json_string(int indent) const {
  nlohmann::json j;
  j["N"] = N;
  nlohmann::json vals;
  for (unsigned mask = 0; mask < 16; ++mask) {
    vals[pattern_label(mask)] = values[mask];
  }
  j["values"] = vals;
  j["max_abs"] = max_abs();
  return j.dump(indent);
}

StrongLFReport strong_lf_check(const CyclicFunction& nu, const CyclicFunction& g,
                               const CyclicFunction& gtilde, unsigned threads) {
  const std::int64_t N = nu.modulus;
  if (N < 1) throw std::invalid_argument("strong_lf_check: empty cyclic group");
  if (g.modulus != N || gtilde.modulus != N) {
    throw std::invalid_argument("strong_lf_check: modulus mismatch");
  }
  const std::size_t n = static_cast<std::size_t>(N);

  // Centered pair weight and the four kernels the contraction mixes.
  Matrix nu_c(n, n);
  Matrix xz[2] = {Matrix(n, n), Matrix(n, n)};  // [0] = g(x-z), [1] = gtilde
  Matrix yz[2] = {Matrix(n, n), Matrix(n, n)};  // [0] = g(-y-2z), [1] = gtilde
  for (std::int64_t i = 0; i < N; ++i) {
    for (std::int64_t j = 0; j < N; ++j) {
      const std::size_t r = static_cast<std::size_t>(i), c = static_cast<std::size_t>(j);
      nu_c.at(r, c) = nu.at(2 * i + j) - 1.0;
      xz[0].at(r, c) = g.at(i - j);
      xz[1].at(r, c) = gtilde.at(i - j);
      yz[0].at(r, c) = g.at(-i - 2 * j);
      yz[1].at(r, c) = gtilde.at(-i - 2 * j);
    }
  }

  // U[a][c](x, y) = sum_z XZ_a(x, z) YZ_c(y, z); each pattern value is
  // E[(nu - 1) U[a][c] U[b][d]] with the z and z' factor choices.
  Matrix u[2][2];
  for (int a = 0; a < 2; ++a) {
    for (int c = 0; c < 2; ++c) u[a][c] = multiply_transposed(xz[a], yz[c], threads);
  }

  StrongLFReport rep;
  rep.N = N;
  const long double denom = static_cast<long double>(N) * N * N * N;
  for (unsigned mask = 0; mask < 16; ++mask) {
    const int a = mask & 1, b = (mask >> 1) & 1, c = (mask >> 2) & 1, d = (mask >> 3) & 1;
    const Matrix& u1 = u[a][c];
    const Matrix& u2 = u[b][d];
    std::vector<long double> row_totals(n, 0.0L);
    parallel_chunks(n, threads, 64, [&](std::uint64_t, std::uint64_t lo, std::uint64_t hi) {
      for (std::uint64_t x = lo; x < hi; ++x) {
        const double* w = nu_c.row(x);
        const double* p = u1.row(x);
        const double* q = u2.row(x);
        long double acc = 0.0L;
        for (std::size_t y = 0; y < n; ++y) {
          acc += static_cast<long double>(w[y]) * p[y] * q[y];
        }
        row_totals[x] = acc;
      }
    });
    long double total = 0.0L;
    for (long double v : row_totals) total += v;
    rep.values[mask] = static_cast<double>(total / denom);
  }
  return rep;
}

}  // namespace aplab
