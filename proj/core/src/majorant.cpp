#include "aplab/majorant.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "aplab/util.hpp"

namespace aplab {

void validate_modulus(std::int64_t N, int k) {
  if (k < 3) throw std::invalid_argument("modulus check: k must be >= 3");
  if (N < 3) throw std::invalid_argument("modulus check: N must be >= 3");
  if (N % 2 == 0) throw std::invalid_argument("modulus check: N must be odd");
  std::int64_t fact = 1;
  for (int i = 2; i <= k - 1; ++i) fact *= i;
  if (std::gcd(N, fact) != 1)
    throw std::invalid_argument("modulus check: N must be coprime to (k-1)!");
}

static MajorantParams make_params(std::int64_t N, int k, std::uint64_t w, CutoffFunction chi,
                                  double R) {
  validate_modulus(N, k);
  MajorantParams p;
  p.N = N;
  p.k = k;
  p.wt = make_wtrick(w);
  p.c = c_chi(chi);
  p.chi = std::move(chi);
  p.R = R;
  p.delta_k = 1.0 / (static_cast<double>(k) * std::ldexp(1.0, k + 4) * p.c);
  if (!(p.R > 1.0)) throw std::invalid_argument("majorant params: R must exceed 1");
  return p;
}

MajorantParams MajorantParams::asymptotic_defaults(std::int64_t N, int k, std::uint64_t w,
                                                   CutoffFunction chi) {
  double exponent = 1.0 / (static_cast<double>(k) * std::ldexp(1.0, k + 3));
  double R = std::pow(static_cast<double>(N), exponent);
  return make_params(N, k, w, std::move(chi), R);
}

MajorantParams MajorantParams::with_truncation(std::int64_t N, int k, std::uint64_t w,
                                               CutoffFunction chi, double R) {
  return make_params(N, k, w, std::move(chi), R);
}

CyclicFunction build_majorant(const MajorantParams& params, const SieveTables& tables,
                              unsigned threads) {
  const std::int64_t N = params.N;
  const std::uint64_t W = params.wt.W;
  if (static_cast<std::uint64_t>(N) > (tables.limit - 1) / W)
    throw std::out_of_range("build_majorant: tables must cover W*N + 1");

  CyclicFunction nu(N, 1.0);
  const std::int64_t lo = (N + 1) / 2;  // window [N/2, N) for odd N
  const double log_R = std::log(params.R);
  const double normal = static_cast<double>(params.wt.phi_W) / static_cast<double>(W) /
                        (params.c * log_R);
  // Candidate-divisor memo: evaluation is divisibility-only, so the scan
  // parallelizes over fixed index chunks with no shared state.
  const DivisorWeights weights(params.chi, params.R);
  const std::uint64_t count = static_cast<std::uint64_t>(N - lo);
  parallel_chunks(count, threads, 64, [&](std::uint64_t, std::uint64_t b, std::uint64_t e) {
    for (std::uint64_t i = b; i < e; ++i) {
      std::uint64_t n = static_cast<std::uint64_t>(lo) + i;
      double lam = weights.evaluate(W * n + 1);
      nu.values[n] = normal * lam * lam;
    }
  });
  return nu;
}

CyclicFunction restrict_to_window(const MajorantParams& params, const SieveTables& tables) {
  const std::int64_t N = params.N;
  if (static_cast<std::uint64_t>(N) > (tables.limit - 1) / params.wt.W)
    throw std::out_of_range("restrict_to_window: tables must cover W*N + 1");
  CyclicFunction f(N, 0.0);
  for (std::int64_t n = (N + 1) / 2; n < N; ++n)
    f.values[static_cast<std::size_t>(n)] =
        params.delta_k * modified_mangoldt(static_cast<std::uint64_t>(n), params.wt, tables);
  return f;
}

MajorizationReport check_majorizes(const CyclicFunction& nu, const CyclicFunction& f,
                                   const MajorantParams& params) {
  if (nu.modulus != params.N || f.modulus != params.N)
    throw std::invalid_argument("check_majorizes: modulus mismatch");
  MajorizationReport rep;
  const std::int64_t N = params.N;
  bool first = true;
  for (std::int64_t n = (N + 1) / 2; n < N; ++n) {
    double slack = nu.values[n] - f.values[n];
    ++rep.checked;
    if (first || slack < rep.min_slack) {
      rep.min_slack = slack;
      rep.argmin = n;
      first = false;
    }
    if (slack < 0.0) {
      ++rep.violations;
      if (rep.first_violation < 0) rep.first_violation = n;
    }
  }
  double WN1 = static_cast<double>(params.wt.W) * static_cast<double>(N) + 1.0;
  rep.threshold_ok = std::log(params.R) >= params.c * params.delta_k * std::log(WN1);
  return rep;
}

}  // namespace aplab
