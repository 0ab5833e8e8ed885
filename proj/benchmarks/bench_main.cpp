// Benchmarks for the hot paths: sieve construction, majorant assembly,
// divisor-sum evaluation, linear-forms expectations, cut norms, graph
// statistics, and prime-progression counting.  Thread-count arguments
// exercise the deterministic parallel paths; results are identical across
// thread counts by construction, so these measure scaling only.
//
// Run: aplab_benchmarks [--benchmark_filter=...]

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "aplab/analytic.hpp"
#include "aplab/cutoff.hpp"
#include "aplab/cyclic.hpp"
#include "aplab/dense_model.hpp"
#include "aplab/forms.hpp"
#include "aplab/graphs.hpp"
#include "aplab/majorant.hpp"
#include "aplab/norms.hpp"
#include "aplab/primes_ap.hpp"
#include "aplab/sieve.hpp"
#include "aplab/util.hpp"

namespace {

using namespace aplab;

const SieveTables& tables_100k() {
  static const SieveTables t = build_tables(100000);
  return t;
}

const SieveTables& majorant_tables() {
  // W = 30 at w = 3, so the tables cover 30 * 100001 + 1.
  static const SieveTables t = build_tables(30u * 100001u + 1u);
  return t;
}

const MajorantParams& majorant_params() {
  static const MajorantParams p = MajorantParams::with_truncation(
      100001, 3, 3, tent_cutoff(), std::pow(100001.0, 0.4));
  return p;
}

const CyclicFunction& majorant_100k() {
  static const CyclicFunction nu = build_majorant(majorant_params(), majorant_tables(), 4);
  return nu;
}

CyclicFunction random_cyclic(std::int64_t n, std::uint64_t seed, double lo, double hi) {
  CyclicFunction f(n);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(lo, hi);
  for (auto& v : f.values) v = unif(rng);
  return f;
}

void BM_BuildTables(benchmark::State& state) {
  const auto limit = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    SieveTables t = build_tables(limit);
    benchmark::DoNotOptimize(t.mangoldt.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(limit));
}
BENCHMARK(BM_BuildTables)->Arg(100000)->Arg(1000000)->Unit(benchmark::kMillisecond);

void BM_BuildMajorant(benchmark::State& state) {
  const unsigned threads = static_cast<unsigned>(state.range(0));
  const auto& p = majorant_params();
  const auto& t = majorant_tables();
  for (auto _ : state) {
    CyclicFunction nu = build_majorant(p, t, threads);
    benchmark::DoNotOptimize(nu.values.data());
  }
  state.SetItemsProcessed(state.iterations() * p.N);
}
BENCHMARK(BM_BuildMajorant)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_DivisorWeightsEvaluate(benchmark::State& state) {
  const DivisorWeights dw(tent_cutoff(), static_cast<double>(state.range(0)));
  std::uint64_t n = 12345;
  for (auto _ : state) {
    benchmark::DoNotOptimize(dw.evaluate(n));
    n += 2;
  }
  state.counters["divisors"] = static_cast<double>(dw.size());
}
BENCHMARK(BM_DivisorWeightsEvaluate)->Arg(100)->Arg(1000);

void BM_LambdaChiR(benchmark::State& state) {
  const auto& t = tables_100k();
  const CutoffFunction tent = tent_cutoff();
  for (auto _ : state) {
    double acc = 0.0;
    for (std::uint64_t n = 2; n <= 10000; ++n) acc += lambda_chi_R(n, 100.0, tent, t);
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * 9999);
}
BENCHMARK(BM_LambdaChiR)->Unit(benchmark::kMillisecond);

void BM_LfExpectationExact(benchmark::State& state) {
  const CyclicFunction nu = random_cyclic(state.range(0), 42, 0.0, 2.0);
  const ExponentPattern pat = ExponentPattern::all_ones(3);
  for (auto _ : state) benchmark::DoNotOptimize(lf_expectation_exact(nu, pat));
}
BENCHMARK(BM_LfExpectationExact)->Arg(25)->Arg(51)->Unit(benchmark::kMillisecond);

void BM_LfExpectationMc(benchmark::State& state) {
  const unsigned threads = static_cast<unsigned>(state.range(0));
  const auto& nu = majorant_100k();
  const ExponentPattern pat = ExponentPattern::all_ones(3);
  for (auto _ : state) {
    McReport r = lf_expectation_mc(nu, pat, 100000, 7, 16, threads);
    benchmark::DoNotOptimize(r.estimate);
  }
  state.SetItemsProcessed(state.iterations() * 100000);
}
BENCHMARK(BM_LfExpectationMc)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_CutnormExact(benchmark::State& state) {
  const CyclicFunction f = random_cyclic(state.range(0), 9, -1.0, 1.0);
  const Matrix m = sum_matrix(f);
  for (auto _ : state) benchmark::DoNotOptimize(cutnorm_bipartite_exact(m, 4).value);
}
BENCHMARK(BM_CutnormExact)->Arg(12)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_CutnormHeuristic(benchmark::State& state) {
  const unsigned threads = static_cast<unsigned>(state.range(0));
  const CyclicFunction f = random_cyclic(64, 9, -1.0, 1.0);
  const Matrix m = sum_matrix(f);
  for (auto _ : state)
    benchmark::DoNotOptimize(cutnorm_bipartite_heuristic(m, 32, 1, threads).value);
}
BENCHMARK(BM_CutnormHeuristic)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_GowersU2Fourier(benchmark::State& state) {
  const CyclicFunction f = random_cyclic(state.range(0), 11, -1.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(gowers_u2_bound(f, U2Method::fourier));
}
BENCHMARK(BM_GowersU2Fourier)->Arg(4096)->Arg(65536);

void BM_GowersU2Matrix(benchmark::State& state) {
  const CyclicFunction f = random_cyclic(state.range(0), 11, -1.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(gowers_u2_bound(f, U2Method::matrix));
}
BENCHMARK(BM_GowersU2Matrix)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_Convolve(benchmark::State& state) {
  const CyclicFunction a = random_cyclic(state.range(0), 13, 0.0, 1.0);
  const CyclicFunction b = random_cyclic(state.range(0), 14, 0.0, 1.0);
  for (auto _ : state) {
    CyclicFunction c = convolve(a, b);
    benchmark::DoNotOptimize(c.values.data());
  }
}
BENCHMARK(BM_Convolve)->Arg(1024)->Arg(4096);

void BM_TriangleDensity(benchmark::State& state) {
  const unsigned threads = static_cast<unsigned>(state.range(0));
  const CyclicFunction f = random_cyclic(401, 17, 0.0, 1.0);
  const WeightedTripartiteGraph g = graph_from_measure(f);
  for (auto _ : state) benchmark::DoNotOptimize(triangle_density(g, threads));
}
BENCHMARK(BM_TriangleDensity)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_Densify(benchmark::State& state) {
  const unsigned threads = static_cast<unsigned>(state.range(0));
  const CyclicFunction f = random_cyclic(401, 17, 0.0, 1.0);
  const WeightedTripartiteGraph g = graph_from_measure(f);
  for (auto _ : state) {
    Matrix m = densify(g, GraphSide::XY, threads);
    benchmark::DoNotOptimize(m.data.data());
  }
}
BENCHMARK(BM_Densify)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_FindDenseModel(benchmark::State& state) {
  const std::int64_t N = 11;
  const auto p = MajorantParams::with_truncation(N, 3, 2, tent_cutoff(), 10.0);
  const SieveTables t = build_tables(p.wt.W * static_cast<std::uint64_t>(N) + 1);
  const CyclicFunction nu = build_majorant(p, t, 4);
  ModelSearchConfig config;
  config.max_rounds = 8;
  config.threads = 4;
  for (auto _ : state) {
    DenseModelResult r = find_dense_model(nu, config);
    benchmark::DoNotOptimize(r.achieved_gap);
  }
}
BENCHMARK(BM_FindDenseModel)->Unit(benchmark::kMillisecond);

void BM_CountPrimeAps(benchmark::State& state) {
  const unsigned threads = static_cast<unsigned>(state.range(0));
  const auto& t = tables_100k();
  for (auto _ : state) benchmark::DoNotOptimize(count_prime_aps(100000, 3, t, threads));
}
BENCHMARK(BM_CountPrimeAps)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_FourierProfile(benchmark::State& state) {
  const CutoffFunction bump = smooth_bump_cutoff(0.5);
  for (auto _ : state) {
    FourierProfile p = fourier_profile(bump, 50.0, 2001, 1e-8);
    benchmark::DoNotOptimize(p);
  }
}
BENCHMARK(BM_FourierProfile)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
