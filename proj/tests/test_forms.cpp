#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

#include "aplab/cutoff.hpp"
#include "aplab/cyclic.hpp"
#include "aplab/forms.hpp"
#include "aplab/sieve.hpp"
#include "aplab/util.hpp"

using namespace aplab;

namespace {

CyclicFunction smooth_test_function(std::int64_t N) {
  CyclicFunction f;
  f.modulus = N;
  f.values.resize(static_cast<std::size_t>(N));
  for (std::int64_t n = 0; n < N; ++n) {
    const double x = static_cast<double>(n) / static_cast<double>(N);
    f.values[static_cast<std::size_t>(n)] = 1.0 + 0.5 * std::sin(6.283185307179586 * x) +
                                            0.25 * std::cos(12.566370614359172 * x + 0.7);
  }
  return f;
}

// Brute-force doubled-variable expectation: full 2k-fold nested loop.
double brute_expectation(const CyclicFunction& nu, const ExponentPattern& pattern) {
  const std::int64_t N = nu.modulus;
  const int k = pattern.k;
  const std::size_t nvars = 2 * static_cast<std::size_t>(k);
  const std::uint32_t half = 1u << (k - 1);

  struct Term {
    std::size_t var;
    std::int64_t coeff;
  };
  std::vector<std::vector<Term>> factors;
  for (int j = 1; j <= k; ++j) {
    for (std::uint32_t w = 0; w < half; ++w) {
      if (!pattern.on[pattern.slot(j, w)]) continue;
      std::vector<Term> terms;
      for (int i = 1; i <= k; ++i) {
        if (i == j) continue;
        const std::size_t pos = static_cast<std::size_t>(i < j ? i - 1 : i - 2);
        const std::size_t copy = (w >> pos) & 1u;
        terms.push_back({static_cast<std::size_t>(i - 1) * 2 + copy, mod_reduce(j - i, N)});
      }
      factors.push_back(std::move(terms));
    }
  }

  std::vector<std::int64_t> x(nvars, 0);
  long double acc = 0.0L;
  std::uint64_t tuples = 1;
  for (std::size_t v = 0; v < nvars; ++v) tuples *= static_cast<std::uint64_t>(N);
  for (std::uint64_t it = 0; it < tuples; ++it) {
    double prod = 1.0;
    for (const auto& terms : factors) {
      std::int64_t r = 0;
      for (const Term& t : terms) r = (r + x[t.var] * t.coeff) % N;
      prod *= nu.values[static_cast<std::size_t>(r)];
    }
    acc += prod;
    for (std::size_t v = 0; v < nvars; ++v) {
      if (++x[v] < N) break;
      x[v] = 0;
    }
  }
  return static_cast<double>(acc / static_cast<long double>(tuples));
}

}  // namespace

TEST_CASE("kap_forms emits the progression forms in descending-j order") {
  const LinearFormsSystem sys = kap_forms(3);
  REQUIRE(sys.t == 3);
  REQUIRE(sys.forms.size() == 3);
  // j = 3: 2 x1 + x2;  j = 2: x1 - x3;  j = 1: -x2 - 2 x3.
  CHECK(sys.forms[0].coeffs == std::vector<std::int64_t>{2, 1, 0});
  CHECK(sys.forms[1].coeffs == std::vector<std::int64_t>{1, 0, -1});
  CHECK(sys.forms[2].coeffs == std::vector<std::int64_t>{0, -1, -2});
  for (const auto& f : sys.forms) {
    CHECK(f.constant == 0);
    CHECK(f.w_scale == 1);
  }

  const LinearFormsSystem sys4 = kap_forms(4);
  CHECK(sys4.forms[0].coeffs == std::vector<std::int64_t>{3, 2, 1, 0});
  CHECK(sys4.forms[3].coeffs == std::vector<std::int64_t>{0, -1, -2, -3});
}

TEST_CASE("kap_forms parametrizes an arithmetic progression") {
  // psi_j(x) - psi_1(x) = (j - 1) * sum_i x_i for every x, so the tuple
  // (psi_1, ..., psi_k) is the AP with start psi_1 and step sum x_i.
  std::mt19937_64 rng(42);
  for (int k = 3; k <= 6; ++k) {
    const LinearFormsSystem sys = kap_forms(k);
    for (int rep = 0; rep < 20; ++rep) {
      std::vector<std::int64_t> x(static_cast<std::size_t>(k));
      std::int64_t total = 0;
      for (auto& xi : x) {
        xi = static_cast<std::int64_t>(rng() % 2001) - 1000;
        total += xi;
      }
      const std::int64_t start = sys.forms[static_cast<std::size_t>(k - 1)].eval(x);  // j = 1
      for (int j = 1; j <= k; ++j) {
        const std::int64_t value = sys.forms[static_cast<std::size_t>(k - j)].eval(x);
        CHECK(value == start + static_cast<std::int64_t>(j - 1) * total);
      }
    }
  }
}

TEST_CASE("pairwise independence accepts AP forms and rejects proportional pairs") {
  for (int k = 3; k <= 6; ++k) CHECK(kap_forms(k).pairwise_independent());

  LinearFormsSystem bad;
  bad.t = 2;
  bad.forms.resize(2);
  bad.forms[0].coeffs = {1, -2};
  bad.forms[1].coeffs = {-3, 6};  // -3 * (1, -2)
  CHECK_FALSE(bad.pairwise_independent());

  LinearFormsSystem zero;
  zero.t = 2;
  zero.forms.resize(1);
  zero.forms[0].coeffs = {0, 0};
  CHECK_FALSE(zero.pairwise_independent());

  LinearFormsSystem ok;
  ok.t = 2;
  ok.forms.resize(2);
  ok.forms[0].coeffs = {1, 0};
  ok.forms[1].coeffs = {1, 1};
  CHECK(ok.pairwise_independent());
}

TEST_CASE("exponent pattern slots, singles, and enumeration") {
  const ExponentPattern ones = ExponentPattern::all_ones(3);
  REQUIRE(ones.on.size() == 12);
  CHECK(ones.active_count() == 12);
  CHECK(ExponentPattern::all_zeros(3).active_count() == 0);
  CHECK(ExponentPattern::all_ones(4).on.size() == 32);

  // Slot layout: j-major, omega within.
  CHECK(ones.slot(1, 0) == 0);
  CHECK(ones.slot(1, 3) == 3);
  CHECK(ones.slot(2, 0) == 4);
  CHECK(ones.slot(3, 3) == 11);
  CHECK_THROWS_AS((void)ones.slot(4, 0), std::out_of_range);
  CHECK_THROWS_AS((void)ones.slot(1, 4), std::out_of_range);

  const ExponentPattern s = ExponentPattern::single(3, 2, 1);
  CHECK(s.active_count() == 1);
  CHECK(s.on[5] == 1);
  CHECK(s.to_string() == "000001000000");

  const auto all = all_patterns(3);
  CHECK(all.size() == 4096);
  std::set<std::string> distinct;
  for (const auto& p : all) distinct.insert(p.to_string());
  CHECK(distinct.size() == 4096);
  CHECK_THROWS_AS(all_patterns(4), std::invalid_argument);
}

TEST_CASE("sample_patterns seeds the mandatory patterns and is deterministic") {
  const auto a = sample_patterns(4, 64, 2024);
  const auto b = sample_patterns(4, 64, 2024);
  REQUIRE(a.size() == 64);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].to_string() == b[i].to_string());

  CHECK(a[0].to_string() == ExponentPattern::all_ones(4).to_string());
  // Next come all 4 * 8 single-factor patterns.
  std::set<std::string> got;
  for (std::size_t i = 1; i <= 32; ++i) got.insert(a[i].to_string());
  for (int j = 1; j <= 4; ++j) {
    for (std::uint32_t w = 0; w < 8; ++w) {
      CHECK(got.count(ExponentPattern::single(4, j, w).to_string()) == 1);
    }
  }
  std::set<std::string> distinct;
  for (const auto& p : a) distinct.insert(p.to_string());
  CHECK(distinct.size() == 64);

  const auto c = sample_patterns(4, 64, 2025);
  bool same_tail = true;
  for (std::size_t i = 33; i < 64; ++i) same_tail = same_tail && a[i].to_string() == c[i].to_string();
  CHECK_FALSE(same_tail);
}

TEST_CASE("exact expectation matches the nested-loop oracle on Z_7") {
  const CyclicFunction nu = smooth_test_function(7);
  std::vector<ExponentPattern> probes;
  probes.push_back(ExponentPattern::all_ones(3));
  probes.push_back(ExponentPattern::single(3, 1, 0));
  probes.push_back(ExponentPattern::single(3, 2, 3));
  probes.push_back(ExponentPattern::single(3, 3, 2));
  {
    ExponentPattern p = ExponentPattern::all_zeros(3);
    p.on[p.slot(1, 1)] = 1;
    p.on[p.slot(2, 2)] = 1;
    p.on[p.slot(3, 0)] = 1;
    p.on[p.slot(3, 3)] = 1;
    probes.push_back(p);
  }
  {
    ExponentPattern p = ExponentPattern::all_ones(3);
    p.on[p.slot(2, 1)] = 0;
    p.on[p.slot(1, 2)] = 0;
    probes.push_back(p);
  }
  for (const auto& p : probes) {
    const double fast = lf_expectation_exact(nu, p);
    const double slow = brute_expectation(nu, p);
    CHECK(std::abs(fast - slow) < 1e-10);
  }
}

TEST_CASE("exact expectation matches the nested-loop oracle on Z_11") {
  const CyclicFunction nu = smooth_test_function(11);
  const ExponentPattern ones = ExponentPattern::all_ones(3);
  CHECK(std::abs(lf_expectation_exact(nu, ones) - brute_expectation(nu, ones)) < 1e-10);

  ExponentPattern mixed = ExponentPattern::all_zeros(3);
  mixed.on[mixed.slot(1, 0)] = 1;
  mixed.on[mixed.slot(2, 1)] = 1;
  mixed.on[mixed.slot(3, 3)] = 1;
  CHECK(std::abs(lf_expectation_exact(nu, mixed) - brute_expectation(nu, mixed)) < 1e-10);
}

TEST_CASE("exact expectation of the empty pattern is exactly 1") {
  const CyclicFunction nu = smooth_test_function(9);
  CHECK(lf_expectation_exact(nu, ExponentPattern::all_zeros(3)) == 1.0);
}

TEST_CASE("single-factor expectation equals the plain mean") {
  // With one factor the argument is a single invertible-coefficient form
  // in fresh uniform variables, so the law of the argument is uniform.
  const CyclicFunction nu = smooth_test_function(13);
  for (int j = 1; j <= 3; ++j) {
    const double e = lf_expectation_exact(nu, ExponentPattern::single(3, j, 1));
    CHECK(std::abs(e - nu.mean()) < 1e-12);
  }
}

TEST_CASE("expectations are translation invariant") {
  const CyclicFunction nu = smooth_test_function(7);
  CyclicFunction shifted;
  shifted.modulus = 7;
  shifted.values.resize(7);
  for (std::int64_t n = 0; n < 7; ++n) shifted.values[static_cast<std::size_t>(n)] = nu.at(n + 3);

  std::vector<ExponentPattern> probes = {ExponentPattern::all_ones(3),
                                         ExponentPattern::single(3, 2, 2)};
  {
    ExponentPattern p = ExponentPattern::all_zeros(3);
    p.on[p.slot(1, 3)] = 1;
    p.on[p.slot(3, 1)] = 1;
    probes.push_back(p);
  }
  for (const auto& p : probes) {
    CHECK(std::abs(lf_expectation_exact(nu, p) - lf_expectation_exact(shifted, p)) < 1e-10);
  }
}

TEST_CASE("exact path refuses work beyond its operation budget") {
  const CyclicFunction nu = smooth_test_function(31);
  try {
    (void)lf_expectation_exact(nu, ExponentPattern::all_ones(3), /*op_budget=*/1000);
    FAIL("expected OperationBudgetExceeded");
  } catch (const OperationBudgetExceeded& e) {
    CHECK(std::string(e.what()).find("Monte-Carlo") != std::string::npos);
  }
}

TEST_CASE("Monte-Carlo estimate agrees with exact within four standard errors") {
  const CyclicFunction nu = smooth_test_function(11);
  const ExponentPattern ones = ExponentPattern::all_ones(3);
  const double exact = lf_expectation_exact(nu, ones);
  const McReport rep = lf_expectation_mc(nu, ones, 200000, /*seed=*/7);
  CHECK(rep.samples == 200000);
  CHECK(rep.stderr_est > 0.0);
  CHECK(std::abs(rep.estimate - exact) <= 4.0 * rep.stderr_est);
}

TEST_CASE("Monte-Carlo results are bitwise reproducible and thread independent") {
  const CyclicFunction nu = smooth_test_function(101);
  const ExponentPattern ones = ExponentPattern::all_ones(3);
  const McReport a = lf_expectation_mc(nu, ones, 50000, 99, 16, /*threads=*/1);
  const McReport b = lf_expectation_mc(nu, ones, 50000, 99, 16, /*threads=*/4);
  CHECK(a.estimate == b.estimate);
  CHECK(a.stderr_est == b.stderr_est);

  const McReport c = lf_expectation_mc(nu, ones, 50000, 100, 16, 1);
  CHECK(a.estimate != c.estimate);

  const McReport anti1 = lf_expectation_mc(nu, ones, 50000, 99, 16, 1, /*antithetic=*/true);
  const McReport anti4 = lf_expectation_mc(nu, ones, 50000, 99, 16, 4, /*antithetic=*/true);
  CHECK(anti1.estimate == anti4.estimate);
  CHECK(anti1.antithetic);

  CHECK_THROWS_AS(lf_expectation_mc(nu, ones, 10, 1), std::invalid_argument);
}

TEST_CASE("Monte-Carlo report serializes to JSON") {
  const CyclicFunction nu = smooth_test_function(11);
  const McReport rep = lf_expectation_mc(nu, ExponentPattern::all_ones(3), 1000, 5);
  const std::string js = rep.to_json_string();
  CHECK(js.find("\"estimate\"") != std::string::npos);
  CHECK(js.find("\"stderr\"") != std::string::npos);
  CHECK(js.find("\"seed\": 5") != std::string::npos);
}

TEST_CASE("box correlation: empty system gives ratio exactly 1") {
  const WTrick wt = make_wtrick(2);
  LinearFormsSystem empty;
  empty.t = 1;
  Box box;
  box.dims = {{1, 1000}};
  const auto rep =
      box_correlation_experiment(empty, wt, box, 10.0, tent_cutoff(), 2000, 1);
  CHECK(rep.lhs == 1.0);
  CHECK(rep.rhs == 1.0);
  CHECK(rep.ratio == 1.0);
  CHECK(rep.stderr_est == 0.0);
}

TEST_CASE("box correlation matches full enumeration on a small box") {
  const WTrick wt = make_wtrick(2);
  LinearFormsSystem sys;
  sys.t = 1;
  sys.forms.resize(1);
  sys.forms[0].coeffs = {1};

  Box box;
  box.dims = {{1, 400}};
  const double R = 12.0;
  const CutoffFunction chi = tent_cutoff();
  const DivisorWeights dw(chi, R);
  double exact = 0.0;
  for (std::int64_t x = 1; x < 400; ++x) {
    const double lam = dw.evaluate(static_cast<std::uint64_t>(wt.W * x + 1));
    exact += lam * lam;
  }
  exact /= 399.0;

  const auto rep = box_correlation_experiment(sys, wt, box, R, chi, 400000, 11);
  CHECK(std::abs(rep.lhs - exact) <= 4.0 * rep.stderr_est);
  CHECK(rep.rhs == doctest::Approx(static_cast<double>(wt.W) / static_cast<double>(wt.phi_W) *
                                   std::log(R))
                       .epsilon(1e-12));
  CHECK(rep.ratio == rep.lhs / rep.rhs);
  CHECK(rep.ratio_lo < rep.ratio);
  CHECK(rep.ratio_hi > rep.ratio);

  const auto rep4 = box_correlation_experiment(sys, wt, box, R, chi, 400000, 11, 16, 4);
  CHECK(rep.lhs == rep4.lhs);
  CHECK(rep.stderr_est == rep4.stderr_est);
}

TEST_CASE("box correlation validates its inputs") {
  const WTrick wt = make_wtrick(2);
  LinearFormsSystem sys;
  sys.t = 1;
  sys.forms.resize(2);
  sys.forms[0].coeffs = {1};
  sys.forms[1].coeffs = {2};  // proportional to the first
  Box box;
  box.dims = {{1, 100}};
  CHECK_THROWS_AS(box_correlation_experiment(sys, wt, box, 10.0, tent_cutoff(), 2000, 1),
                  std::invalid_argument);

  LinearFormsSystem neg;
  neg.t = 1;
  neg.forms.resize(1);
  neg.forms[0].coeffs = {-1};  // W * (-x) + 1 < 1 on [1, 100)
  CHECK_THROWS_AS(box_correlation_experiment(neg, wt, box, 10.0, tent_cutoff(), 2000, 1),
                  std::domain_error);
}

TEST_CASE("local zero counts match brute force for the 3-AP system") {
  const WTrick wt = make_wtrick(3);  // W = 6
  const LinearFormsSystem sys = kap_forms(3);

  for (std::uint64_t p : {5ULL, 7ULL, 11ULL}) {
    for (std::uint32_t mask = 0; mask < 8; ++mask) {
      std::uint64_t brute = 0;
      for (std::uint64_t x1 = 0; x1 < p; ++x1) {
        for (std::uint64_t x2 = 0; x2 < p; ++x2) {
          for (std::uint64_t x3 = 0; x3 < p; ++x3) {
            bool all = true;
            const std::vector<std::int64_t> x = {static_cast<std::int64_t>(x1),
                                                 static_cast<std::int64_t>(x2),
                                                 static_cast<std::int64_t>(x3)};
            for (std::size_t fi = 0; fi < 3; ++fi) {
              if (!((mask >> fi) & 1u)) continue;
              const std::int64_t theta = wt.W * sys.forms[fi].eval(x) + 1;
              if (mod_reduce(theta, static_cast<std::int64_t>(p)) != 0) {
                all = false;
                break;
              }
            }
            if (all) ++brute;
          }
        }
      }
      const auto [count, total] = local_zero_count(sys, wt, p, mask);
      CHECK(total == p * p * p);
      CHECK(count == brute);
    }
  }
}

TEST_CASE("local zero counts vanish at primes dividing W") {
  const WTrick wt = make_wtrick(3);  // W = 6
  const LinearFormsSystem sys = kap_forms(3);
  for (std::uint64_t p : {2ULL, 3ULL}) {
    for (std::uint32_t mask = 1; mask < 8; ++mask) {
      const auto [count, total] = local_zero_count(sys, wt, p, mask);
      CHECK(count == 0);
      CHECK(total == p * p * p);
    }
    const auto [count0, total0] = local_zero_count(sys, wt, p, 0);
    CHECK(count0 == total0);
  }
}
