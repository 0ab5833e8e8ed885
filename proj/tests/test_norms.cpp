#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "aplab/cyclic.hpp"
#include "aplab/matrix.hpp"
#include "aplab/norms.hpp"
#include "aplab/util.hpp"

using namespace aplab;

namespace {

Matrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng, double lo,
                     double hi) {
  Matrix m(rows, cols);
  std::uniform_real_distribution<double> dist(lo, hi);
  for (double& v : m.data) v = dist(rng);
  return m;
}

CyclicFunction random_cyclic(std::int64_t N, std::mt19937_64& rng, double lo, double hi) {
  CyclicFunction f;
  f.modulus = N;
  f.values.resize(static_cast<std::size_t>(N));
  std::uniform_real_distribution<double> dist(lo, hi);
  for (double& v : f.values) v = dist(rng);
  return f;
}

// Full double-subset enumeration of the cut norm (both sides), O(4^N).
double cutnorm_double_enumeration(const Matrix& g) {
  const std::size_t m = g.rows, n = g.cols;
  double best = 0.0;
  for (std::uint32_t a = 0; a < (1u << m); ++a) {
    for (std::uint32_t b = 0; b < (1u << n); ++b) {
      double s = 0.0;
      for (std::size_t x = 0; x < m; ++x) {
        if (!((a >> x) & 1u)) continue;
        for (std::size_t y = 0; y < n; ++y) {
          if ((b >> y) & 1u) s += g.at(x, y);
        }
      }
      best = std::max(best, std::abs(s));
    }
  }
  return best / (static_cast<double>(m) * static_cast<double>(n));
}

double gowers_quadruple_oracle(const Matrix& m) {
  const std::size_t nx = m.rows, ny = m.cols;
  long double acc = 0.0L;
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t xp = 0; xp < nx; ++xp) {
      for (std::size_t y = 0; y < ny; ++y) {
        for (std::size_t yp = 0; yp < ny; ++yp) {
          acc += static_cast<long double>(m.at(x, y)) * m.at(xp, y) * m.at(x, yp) * m.at(xp, yp);
        }
      }
    }
  }
  long double fourth =
      acc / (static_cast<long double>(nx) * nx * static_cast<long double>(ny) * ny);
  if (fourth < 0.0L) fourth = 0.0L;
  return static_cast<double>(std::pow(fourth, 0.25L));
}

}  // namespace

TEST_CASE("exact cut norm: constants and the zero matrix") {
  Matrix zero(6, 4, 0.0);
  const CutNormResult rz = cutnorm_bipartite_exact(zero);
  CHECK(rz.value == 0.0);
  CHECK(rz.exact);
  for (auto bit : rz.witness[0]) CHECK(bit == 0);
  for (auto bit : rz.witness[1]) CHECK(bit == 0);

  Matrix c(5, 7, 0.75);
  const CutNormResult rc = cutnorm_bipartite_exact(c);
  CHECK(rc.value == doctest::Approx(0.75).epsilon(1e-14));
  for (auto bit : rc.witness[0]) CHECK(bit == 1);
  for (auto bit : rc.witness[1]) CHECK(bit == 1);
}

TEST_CASE("exact cut norm matches double enumeration on random sign matrices") {
  std::mt19937_64 rng(314);
  for (int rep = 0; rep < 20; ++rep) {
    Matrix g(6, 6);
    for (double& v : g.data) v = (rng() & 1u) ? 1.0 : -1.0;
    const double oracle = cutnorm_double_enumeration(g);
    const CutNormResult res = cutnorm_bipartite_exact(g);
    CHECK(res.value == doctest::Approx(oracle).epsilon(1e-12));
    // Witness validity.
    CHECK(std::abs(std::abs(bipartite_objective(g, res.witness[0], res.witness[1])) - res.value) <
          1e-12);
  }
  // Rectangular case, real entries.
  for (int rep = 0; rep < 10; ++rep) {
    Matrix g = random_matrix(5, 8, rng, -1.0, 1.0);
    CHECK(cutnorm_bipartite_exact(g).value ==
          doctest::Approx(cutnorm_double_enumeration(g)).epsilon(1e-12));
  }
}

TEST_CASE("exact cut norm enumerates the smaller side and guards size") {
  std::mt19937_64 rng(217);
  // 30 columns but only 8 rows: must still be exact.
  Matrix wide = random_matrix(8, 30, rng, -2.0, 2.0);
  const CutNormResult res = cutnorm_bipartite_exact(wide);
  CHECK(res.exact);
  CHECK(std::abs(std::abs(bipartite_objective(wide, res.witness[0], res.witness[1])) -
                 res.value) < 1e-12);

  Matrix big(26, 26, 1.0);
  CHECK_THROWS_AS(cutnorm_bipartite_exact(big), std::length_error);
}

TEST_CASE("exact cut norm is bitwise thread independent") {
  std::mt19937_64 rng(99);
  Matrix g = random_matrix(18, 18, rng, -1.0, 1.0);
  const CutNormResult a = cutnorm_bipartite_exact(g, 1);
  const CutNormResult b = cutnorm_bipartite_exact(g, 4);
  CHECK(a.value == b.value);
  CHECK(a.witness == b.witness);
}

TEST_CASE("heuristic cut norm never exceeds exact and calibrates well") {
  std::mt19937_64 rng(555);
  int matches = 0;
  const int trials = 200;
  for (int rep = 0; rep < trials; ++rep) {
    Matrix g = random_matrix(10, 10, rng, -1.0, 1.0);
    const double exact = cutnorm_bipartite_exact(g).value;
    const CutNormResult h =
        cutnorm_bipartite_heuristic(g, 32, static_cast<std::uint64_t>(rep));
    CHECK_FALSE(h.exact);
    CHECK(h.value <= exact + 1e-12);
    CHECK(std::abs(std::abs(bipartite_objective(g, h.witness[0], h.witness[1])) - h.value) <
          1e-12);
    if (h.value >= exact - 1e-9) ++matches;
  }
  // Calibration: >= 95% of 200 random 10x10 instances reach the optimum.
  CHECK(matches >= 190);
}

TEST_CASE("heuristic cut norm is deterministic and thread independent") {
  std::mt19937_64 rng(77);
  Matrix g = random_matrix(40, 40, rng, -1.0, 1.0);
  const CutNormResult a = cutnorm_bipartite_heuristic(g, 16, 42, 1);
  const CutNormResult b = cutnorm_bipartite_heuristic(g, 16, 42, 4);
  const CutNormResult c = cutnorm_bipartite_heuristic(g, 16, 42, 1);
  CHECK(a.value == b.value);
  CHECK(a.witness == b.witness);
  CHECK(a.value == c.value);
  CHECK_THROWS_AS(cutnorm_bipartite_heuristic(g, 0, 1), std::invalid_argument);
}

TEST_CASE("Z_N cut norm: zero function, L1 domination, r=2 reduction") {
  std::mt19937_64 rng(2718);
  CyclicFunction zero;
  zero.modulus = 9;
  zero.values.assign(9, 0.0);
  CHECK(cutnorm_zn(zero, 2).value == 0.0);

  for (int rep = 0; rep < 25; ++rep) {
    const CyclicFunction f = random_cyclic(11, rng, -1.0, 1.0);
    const CutNormResult res = cutnorm_zn(f, 2);
    CHECK(res.exact);
    double l1 = 0.0;
    for (double v : f.values) l1 += std::abs(v);
    l1 /= 11.0;
    CHECK(res.value <= l1 + 1e-12);
    CHECK(res.value == cutnorm_bipartite_exact(sum_matrix(f)).value);
  }

  // Beyond the exact limit the result is flagged heuristic.
  const CyclicFunction big = random_cyclic(40, rng, -1.0, 1.0);
  ZnCutOptions opts;
  opts.restarts = 8;
  CHECK_FALSE(cutnorm_zn(big, 2, opts).exact);
}

TEST_CASE("Z_N cut norm axioms on the exact path") {
  std::mt19937_64 rng(31415);
  for (int rep = 0; rep < 10; ++rep) {
    const CyclicFunction f = random_cyclic(13, rng, -1.0, 1.0);
    CyclicFunction g = random_cyclic(13, rng, -1.0, 1.0);

    // Absolute homogeneity.
    CyclicFunction scaled = f;
    for (double& v : scaled.values) v *= -2.5;
    CHECK(cutnorm_zn(scaled, 2).value ==
          doctest::Approx(2.5 * cutnorm_zn(f, 2).value).epsilon(1e-12));

    // Triangle inequality.
    CyclicFunction sum = f;
    for (std::size_t i = 0; i < 13; ++i) sum.values[i] += g.values[i];
    CHECK(cutnorm_zn(sum, 2).value <=
          cutnorm_zn(f, 2).value + cutnorm_zn(g, 2).value + 1e-12);
  }
}

TEST_CASE("arity-3 cut norm: ascent finds the constant optimum and validates witnesses") {
  CyclicFunction c;
  c.modulus = 7;
  c.values.assign(7, 0.4);
  ZnCutOptions opts;
  opts.restarts = 4;
  const CutNormResult res = cutnorm_zn(c, 3, opts);
  CHECK_FALSE(res.exact);
  CHECK(res.r == 3);
  REQUIRE(res.witness.size() == 3);
  REQUIRE(res.witness[0].size() == 49);
  CHECK(res.value == doctest::Approx(0.4).epsilon(1e-12));

  std::mt19937_64 rng(606);
  const CyclicFunction f = random_cyclic(9, rng, -1.0, 1.0);
  const CutNormResult rf = cutnorm_zn(f, 3, opts);
  CHECK(std::abs(std::abs(zn_objective(f, 3, rf.witness)) - rf.value) < 1e-12);

  const CutNormResult rf4 = cutnorm_zn(f, 3, [&] {
    ZnCutOptions o = opts;
    o.threads = 4;
    return o;
  }());
  CHECK(rf.value == rf4.value);

  CyclicFunction too_big;
  too_big.modulus = 65;
  too_big.values.assign(65, 1.0);
  CHECK_THROWS_AS(cutnorm_zn(too_big, 3, opts), std::length_error);
}

TEST_CASE("form-twisted objective equals the plain objective under coordinate scaling") {
  // Arity 3 with the 4-AP lead form coefficients (3, 2, 1): scaling
  // x_i by c_i is a bijection when gcd(c_i, N) = 1, so the twisted cut
  // norm's objectives are a relabeling of the plain ones.
  auto inverse_mod = [](std::int64_t c, std::int64_t N) {
    for (std::int64_t i = 1; i < N; ++i) {
      if (mod_reduce(c * i, N) == 1) return i;
    }
    throw std::runtime_error("no inverse");
  };
  std::mt19937_64 rng(42424);
  for (std::int64_t N : {7, 11}) {
    const std::vector<std::int64_t> coeffs = {3, 2, 1};
    std::vector<std::int64_t> inv(3);
    for (int i = 0; i < 3; ++i) inv[static_cast<std::size_t>(i)] = inverse_mod(coeffs[static_cast<std::size_t>(i)], N);
    for (int rep = 0; rep < 10; ++rep) {
      const CyclicFunction f = random_cyclic(N, rng, -1.0, 1.0);
      const std::size_t side = static_cast<std::size_t>(N * N);
      std::vector<std::vector<std::uint8_t>> sets(3, std::vector<std::uint8_t>(side));
      for (auto& s : sets) {
        for (auto& bit : s) bit = static_cast<std::uint8_t>(rng() & 1u);
      }
      // Transport: A'_j holds u_{-j} iff (c_i^{-1} u_i)_{i != j} is in A_j.
      std::vector<std::vector<std::uint8_t>> transported(3, std::vector<std::uint8_t>(side));
      for (int j = 0; j < 3; ++j) {
        int others[2];
        int pos = 0;
        for (int i = 0; i < 3; ++i) {
          if (i != j) others[pos++] = i;
        }
        for (std::int64_t u0 = 0; u0 < N; ++u0) {
          for (std::int64_t u1 = 0; u1 < N; ++u1) {
            const std::int64_t s0 = mod_reduce(inv[static_cast<std::size_t>(others[0])] * u0, N);
            const std::int64_t s1 = mod_reduce(inv[static_cast<std::size_t>(others[1])] * u1, N);
            transported[static_cast<std::size_t>(j)]
                       [static_cast<std::size_t>(u0 * N + u1)] =
                sets[static_cast<std::size_t>(j)][static_cast<std::size_t>(s0 * N + s1)];
          }
        }
      }
      const double twisted = zn_objective_twisted(f, coeffs, sets);
      const double plain = zn_objective(f, 3, transported);
      CHECK(std::abs(twisted - plain) < 1e-12);
    }
  }
}

TEST_CASE("Gowers bound: zeros, oracle agreement, and path agreement") {
  Matrix z(5, 5, 0.0);
  CHECK(gowers_u2_bound(z) == 0.0);

  std::mt19937_64 rng(808);
  for (int rep = 0; rep < 10; ++rep) {
    Matrix m(8, 8);
    for (double& v : m.data) v = (rng() & 1u) ? 1.0 : 0.0;
    CHECK(gowers_u2_bound(m) == doctest::Approx(gowers_quadruple_oracle(m)).epsilon(1e-12));
  }

  for (std::int64_t N : {8, 9, 16, 25}) {
    const CyclicFunction f = random_cyclic(N, rng, -1.0, 1.0);
    const double fast = gowers_u2_bound(f, U2Method::fourier);
    const double mat = gowers_u2_bound(f, U2Method::matrix);
    CHECK(std::abs(fast - mat) < 1e-10);
    CHECK(std::abs(fast - gowers_quadruple_oracle(sum_matrix(f))) < 1e-10);
  }
}

TEST_CASE("cut norm is dominated by the Gowers bound") {
  std::mt19937_64 rng(911);
  for (int rep = 0; rep < 100; ++rep) {
    const std::int64_t N = 5 + static_cast<std::int64_t>(rng() % 8);  // 5..12
    const CyclicFunction f = random_cyclic(N, rng, -1.0, 1.0);
    const double cut = cutnorm_zn(f, 2).value;
    const double gow = gowers_u2_bound(f);
    CHECK(cut <= gow + 1e-12);
  }
  for (int rep = 0; rep < 100; ++rep) {
    Matrix m = random_matrix(10, 10, rng, -1.0, 1.0);
    CHECK(cutnorm_bipartite_exact(m).value <= gowers_u2_bound(m) + 1e-12);
  }
}

TEST_CASE("generalized convolution: indicator of everything, r=2 formula, r=3 oracle") {
  const std::int64_t N = 6;
  std::vector<double> ones(static_cast<std::size_t>(N), 1.0);
  const CyclicFunction full = generalized_convolution(N, {ones, ones});
  for (double v : full.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));

  std::mt19937_64 rng(1234);
  const CyclicFunction a = random_cyclic(N, rng, 0.0, 1.0);
  const CyclicFunction b = random_cyclic(N, rng, 0.0, 1.0);
  const CyclicFunction conv = convolve(a, b);
  for (std::int64_t x = 0; x < N; ++x) {
    double direct = 0.0;
    for (std::int64_t y = 0; y < N; ++y) direct += a.at(y) * b.at(x - y);
    direct /= static_cast<double>(N);
    CHECK(conv.at(x) == doctest::Approx(direct).epsilon(1e-13));
  }

  // r = 3 against a full fibre enumeration.
  const std::int64_t M = 4;
  std::vector<std::vector<double>> sides(3, std::vector<double>(static_cast<std::size_t>(M * M)));
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  for (auto& s : sides) {
    for (double& v : s) v = dist(rng);
  }
  const CyclicFunction fast = generalized_convolution(M, sides);
  for (std::int64_t x = 0; x < M; ++x) {
    double brute = 0.0;
    for (std::int64_t y1 = 0; y1 < M; ++y1) {
      for (std::int64_t y2 = 0; y2 < M; ++y2) {
        const std::int64_t y3 = mod_reduce(x - y1 - y2, M);
        // Sides are indexed by the remaining coordinates, increasing,
        // first slowest: h1(y2, y3), h2(y1, y3), h3(y1, y2).
        brute += sides[0][static_cast<std::size_t>(y2 * M + y3)] *
                 sides[1][static_cast<std::size_t>(y1 * M + y3)] *
                 sides[2][static_cast<std::size_t>(y1 * M + y2)];
      }
    }
    brute /= static_cast<double>(M * M);
    CHECK(fast.at(x) == doctest::Approx(brute).epsilon(1e-13));
  }
}

TEST_CASE("products of convolutions stay in the class (pointwise identity)") {
  // (1_A * 1_B)(x) (1_C * 1_D)(x) = E_z[(1_{A cap (C+z)} * 1_{B cap (D-z)})(x)].
  const std::int64_t N = 5;
  std::mt19937_64 rng(5555);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<std::uint8_t> A(5), B(5), C(5), D(5);
    for (auto* s : {&A, &B, &C, &D}) {
      for (auto& bit : *s) bit = static_cast<std::uint8_t>(rng() & 1u);
    }
    auto indicator = [&](const std::vector<std::uint8_t>& s) {
      CyclicFunction f;
      f.modulus = N;
      f.values.assign(5, 0.0);
      for (std::int64_t i = 0; i < N; ++i) f.values[static_cast<std::size_t>(i)] = s[static_cast<std::size_t>(i)];
      return f;
    };
    const CyclicFunction ab = convolve(indicator(A), indicator(B));
    const CyclicFunction cd = convolve(indicator(C), indicator(D));

    for (std::int64_t x = 0; x < N; ++x) {
      double averaged = 0.0;
      for (std::int64_t z = 0; z < N; ++z) {
        std::vector<std::uint8_t> AC(5), BD(5);
        for (std::int64_t i = 0; i < N; ++i) {
          AC[static_cast<std::size_t>(i)] =
              A[static_cast<std::size_t>(i)] &
              C[static_cast<std::size_t>(mod_reduce(i - z, N))];
          BD[static_cast<std::size_t>(i)] =
              B[static_cast<std::size_t>(i)] &
              D[static_cast<std::size_t>(mod_reduce(i + z, N))];
        }
        averaged += convolve(indicator(AC), indicator(BD)).at(x);
      }
      averaged /= static_cast<double>(N);
      CHECK(std::abs(ab.at(x) * cd.at(x) - averaged) < 1e-12);
    }
  }
}

TEST_CASE("strong linear-forms contraction: trivial cases") {
  CyclicFunction one;
  one.modulus = 9;
  one.values.assign(9, 1.0);
  std::mt19937_64 rng(1717);
  const CyclicFunction g = random_cyclic(9, rng, 0.0, 2.0);
  const CyclicFunction gt = random_cyclic(9, rng, 0.0, 1.0);

  const StrongLFReport trivial = strong_lf_check(one, g, gt);
  for (double v : trivial.values) CHECK(v == 0.0);

  CyclicFunction nu = random_cyclic(9, rng, 0.0, 2.0);
  const StrongLFReport collapsed = strong_lf_check(nu, one, one);
  for (double v : collapsed.values) {
    CHECK(v == doctest::Approx(nu.mean() - 1.0).epsilon(1e-12));
  }
}

TEST_CASE("strong linear-forms contraction matches the quadruple-loop oracle") {
  const std::int64_t N = 7;
  std::mt19937_64 rng(2222);
  const CyclicFunction nu = random_cyclic(N, rng, 0.0, 2.0);
  const CyclicFunction g = random_cyclic(N, rng, 0.0, 2.0);
  const CyclicFunction gt = random_cyclic(N, rng, 0.0, 1.0);
  const StrongLFReport rep = strong_lf_check(nu, g, gt);

  for (unsigned mask = 0; mask < 16; ++mask) {
    auto pick = [&](unsigned bit) -> const CyclicFunction& {
      return ((mask >> bit) & 1u) ? gt : g;
    };
    long double acc = 0.0L;
    for (std::int64_t x = 0; x < N; ++x) {
      for (std::int64_t y = 0; y < N; ++y) {
        const double w = nu.at(2 * x + y) - 1.0;
        for (std::int64_t z = 0; z < N; ++z) {
          for (std::int64_t zp = 0; zp < N; ++zp) {
            acc += static_cast<long double>(w) * pick(0).at(x - z) * pick(1).at(x - zp) *
                   pick(2).at(-y - 2 * z) * pick(3).at(-y - 2 * zp);
          }
        }
      }
    }
    const double oracle = static_cast<double>(acc / (static_cast<long double>(N) * N * N * N));
    CHECK(std::abs(rep.values[mask] - oracle) < 1e-12);
  }
}

TEST_CASE("strong linear-forms report is thread independent and serializes") {
  std::mt19937_64 rng(3333);
  const CyclicFunction nu = random_cyclic(31, rng, 0.0, 2.0);
  const CyclicFunction g = random_cyclic(31, rng, 0.0, 2.0);
  const CyclicFunction gt = random_cyclic(31, rng, 0.0, 1.0);
  const StrongLFReport a = strong_lf_check(nu, g, gt, 1);
  const StrongLFReport b = strong_lf_check(nu, g, gt, 4);
  for (unsigned mask = 0; mask < 16; ++mask) CHECK(a.values[mask] == b.values[mask]);

  CHECK(StrongLFReport::pattern_label(0) == "gggg");
  CHECK(StrongLFReport::pattern_label(5) == "tgtg");
  const std::string js = a.to_json_string();
  CHECK(js.find("\"gggg\"") != std::string::npos);
  CHECK(js.find("\"max_abs\"") != std::string::npos);
}
