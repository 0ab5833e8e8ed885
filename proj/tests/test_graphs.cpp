#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "aplab/cyclic.hpp"
#include "aplab/forms.hpp"
#include "aplab/graphs.hpp"
#include "aplab/matrix.hpp"
#include "aplab/util.hpp"

using namespace aplab;

namespace {

CyclicFunction random_cyclic(std::int64_t N, std::mt19937_64& rng, double lo, double hi) {
  CyclicFunction f;
  f.modulus = N;
  f.values.resize(static_cast<std::size_t>(N));
  std::uniform_real_distribution<double> dist(lo, hi);
  for (double& v : f.values) v = dist(rng);
  return f;
}

CyclicFunction indicator(const std::vector<std::int64_t>& A, std::int64_t N) {
  CyclicFunction f(N, 0.0);
  for (std::int64_t a : A) f.values[static_cast<std::size_t>(mod_reduce(a, N))] = 1.0;
  return f;
}

std::vector<std::int64_t> random_subset(std::int64_t N, std::mt19937_64& rng, double p) {
  std::vector<std::int64_t> A;
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  for (std::int64_t i = 0; i < N; ++i) {
    if (dist(rng) < p) A.push_back(i);
  }
  return A;
}

// Ordered (a1, a2, a3) in A^3 with a1 + a3 = 2 a2 mod N -- includes the
// |A| all-equal triples.
std::uint64_t ordered_ap_triples(const std::vector<std::int64_t>& A, std::int64_t N) {
  std::uint64_t count = 0;
  for (std::int64_t a1 : A) {
    for (std::int64_t a2 : A) {
      for (std::int64_t a3 : A) {
        if (mod_reduce(a1 + a3 - 2 * a2, N) == 0) ++count;
      }
    }
  }
  return count;
}

std::uint64_t brute_triangle_count(const WeightedTripartiteGraph& g) {
  std::uint64_t count = 0;
  for (std::size_t x = 0; x < g.nX; ++x) {
    for (std::size_t y = 0; y < g.nY; ++y) {
      for (std::size_t z = 0; z < g.nZ; ++z) {
        if (g.wXY.at(x, y) == 1.0 && g.wXZ.at(x, z) == 1.0 && g.wYZ.at(y, z) == 1.0) ++count;
      }
    }
  }
  return count;
}

double brute_triangle_density(const WeightedTripartiteGraph& g) {
  long double acc = 0.0L;
  for (std::size_t x = 0; x < g.nX; ++x) {
    for (std::size_t y = 0; y < g.nY; ++y) {
      for (std::size_t z = 0; z < g.nZ; ++z) {
        acc += static_cast<long double>(g.wXY.at(x, y)) * g.wXZ.at(x, z) * g.wYZ.at(y, z);
      }
    }
  }
  return static_cast<double>(acc / (static_cast<long double>(g.nX) * g.nY * g.nZ));
}

double brute_k222_density(const WeightedTripartiteGraph& g) {
  long double acc = 0.0L;
  for (std::size_t x = 0; x < g.nX; ++x)
    for (std::size_t xp = 0; xp < g.nX; ++xp)
      for (std::size_t y = 0; y < g.nY; ++y)
        for (std::size_t yp = 0; yp < g.nY; ++yp)
          for (std::size_t z = 0; z < g.nZ; ++z)
            for (std::size_t zp = 0; zp < g.nZ; ++zp) {
              const long double xy = static_cast<long double>(g.wXY.at(x, y)) *
                                     g.wXY.at(x, yp) * g.wXY.at(xp, y) * g.wXY.at(xp, yp);
              const long double xz = static_cast<long double>(g.wXZ.at(x, z)) *
                                     g.wXZ.at(x, zp) * g.wXZ.at(xp, z) * g.wXZ.at(xp, zp);
              const long double yz = static_cast<long double>(g.wYZ.at(y, z)) *
                                     g.wYZ.at(y, zp) * g.wYZ.at(yp, z) * g.wYZ.at(yp, zp);
              acc += xy * xz * yz;
            }
  long double denom = static_cast<long double>(g.nX) * g.nX;
  denom *= static_cast<long double>(g.nY) * g.nY;
  denom *= static_cast<long double>(g.nZ) * g.nZ;
  return static_cast<double>(acc / denom);
}

WeightedTripartiteGraph random_graph(std::size_t n, std::mt19937_64& rng, double lo, double hi) {
  WeightedTripartiteGraph g;
  g.nX = g.nY = g.nZ = n;
  std::uniform_real_distribution<double> dist(lo, hi);
  auto fill = [&](Matrix& m) {
    m = Matrix(n, n);
    for (double& v : m.data) v = dist(rng);
  };
  fill(g.wXY);
  fill(g.wXZ);
  fill(g.wYZ);
  return g;
}

}  // namespace

TEST_CASE("graph_from_set: full set and empty set") {
  std::vector<std::int64_t> all(5);
  for (std::int64_t i = 0; i < 5; ++i) all[static_cast<std::size_t>(i)] = i;
  const WeightedTripartiteGraph g = graph_from_set(all, 5);
  REQUIRE(g.shapes_ok());
  for (const Matrix* m : {&g.wXY, &g.wXZ, &g.wYZ}) {
    for (double v : m->data) CHECK(v == 1.0);
  }

  const WeightedTripartiteGraph e = graph_from_set({}, 4);
  for (const Matrix* m : {&e.wXY, &e.wXZ, &e.wYZ}) {
    for (double v : m->data) CHECK(v == 0.0);
  }

  CHECK_THROWS_AS(graph_from_set({0}, 0), std::invalid_argument);
}

TEST_CASE("graph_from_measure matches the three side definitions") {
  std::mt19937_64 rng(101);
  const std::int64_t N = 7;
  const CyclicFunction f = random_cyclic(N, rng, -1.0, 2.0);
  const WeightedTripartiteGraph g = graph_from_measure(f);
  for (std::int64_t x = 0; x < N; ++x) {
    for (std::int64_t y = 0; y < N; ++y) {
      CHECK(g.wXY.at(static_cast<std::size_t>(x), static_cast<std::size_t>(y)) ==
            f.at(2 * x + y));
      CHECK(g.wXZ.at(static_cast<std::size_t>(x), static_cast<std::size_t>(y)) == f.at(x - y));
      CHECK(g.wYZ.at(static_cast<std::size_t>(x), static_cast<std::size_t>(y)) ==
            f.at(-x - 2 * y));
    }
  }
}

TEST_CASE("triangles correspond to 3-term progressions: count = N * ordered triples") {
  std::mt19937_64 rng(202);
  for (std::int64_t N : {7, 13, 25}) {
    for (int rep = 0; rep < 5; ++rep) {
      const std::vector<std::int64_t> A = random_subset(N, rng, 0.4);
      const WeightedTripartiteGraph g = graph_from_set(A, N);
      const std::uint64_t tri = brute_triangle_count(g);
      CHECK(tri == static_cast<std::uint64_t>(N) * ordered_ap_triples(A, N));
      // Contraction agrees with the brute count.
      CHECK(triangle_density(g) ==
            doctest::Approx(static_cast<double>(tri) /
                            (static_cast<double>(N) * N * N))
                .epsilon(1e-14));
    }
  }
}

TEST_CASE("triangle density of a measure graph equals the weighted 3-AP density") {
  std::mt19937_64 rng(303);
  for (std::int64_t N : {9, 11, 16}) {
    const CyclicFunction f = random_cyclic(N, rng, 0.0, 2.0);
    const WeightedTripartiteGraph g = graph_from_measure(f);
    CHECK(triangle_density(g) == doctest::Approx(kap_density(f, 3)).epsilon(1e-13));
  }
}

TEST_CASE("triangle_density oracle and bilinearity") {
  const WeightedTripartiteGraph g0 = graph_from_set({0}, 3);
  CHECK(triangle_density(g0) == doctest::Approx(brute_triangle_density(g0)).epsilon(1e-15));
  CHECK(triangle_density(g0) == doctest::Approx(3.0 / 27.0).epsilon(1e-15));

  std::mt19937_64 rng(404);
  WeightedTripartiteGraph g = random_graph(6, rng, -1.0, 1.0);
  const double base = triangle_density(g);
  CHECK(base == doctest::Approx(brute_triangle_density(g)).epsilon(1e-13));
  for (double& v : g.wXY.data) v *= 2.5;
  CHECK(triangle_density(g) == doctest::Approx(2.5 * base).epsilon(1e-13));
}

TEST_CASE("triangle_density: threads and relabeling do not change the value") {
  std::mt19937_64 rng(505);
  const WeightedTripartiteGraph g = random_graph(17, rng, 0.0, 1.5);
  const double serial = triangle_density(g, 1);
  CHECK(triangle_density(g, 4) == serial);  // ordered merge: bit-identical

  // Permute the X part (rows of wXY and wXZ together).
  std::vector<std::size_t> perm(g.nX);
  for (std::size_t i = 0; i < g.nX; ++i) perm[i] = (i * 5 + 3) % g.nX;
  WeightedTripartiteGraph h = g;
  for (std::size_t i = 0; i < g.nX; ++i) {
    for (std::size_t j = 0; j < g.nY; ++j) h.wXY.at(perm[i], j) = g.wXY.at(i, j);
    for (std::size_t j = 0; j < g.nZ; ++j) h.wXZ.at(perm[i], j) = g.wXZ.at(i, j);
  }
  CHECK(triangle_density(h) == doctest::Approx(serial).epsilon(1e-13));
}

TEST_CASE("greedy progression-free sets: structure of the triangle cover") {
  std::mt19937_64 seeds(606);
  int checked = 0;
  for (std::int64_t N = 9; N <= 25; ++N) {
    for (int s = 0; s < 3; ++s) {
      const std::uint64_t seed = seeds();
      const std::vector<std::int64_t> A = greedy_ap_free_set(N, seed);
      REQUIRE(!A.empty());
      // Oracle: the only ordered progressions are the all-equal ones.
      REQUIRE(ordered_ap_triples(A, N) == A.size());

      const WeightedTripartiteGraph g = graph_from_set(A, N);
      const TriangleStructureReport rep = triangle_structure(g);
      CHECK(rep.triangle_count == static_cast<std::uint64_t>(N) * A.size());
      CHECK(rep.edge_count == 3 * static_cast<std::uint64_t>(N) * A.size());
      CHECK(rep.min_edge_multiplicity == 1);
      CHECK(rep.max_edge_multiplicity == 1);
      CHECK(rep.every_edge_in_exactly_one);
      ++checked;

      // Determinism for a fixed seed.
      CHECK(greedy_ap_free_set(N, seed) == A);
    }
  }
  CHECK(checked == 3 * 17);
}

TEST_CASE("triangle_structure rejects non-indicator weights") {
  std::mt19937_64 rng(707);
  const WeightedTripartiteGraph g = random_graph(4, rng, 0.0, 1.0);
  CHECK_THROWS_AS(triangle_structure(g), std::invalid_argument);
}

TEST_CASE("hypergraph_from_function: all-ones, k=3 equivalence, budget") {
  CyclicFunction one(6, 1.0);
  const WeightedHypergraph h1 = hypergraph_from_function(one, 4);
  REQUIRE(h1.weights.size() == 4);
  for (const auto& side : h1.weights) {
    REQUIRE(side.size() == 216);
    for (double v : side) CHECK(v == 1.0);
  }

  std::mt19937_64 rng(808);
  const CyclicFunction f = random_cyclic(11, rng, -0.5, 1.5);
  const WeightedHypergraph hg = hypergraph_from_function(f, 3);
  const WeightedTripartiteGraph g = graph_from_measure(f);
  // Side 3 ranges over (x1, x2) = (x, y), side 2 over (x1, x3) = (x, z),
  // side 1 over (x2, x3) = (y, z).
  CHECK(hg.weights[2] == g.wXY.data);
  CHECK(hg.weights[1] == g.wXZ.data);
  CHECK(hg.weights[0] == g.wYZ.data);

  CHECK_THROWS_AS(hypergraph_from_function(f, 3, 100), std::length_error);
  CHECK_THROWS_AS(hypergraph_from_function(f, 1), std::invalid_argument);
}

TEST_CASE("simplex_density: k=3 matches triangle contraction, k=4 matches oracle") {
  std::mt19937_64 rng(909);
  const CyclicFunction f = random_cyclic(13, rng, 0.0, 1.7);
  const WeightedHypergraph hg = hypergraph_from_function(f, 3);
  const WeightedTripartiteGraph g = graph_from_measure(f);
  CHECK(simplex_density(hg) == doctest::Approx(triangle_density(g)).epsilon(1e-14));

  // Generic-k path against a nested-loop oracle on random side arrays.
  WeightedHypergraph h4;
  h4.k = 4;
  h4.n = 5;
  h4.weights.assign(4, std::vector<double>(125));
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (auto& side : h4.weights) {
    for (double& v : side) v = dist(rng);
  }
  long double acc = 0.0L;
  for (std::int64_t x1 = 0; x1 < 5; ++x1)
    for (std::int64_t x2 = 0; x2 < 5; ++x2)
      for (std::int64_t x3 = 0; x3 < 5; ++x3)
        for (std::int64_t x4 = 0; x4 < 5; ++x4) {
          const double s1 = h4.weights[0][static_cast<std::size_t>(x2 * 25 + x3 * 5 + x4)];
          const double s2 = h4.weights[1][static_cast<std::size_t>(x1 * 25 + x3 * 5 + x4)];
          const double s3 = h4.weights[2][static_cast<std::size_t>(x1 * 25 + x2 * 5 + x4)];
          const double s4 = h4.weights[3][static_cast<std::size_t>(x1 * 25 + x2 * 5 + x3)];
          acc += static_cast<long double>(s1) * s2 * s3 * s4;
        }
  const double oracle = static_cast<double>(acc / 625.0L);
  CHECK(simplex_density(h4) == doctest::Approx(oracle).epsilon(1e-13));
  CHECK(simplex_density(h4, 4) == simplex_density(h4, 1));
}

TEST_CASE("simplex density equals the weighted k-AP density") {
  std::mt19937_64 rng(1010);
  for (int k : {3, 4}) {
    const std::int64_t N = (k == 3) ? 13 : 9;
    const CyclicFunction f = random_cyclic(N, rng, 0.0, 2.0);
    const WeightedHypergraph hg = hypergraph_from_function(f, k);
    CHECK(simplex_density(hg) == doctest::Approx(kap_density(f, k)).epsilon(1e-12));
  }
}

TEST_CASE("kap_density basics and oracles") {
  CyclicFunction one(8, 1.0);
  CHECK(kap_density(one, 3) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(kap_density(one, 5) == doctest::Approx(1.0).epsilon(1e-15));

  // A = {0,1,2} in Z_5, k = 3: count ordered pairs (x, d) with all of
  // x, x+d, x+2d in A, wraparound and d = 0 included.
  const CyclicFunction f = indicator({0, 1, 2}, 5);
  std::uint64_t count = 0;
  for (std::int64_t x = 0; x < 5; ++x) {
    for (std::int64_t d = 0; d < 5; ++d) {
      if (f.at(x) == 1.0 && f.at(x + d) == 1.0 && f.at(x + 2 * d) == 1.0) ++count;
    }
  }
  CHECK(kap_density(f, 3) == doctest::Approx(static_cast<double>(count) / 25.0).epsilon(1e-15));

  std::mt19937_64 rng(1111);
  const CyclicFunction h = random_cyclic(7, rng, -1.0, 1.0);
  long double acc = 0.0L;
  for (std::int64_t x = 0; x < 7; ++x) {
    for (std::int64_t d = 0; d < 7; ++d) {
      acc += static_cast<long double>(h.at(x)) * h.at(x + d) * h.at(x + 2 * d) * h.at(x + 3 * d);
    }
  }
  CHECK(kap_density(h, 4) == doctest::Approx(static_cast<double>(acc / 49.0L)).epsilon(1e-13));
  CHECK(kap_density(h, 1) == doctest::Approx(h.mean()).epsilon(1e-15));
  CHECK(kap_density(h, 4, 4) == kap_density(h, 4, 1));
}

TEST_CASE("densify: all-ones, half-graph codegrees, capping") {
  std::mt19937_64 rng(1212);
  WeightedTripartiteGraph ones = random_graph(4, rng, 0.0, 0.0);
  for (Matrix* m : {&ones.wXY, &ones.wXZ, &ones.wYZ}) {
    for (double& v : m->data) v = 1.0;
  }
  for (GraphSide s : {GraphSide::XY, GraphSide::XZ, GraphSide::YZ}) {
    const Matrix d = densify(ones, s);
    for (double v : d.data) CHECK(v == doctest::Approx(1.0).epsilon(1e-15));
  }

  // Half-graph on both Z-sides: w(x, z) = 1 iff x < z, N = 4, so the
  // XY codegree is #{z > max(x, y)} / 4 = (3 - max(x, y)) / 4.
  WeightedTripartiteGraph half = ones;
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      half.wXZ.at(i, j) = (i < j) ? 1.0 : 0.0;
      half.wYZ.at(i, j) = (i < j) ? 1.0 : 0.0;
    }
  }
  const Matrix cod = densify(half, GraphSide::XY);
  for (std::size_t x = 0; x < 4; ++x) {
    for (std::size_t y = 0; y < 4; ++y) {
      CHECK(cod.at(x, y) == doctest::Approx((3.0 - static_cast<double>(std::max(x, y))) / 4.0)
                                .epsilon(1e-15));
    }
  }

  Matrix m(1, 4);
  m.data = {-0.5, 0.3, 1.0, 2.5};
  const Matrix capped = cap_at_one(m);
  CHECK(capped.data == std::vector<double>{-0.5, 0.3, 1.0, 1.0});
}

TEST_CASE("densify: definitions, symmetry, monotonicity, mean identity") {
  std::mt19937_64 rng(1313);
  const WeightedTripartiteGraph g = random_graph(9, rng, 0.0, 1.4);

  // Direct definitions on all three sides.
  const Matrix dxy = densify(g, GraphSide::XY);
  const Matrix dxz = densify(g, GraphSide::XZ);
  const Matrix dyz = densify(g, GraphSide::YZ);
  for (std::size_t a = 0; a < 9; ++a) {
    for (std::size_t b = 0; b < 9; ++b) {
      double exy = 0.0, exz = 0.0, eyz = 0.0;
      for (std::size_t t = 0; t < 9; ++t) {
        exy += g.wXZ.at(a, t) * g.wYZ.at(b, t);
        exz += g.wXY.at(a, t) * g.wYZ.at(t, b);
        eyz += g.wXY.at(t, a) * g.wXZ.at(t, b);
      }
      CHECK(dxy.at(a, b) == doctest::Approx(exy / 9.0).epsilon(1e-14));
      CHECK(dxz.at(a, b) == doctest::Approx(exz / 9.0).epsilon(1e-14));
      CHECK(dyz.at(a, b) == doctest::Approx(eyz / 9.0).epsilon(1e-14));
    }
  }

  // Symmetric when the two Z-side kernels coincide.
  WeightedTripartiteGraph sym = g;
  sym.wYZ = sym.wXZ;
  const Matrix ds = densify(sym, GraphSide::XY);
  for (std::size_t a = 0; a < 9; ++a) {
    for (std::size_t b = 0; b < 9; ++b) CHECK(ds.at(a, b) == ds.at(b, a));
  }

  // 0 <= g <= nu entrywise implies densify(g) <= densify(nu).
  WeightedTripartiteGraph nu = g;
  std::uniform_real_distribution<double> bump(0.0, 0.6);
  for (Matrix* m : {&nu.wXY, &nu.wXZ, &nu.wYZ}) {
    for (double& v : m->data) v += bump(rng);
  }
  const Matrix dg = densify(g, GraphSide::XY);
  const Matrix dn = densify(nu, GraphSide::XY);
  for (std::size_t i = 0; i < dg.data.size(); ++i) CHECK(dg.data[i] <= dn.data[i] + 1e-12);

  // Mean of the codegree matrix equals the triangle density with the
  // XY side replaced by all-ones.
  WeightedTripartiteGraph flat = g;
  for (double& v : flat.wXY.data) v = 1.0;
  double mean = 0.0;
  for (double v : dxy.data) mean += v;
  mean /= static_cast<double>(dxy.data.size());
  CHECK(mean == doctest::Approx(triangle_density(flat)).epsilon(1e-13));

  CHECK(densify(g, GraphSide::XY, 4).data == densify(g, GraphSide::XY, 1).data);
}

TEST_CASE("k222_density: all-ones, brute oracle, doubled linear-forms identity") {
  std::mt19937_64 rng(1414);
  WeightedTripartiteGraph ones = random_graph(3, rng, 0.0, 0.0);
  for (Matrix* m : {&ones.wXY, &ones.wXZ, &ones.wYZ}) {
    for (double& v : m->data) v = 1.0;
  }
  CHECK(k222_density(ones) == doctest::Approx(1.0).epsilon(1e-15));

  const WeightedTripartiteGraph g = random_graph(5, rng, -0.8, 1.2);
  CHECK(k222_density(g) == doctest::Approx(brute_k222_density(g)).epsilon(1e-12));
  CHECK(k222_density(g, 4) == k222_density(g, 1));

  // For a measure graph the K_{2,2,2} density is the doubled-variable
  // linear-forms expectation with every slot active.
  const CyclicFunction nu = random_cyclic(13, rng, 0.0, 2.0);
  const WeightedTripartiteGraph gnu = graph_from_measure(nu);
  const double lf = lf_expectation_exact(nu, ExponentPattern::all_ones(3));
  CHECK(k222_density(gnu) == doctest::Approx(lf).epsilon(1e-10));
}

TEST_CASE("counting_discrepancy_experiment: identical graphs give zero gap") {
  std::mt19937_64 rng(1515);
  WeightedTripartiteGraph nu = random_graph(8, rng, 0.0, 0.0);
  for (Matrix* m : {&nu.wXY, &nu.wXZ, &nu.wYZ}) {
    for (double& v : m->data) v = 1.0;
  }
  const WeightedTripartiteGraph g = random_graph(8, rng, 0.0, 1.0);
  const CountingDiscrepancyReport rep = counting_discrepancy_experiment(nu, g, g);
  CHECK(rep.preconditions_ok);
  CHECK(rep.eps == 0.0);
  CHECK(rep.gap == 0.0);
  CHECK(rep.exact_norms);
  CHECK(rep.dense_case);
  CHECK(rep.dense_bound_ok);
  const std::string js = rep.to_json_string();
  CHECK(js.find("\"eps\"") != std::string::npos);
  CHECK(js.find("\"dense_bound_ok\"") != std::string::npos);
}

TEST_CASE("counting_discrepancy_experiment: dense counting bound holds") {
  std::mt19937_64 rng(1616);
  std::uniform_int_distribution<int> size(5, 12);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t n = static_cast<std::size_t>(size(rng));
    WeightedTripartiteGraph nu = random_graph(n, rng, 0.0, 0.0);
    for (Matrix* m : {&nu.wXY, &nu.wXZ, &nu.wYZ}) {
      for (double& v : m->data) v = 1.0;
    }
    const WeightedTripartiteGraph g = random_graph(n, rng, 0.0, 1.0);
    const WeightedTripartiteGraph gt = random_graph(n, rng, 0.0, 1.0);
    const CountingDiscrepancyReport r = counting_discrepancy_experiment(nu, g, gt);
    REQUIRE(r.preconditions_ok);
    REQUIRE(r.exact_norms);
    REQUIRE(r.dense_case);
    CHECK(r.gap <= 3.0 * r.eps + 1e-9);
    CHECK(r.dense_bound_ok);
  }
}

TEST_CASE("counting_discrepancy_experiment reports precondition violations") {
  std::mt19937_64 rng(1717);
  WeightedTripartiteGraph nu = random_graph(5, rng, 0.0, 0.0);
  for (Matrix* m : {&nu.wXY, &nu.wXZ, &nu.wYZ}) {
    for (double& v : m->data) v = 1.0;
  }
  WeightedTripartiteGraph g = random_graph(5, rng, 0.0, 1.0);
  WeightedTripartiteGraph gt = random_graph(5, rng, 0.0, 1.0);
  g.wXZ.at(2, 3) = 1.5;    // above nu
  gt.wYZ.at(1, 1) = -0.2;  // below zero
  const CountingDiscrepancyReport r = counting_discrepancy_experiment(nu, g, gt);
  CHECK(!r.preconditions_ok);
  CHECK(r.precondition_message.find("g outside [0, nu]") != std::string::npos);
  CHECK(r.precondition_message.find("1 entries of g outside") != std::string::npos);
  CHECK(r.precondition_message.find("1 entries of gtilde outside") != std::string::npos);
  // The measurements still run.
  CHECK(r.eps > 0.0);

  WeightedTripartiteGraph small = random_graph(4, rng, 0.0, 1.0);
  CHECK_THROWS_AS(counting_discrepancy_experiment(nu, small, small), std::invalid_argument);
}

TEST_CASE("graph binary serialization round-trips exactly") {
  std::mt19937_64 rng(1818);
  const WeightedTripartiteGraph g = random_graph(6, rng, -2.0, 2.0);
  const std::string path = "test_graph_roundtrip.bin";
  save_graph_binary(g, path);
  const WeightedTripartiteGraph h = load_graph_binary(path);
  CHECK(h.nX == g.nX);
  CHECK(h.nY == g.nY);
  CHECK(h.nZ == g.nZ);
  CHECK(h.wXY.data == g.wXY.data);
  CHECK(h.wXZ.data == g.wXZ.data);
  CHECK(h.wYZ.data == g.wYZ.data);
  std::remove(path.c_str());

  CHECK_THROWS_AS(load_graph_binary("does_not_exist.bin"), std::runtime_error);
}

TEST_CASE("edge list CSV: header, CRLF, nonzero entries only") {
  Matrix w(2, 3);
  w.at(0, 1) = 0.5;
  w.at(1, 2) = -1.0;
  const std::string path = "test_graph_edges.csv";
  save_edge_list_csv(w, "x", "y", path);
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == "x,y,weight\r\n0,1,0.5\r\n1,2,-1\r\n");
  std::remove(path.c_str());
}
