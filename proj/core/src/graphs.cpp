#include "aplab/graphs.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "aplab/norms.hpp"
#include "aplab/util.hpp"

namespace aplab {

namespace {

void require_shapes(const WeightedTripartiteGraph& g, const char* who) {
  if (g.nX == 0 || g.nY == 0 || g.nZ == 0 || !g.shapes_ok()) {
    throw std::invalid_argument(std::string(who) + ": malformed tripartite graph");
  }
}

std::int64_t require_modulus(const CyclicFunction& f, const char* who) {
  if (f.modulus < 1 || f.values.size() != static_cast<std::size_t>(f.modulus)) {
    throw std::invalid_argument(std::string(who) + ": malformed cyclic function");
  }
  return f.modulus;
}

}  // namespace

WeightedTripartiteGraph graph_from_set(const std::vector<std::int64_t>& A, std::int64_t N) {
  if (N < 1) throw std::invalid_argument("graph_from_set: N must be >= 1");
  CyclicFunction ind(N, 0.0);
  for (std::int64_t a : A) ind.values[static_cast<std::size_t>(mod_reduce(a, N))] = 1.0;
  return graph_from_measure(ind);
}

WeightedTripartiteGraph graph_from_measure(const CyclicFunction& f) {
  const std::int64_t N = require_modulus(f, "graph_from_measure");
  const std::size_t n = static_cast<std::size_t>(N);
  WeightedTripartiteGraph g;
  g.nX = g.nY = g.nZ = n;
  g.wXY = Matrix(n, n);
  g.wXZ = Matrix(n, n);
  g.wYZ = Matrix(n, n);
  for (std::int64_t i = 0; i < N; ++i) {
    const std::size_t r = static_cast<std::size_t>(i);
    for (std::int64_t j = 0; j < N; ++j) {
      const std::size_t c = static_cast<std::size_t>(j);
      g.wXY.at(r, c) = f.at(2 * i + j);
      g.wXZ.at(r, c) = f.at(i - j);
      g.wYZ.at(r, c) = f.at(-i - 2 * j);
    }
  }
  return g;
}

WeightedHypergraph hypergraph_from_function(const CyclicFunction& h, int k,
                                            std::uint64_t entry_budget) {
  const std::int64_t N = require_modulus(h, "hypergraph_from_function");
  if (k < 2) throw std::invalid_argument("hypergraph_from_function: k must be >= 2");

  const std::uint64_t nN = static_cast<std::uint64_t>(N);
  std::uint64_t per_side = 1;
  for (int i = 0; i + 1 < k; ++i) {
    if (per_side > entry_budget / nN) {
      throw std::length_error("hypergraph_from_function: side arrays exceed the entry budget");
    }
    per_side *= nN;
  }
  if (per_side > entry_budget / static_cast<std::uint64_t>(k)) {
    throw std::length_error("hypergraph_from_function: side arrays exceed the entry budget");
  }

  WeightedHypergraph hg;
  hg.k = k;
  hg.n = N;
  hg.weights.assign(static_cast<std::size_t>(k), {});
  for (int j = 1; j <= k; ++j) {
    std::vector<double>& side = hg.weights[static_cast<std::size_t>(j - 1)];
    side.assign(per_side, 0.0);
    // Coefficients of psi_j over the k-1 retained coordinates, in
    // increasing-i order (the flattening order).
    std::vector<std::int64_t> coeffs;
    coeffs.reserve(static_cast<std::size_t>(k - 1));
    for (int i = 1; i <= k; ++i) {
      if (i != j) coeffs.push_back(mod_reduce(j - i, N));
    }
    // Odometer over Z_N^(k-1), first coordinate slowest, with the form
    // value maintained incrementally.
    std::vector<std::int64_t> digits(coeffs.size(), 0);
    std::int64_t val = 0;
    for (std::uint64_t flat = 0;; ++flat) {
      side[flat] = h.values[static_cast<std::size_t>(val)];
      if (flat + 1 == per_side) break;
      // Increment the last coordinate fastest; a wrap subtracts
      // coeff * (N-1) which is +coeff mod N, so every digit change adds
      // its coefficient once.
      std::size_t v = coeffs.size();
      while (v-- > 0) {
        val += coeffs[v];
        if (val >= N) val -= N;
        if (++digits[v] < N) break;
        digits[v] = 0;
      }
    }
  }
  return hg;
}

double triangle_density(const WeightedTripartiteGraph& g, unsigned threads) {
  require_shapes(g, "triangle_density");
  const Matrix yzT = transposed(g.wYZ);  // yzT(z, y) = wYZ(y, z)

  std::vector<long double> part(g.nX, 0.0L);
  parallel_chunks(g.nX, threads, 64, [&](std::uint64_t, std::uint64_t lo, std::uint64_t hi) {
    for (std::uint64_t x = lo; x < hi; ++x) {
      const double* xy = g.wXY.row(x);
      const double* xz = g.wXZ.row(x);
      long double acc = 0.0L;
      for (std::size_t z = 0; z < g.nZ; ++z) {
        const double* zy = yzT.row(z);
        double dot = 0.0;
        for (std::size_t y = 0; y < g.nY; ++y) dot += xy[y] * zy[y];
        acc += static_cast<long double>(xz[z]) * dot;
      }
      part[x] = acc;
    }
  });

  long double total = 0.0L;
  for (long double p : part) total += p;
  const long double denom = static_cast<long double>(g.nX) * g.nY * g.nZ;
  return static_cast<double>(total / denom);
}

double simplex_density(const WeightedHypergraph& hg, unsigned threads) {
  const int k = hg.k;
  if (k < 2 || hg.n < 1 || hg.weights.size() != static_cast<std::size_t>(k)) {
    throw std::invalid_argument("simplex_density: malformed hypergraph");
  }
  const std::int64_t N = hg.n;
  std::uint64_t per_side = 1;
  for (int i = 0; i + 1 < k; ++i) per_side *= static_cast<std::uint64_t>(N);
  for (const auto& side : hg.weights) {
    if (side.size() != per_side) throw std::invalid_argument("simplex_density: side size mismatch");
  }

  if (k == 3) {
    // Reuse the cache-friendly triangle contraction: side j layouts for
    // k = 3 are exactly the three matrices of the tripartite encoding.
    const std::size_t n = static_cast<std::size_t>(N);
    WeightedTripartiteGraph g;
    g.nX = g.nY = g.nZ = n;
    g.wXY = Matrix(n, n);
    g.wXY.data = hg.weights[2];  // side 3 over (x1, x2)
    g.wXZ = Matrix(n, n);
    g.wXZ.data = hg.weights[1];  // side 2 over (x1, x3)
    g.wYZ = Matrix(n, n);
    g.wYZ.data = hg.weights[0];  // side 1 over (x2, x3)
    return triangle_density(g, threads);
  }

  // Generic odometer over x in Z_N^k, first coordinate slowest.  The
  // flat index into side j drops coordinate j-1; strides are powers of
  // N in the retained order.  Work splits over the slowest coordinate.
  std::vector<std::vector<std::uint64_t>> stride(static_cast<std::size_t>(k));
  for (int j = 1; j <= k; ++j) {
    auto& s = stride[static_cast<std::size_t>(j - 1)];
    s.assign(static_cast<std::size_t>(k), 0);
    std::uint64_t cur = 1;
    std::vector<int> kept;
    for (int i = 1; i <= k; ++i) {
      if (i != j) kept.push_back(i);
    }
    for (int t = k - 2; t >= 0; --t) {
      s[static_cast<std::size_t>(kept[static_cast<std::size_t>(t)] - 1)] = cur;
      cur *= static_cast<std::uint64_t>(N);
    }
  }

  std::vector<long double> part(static_cast<std::size_t>(N), 0.0L);
  parallel_chunks(static_cast<std::uint64_t>(N), threads, 32,
                  [&](std::uint64_t, std::uint64_t lo, std::uint64_t hi) {
                    std::vector<std::int64_t> x(static_cast<std::size_t>(k), 0);
                    std::vector<std::uint64_t> flat(static_cast<std::size_t>(k), 0);
                    for (std::uint64_t x1 = lo; x1 < hi; ++x1) {
                      x.assign(static_cast<std::size_t>(k), 0);
                      x[0] = static_cast<std::int64_t>(x1);
                      for (int j = 0; j < k; ++j) {
                        flat[static_cast<std::size_t>(j)] =
                            x1 * stride[static_cast<std::size_t>(j)][0];
                      }
                      long double acc = 0.0L;
                      for (;;) {
                        double prod = 1.0;
                        for (int j = 0; j < k; ++j) {
                          prod *= hg.weights[static_cast<std::size_t>(j)]
                                            [flat[static_cast<std::size_t>(j)]];
                          if (prod == 0.0) break;
                        }
                        acc += prod;
                        // Advance coordinates 2..k (coordinate 1 is the
                        // chunk variable); last fastest.
                        std::size_t v = static_cast<std::size_t>(k);
                        bool done = false;
                        while (v-- > 1) {
                          for (int j = 0; j < k; ++j) {
                            const std::uint64_t s = stride[static_cast<std::size_t>(j)][v];
                            flat[static_cast<std::size_t>(j)] += s;
                          }
                          if (++x[v] < N) break;
                          for (int j = 0; j < k; ++j) {
                            const std::uint64_t s = stride[static_cast<std::size_t>(j)][v];
                            flat[static_cast<std::size_t>(j)] -= s * static_cast<std::uint64_t>(N);
                          }
                          x[v] = 0;
                          if (v == 1) done = true;
                        }
                        if (done) break;
                      }
                      part[x1] = acc;
                    }
                  });

  long double total = 0.0L;
  for (long double p : part) total += p;
  long double denom = 1.0L;
  for (int i = 0; i < k; ++i) denom *= static_cast<long double>(N);
  return static_cast<double>(total / denom);
}

double kap_density(const CyclicFunction& f, int k, unsigned threads) {
  const std::int64_t N = require_modulus(f, "kap_density");
  if (k < 1) throw std::invalid_argument("kap_density: k must be >= 1");

  std::vector<long double> part(static_cast<std::size_t>(N), 0.0L);
  parallel_chunks(static_cast<std::uint64_t>(N), threads, 64,
                  [&](std::uint64_t, std::uint64_t lo, std::uint64_t hi) {
                    for (std::uint64_t xu = lo; xu < hi; ++xu) {
                      const std::int64_t x = static_cast<std::int64_t>(xu);
                      long double acc = 0.0L;
                      for (std::int64_t d = 0; d < N; ++d) {
                        double prod = f.values[static_cast<std::size_t>(x)];
                        std::int64_t idx = x;
                        for (int j = 1; j < k && prod != 0.0; ++j) {
                          idx += d;
                          if (idx >= N) idx -= N;
                          prod *= f.values[static_cast<std::size_t>(idx)];
                        }
                        acc += prod;
                      }
                      part[xu] = acc;
                    }
                  });

  long double total = 0.0L;
  for (long double p : part) total += p;
  const long double denom = static_cast<long double>(N) * static_cast<long double>(N);
  return static_cast<double>(total / denom);
}

double k222_density(const WeightedTripartiteGraph& g, unsigned threads) {
  require_shapes(g, "k222_density");
  const std::size_t nx = g.nX, ny = g.nY, nz = g.nZ;
  const Matrix yzT = transposed(g.wYZ);  // yzT(z, y) = wYZ(y, z)

  // sum over x, x', z, z' of
  //   wXZ(x,z) wXZ(x,z') wXZ(x',z) wXZ(x',z')
  //   * ( sum_y wXY(x,y) wXY(x',y) wYZ(y,z) wYZ(y,z') )^2
  // The squared factor is the y / y' pair of the doubled triangle.
  std::vector<long double> part(nx, 0.0L);
  parallel_chunks(nx, threads, 64, [&](std::uint64_t, std::uint64_t lo, std::uint64_t hi) {
    std::vector<double> xy_pair(ny);
    for (std::uint64_t x = lo; x < hi; ++x) {
      const double* xy_x = g.wXY.row(x);
      const double* xz_x = g.wXZ.row(x);
      long double acc_x = 0.0L;
      for (std::size_t xp = 0; xp < nx; ++xp) {
        const double* xy_xp = g.wXY.row(xp);
        const double* xz_xp = g.wXZ.row(xp);
        for (std::size_t y = 0; y < ny; ++y) xy_pair[y] = xy_x[y] * xy_xp[y];
        for (std::size_t z = 0; z < nz; ++z) {
          const double* zy = yzT.row(z);
          const double wz = xz_x[z] * xz_xp[z];
          if (wz == 0.0) continue;
          for (std::size_t zp = 0; zp < nz; ++zp) {
            const double wzz = wz * xz_x[zp] * xz_xp[zp];
            if (wzz == 0.0) continue;
            const double* zpy = yzT.row(zp);
            double inner = 0.0;
            for (std::size_t y = 0; y < ny; ++y) inner += xy_pair[y] * zy[y] * zpy[y];
            acc_x += static_cast<long double>(wzz) * inner * inner;
          }
        }
      }
      part[x] = acc_x;
    }
  });

  long double total = 0.0L;
  for (long double p : part) total += p;
  long double denom = static_cast<long double>(nx) * nx;
  denom *= static_cast<long double>(ny) * ny;
  denom *= static_cast<long double>(nz) * nz;
  return static_cast<double>(total / denom);
}

Matrix densify(const WeightedTripartiteGraph& g, GraphSide side, unsigned threads) {
  require_shapes(g, "densify");
  Matrix prod;
  double denom = 0.0;
  switch (side) {
    case GraphSide::XY:  // E_z wXZ(x,z) wYZ(y,z)
      prod = multiply_transposed(g.wXZ, g.wYZ, threads);
      denom = static_cast<double>(g.nZ);
      break;
    case GraphSide::XZ:  // E_y wXY(x,y) wYZ(y,z)
      prod = multiply_transposed(g.wXY, transposed(g.wYZ), threads);
      denom = static_cast<double>(g.nY);
      break;
    case GraphSide::YZ:  // E_x wXY(x,y) wXZ(x,z)
      prod = multiply_transposed(transposed(g.wXY), transposed(g.wXZ), threads);
      denom = static_cast<double>(g.nX);
      break;
  }
  for (double& v : prod.data) v /= denom;
  return prod;
}

Matrix cap_at_one(Matrix m) {
  for (double& v : m.data) v = std::min(v, 1.0);
  return m;
}

TriangleStructureReport triangle_structure(const WeightedTripartiteGraph& g) {
  require_shapes(g, "triangle_structure");
  auto check01 = [](const Matrix& m) {
    for (double v : m.data) {
      if (v != 0.0 && v != 1.0) {
        throw std::invalid_argument("triangle_structure: weights must be exactly 0 or 1");
      }
    }
  };
  check01(g.wXY);
  check01(g.wXZ);
  check01(g.wYZ);

  TriangleStructureReport rep;
  for (const Matrix* m : {&g.wXY, &g.wXZ, &g.wYZ}) {
    for (double v : m->data) rep.edge_count += (v == 1.0);
  }

  // Triangles through each edge; tallied per side so that min/max run
  // over every present edge of every side.
  Matrix tri_xy(g.nX, g.nY), tri_xz(g.nX, g.nZ), tri_yz(g.nY, g.nZ);
  for (std::size_t x = 0; x < g.nX; ++x) {
    const double* xy = g.wXY.row(x);
    const double* xz = g.wXZ.row(x);
    for (std::size_t y = 0; y < g.nY; ++y) {
      if (xy[y] == 0.0) continue;
      const double* yz = g.wYZ.row(y);
      for (std::size_t z = 0; z < g.nZ; ++z) {
        if (xz[z] == 0.0 || yz[z] == 0.0) continue;
        ++rep.triangle_count;
        tri_xy.at(x, y) += 1.0;
        tri_xz.at(x, z) += 1.0;
        tri_yz.at(y, z) += 1.0;
      }
    }
  }

  bool any_edge = false;
  std::uint64_t mn = 0, mx = 0;
  auto scan = [&](const Matrix& w, const Matrix& tri) {
    for (std::size_t i = 0; i < w.data.size(); ++i) {
      if (w.data[i] != 1.0) continue;
      const std::uint64_t t = static_cast<std::uint64_t>(tri.data[i]);
      if (!any_edge) {
        mn = mx = t;
        any_edge = true;
      } else {
        mn = std::min(mn, t);
        mx = std::max(mx, t);
      }
    }
  };
  scan(g.wXY, tri_xy);
  scan(g.wXZ, tri_xz);
  scan(g.wYZ, tri_yz);
  rep.min_edge_multiplicity = any_edge ? mn : 0;
  rep.max_edge_multiplicity = any_edge ? mx : 0;
  rep.every_edge_in_exactly_one = any_edge && mn == 1 && mx == 1;
  return rep;
}

std::vector<std::int64_t> greedy_ap_free_set(std::int64_t N, std::uint64_t seed) {
  if (N < 1) throw std::invalid_argument("greedy_ap_free_set: N must be >= 1");
  std::vector<std::int64_t> order(static_cast<std::size_t>(N));
  std::iota(order.begin(), order.end(), 0);
  auto rng = make_stream_rng(seed, 0);
  for (std::size_t i = order.size(); i > 1; --i) {
    const std::uint64_t j = uniform_below(rng, i);
    std::swap(order[i - 1], order[static_cast<std::size_t>(j)]);
  }

  std::vector<std::int64_t> set;
  for (std::int64_t c : order) {
    bool ok = true;
    // c as an endpoint repeated: (c, a, c) is the progression
    // c, a, 2a - c; nontrivial whenever 2a = 2c with a != c (even N).
    for (std::int64_t a : set) {
      if (mod_reduce(2 * a - 2 * c, N) == 0) {
        ok = false;
        break;
      }
    }
    // c in each of the three positions against pairs from the set.
    if (ok) {
      for (std::size_t ia = 0; ia < set.size() && ok; ++ia) {
        for (std::size_t ib = 0; ib < set.size(); ++ib) {
          const std::int64_t a = set[ia], b = set[ib];
          if (mod_reduce(a + b - 2 * c, N) == 0 ||  // (a, c, b)
              mod_reduce(c + b - 2 * a, N) == 0) {  // (c, a, b); (a, b, c) by symmetry
            ok = false;
            break;
          }
        }
      }
    }
    if (ok) set.push_back(c);
  }
  std::sort(set.begin(), set.end());
  return set;
}

CountingDiscrepancyReport counting_discrepancy_experiment(const WeightedTripartiteGraph& nu,
                                                          const WeightedTripartiteGraph& g,
                                                          const WeightedTripartiteGraph& gtilde,
                                                          const CountingDiscrepancyOptions& opts) {
  require_shapes(nu, "counting_discrepancy_experiment");
  require_shapes(g, "counting_discrepancy_experiment");
  require_shapes(gtilde, "counting_discrepancy_experiment");
  if (nu.nX != g.nX || nu.nY != g.nY || nu.nZ != g.nZ || g.nX != gtilde.nX ||
      g.nY != gtilde.nY || g.nZ != gtilde.nZ) {
    throw std::invalid_argument("counting_discrepancy_experiment: part sizes differ");
  }

  CountingDiscrepancyReport rep;

  // Preconditions 0 <= g <= nu and 0 <= gtilde <= 1, reported entrywise.
  std::uint64_t bad_g = 0, bad_gt = 0;
  const char* sides[3] = {"XY", "XZ", "YZ"};
  const Matrix* gm[3] = {&g.wXY, &g.wXZ, &g.wYZ};
  const Matrix* num[3] = {&nu.wXY, &nu.wXZ, &nu.wYZ};
  const Matrix* gtm[3] = {&gtilde.wXY, &gtilde.wXZ, &gtilde.wYZ};
  std::string first_bad;
  for (int s = 0; s < 3; ++s) {
    for (std::size_t i = 0; i < gm[s]->data.size(); ++i) {
      const double gv = gm[s]->data[i];
      if (gv < 0.0 || gv > num[s]->data[i]) {
        if (bad_g + bad_gt == 0) {
          first_bad = std::string("g outside [0, nu] on side ") + sides[s] + " at flat index " +
                      std::to_string(i);
        }
        ++bad_g;
      }
      const double tv = gtm[s]->data[i];
      if (tv < 0.0 || tv > 1.0) {
        if (bad_g + bad_gt == 0) {
          first_bad = std::string("gtilde outside [0, 1] on side ") + sides[s] +
                      " at flat index " + std::to_string(i);
        }
        ++bad_gt;
      }
    }
  }
  rep.preconditions_ok = (bad_g == 0 && bad_gt == 0);
  if (!rep.preconditions_ok) {
    rep.precondition_message = std::to_string(bad_g) + " entries of g outside [0, nu], " +
                               std::to_string(bad_gt) + " entries of gtilde outside [0, 1]; first: " +
                               first_bad;
  }

  // Per-side cut norms of the difference.
  bool all_exact = true;
  double norms3[3] = {0.0, 0.0, 0.0};
  for (int s = 0; s < 3; ++s) {
    Matrix diff = *gm[s];
    for (std::size_t i = 0; i < diff.data.size(); ++i) diff.data[i] -= gtm[s]->data[i];
    const bool small = std::min(diff.rows, diff.cols) <= opts.exact_limit;
    CutNormResult r = small ? cutnorm_bipartite_exact(diff, opts.threads)
                            : cutnorm_bipartite_heuristic(diff, opts.restarts,
                                                          opts.seed + static_cast<std::uint64_t>(s),
                                                          opts.threads);
    norms3[s] = r.value;
    all_exact = all_exact && r.exact;
  }
  rep.cut_xy = norms3[0];
  rep.cut_xz = norms3[1];
  rep.cut_yz = norms3[2];
  rep.eps = std::max({norms3[0], norms3[1], norms3[2]});
  rep.exact_norms = all_exact;

  rep.density_g = triangle_density(g, opts.threads);
  rep.density_gtilde = triangle_density(gtilde, opts.threads);
  rep.gap = std::fabs(rep.density_g - rep.density_gtilde);

  auto in_unit = [](const WeightedTripartiteGraph& w) {
    for (const Matrix* m : {&w.wXY, &w.wXZ, &w.wYZ}) {
      for (double v : m->data) {
        if (v < 0.0 || v > 1.0) return false;
      }
    }
    return true;
  };
  rep.dense_case = in_unit(g) && in_unit(gtilde);
  if (rep.dense_case) {
    rep.dense_bound = 3.0 * rep.eps + opts.tolerance;
    rep.dense_bound_ok = rep.gap <= rep.dense_bound;
  }
  return rep;
}

std::string CountingDiscrepancyReport::to_json_string(int indent) const {
  nlohmann::json j;
  j["cut_xy"] = cut_xy;
  j["cut_xz"] = cut_xz;
  j["cut_yz"] = cut_yz;
  j["eps"] = eps;
  j["exact_norms"] = exact_norms;
  j["density_g"] = density_g;
  j["density_gtilde"] = density_gtilde;
  j["gap"] = gap;
  j["dense_case"] = dense_case;
  j["dense_bound"] = dense_bound;
  j["dense_bound_ok"] = dense_bound_ok;
  j["preconditions_ok"] = preconditions_ok;
  j["precondition_message"] = precondition_message;
  return j.dump(indent);
}

void save_graph_binary(const WeightedTripartiteGraph& g, const std::string& path) {
  require_shapes(g, "save_graph_binary");
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw std::runtime_error("save_graph_binary: cannot open " + path);
  const char magic[8] = {'A', 'P', 'G', 'R', 'A', 'P', 'H', '1'};
  const std::uint64_t dims[3] = {g.nX, g.nY, g.nZ};
  bool ok = std::fwrite(magic, 1, 8, f) == 8 && std::fwrite(dims, 8, 3, f) == 3;
  for (const Matrix* m : {&g.wXY, &g.wXZ, &g.wYZ}) {
    ok = ok && std::fwrite(m->data.data(), 8, m->data.size(), f) == m->data.size();
  }
  std::fclose(f);
  if (!ok) throw std::runtime_error("save_graph_binary: short write to " + path);
}

WeightedTripartiteGraph load_graph_binary(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) throw std::runtime_error("load_graph_binary: cannot open " + path);
  char magic[8];
  std::uint64_t dims[3];
  if (std::fread(magic, 1, 8, f) != 8 || std::memcmp(magic, "APGRAPH1", 8) != 0 ||
      std::fread(dims, 8, 3, f) != 3) {
    std::fclose(f);
    throw std::runtime_error("load_graph_binary: bad header in " + path);
  }
  WeightedTripartiteGraph g;
  g.nX = static_cast<std::size_t>(dims[0]);
  g.nY = static_cast<std::size_t>(dims[1]);
  g.nZ = static_cast<std::size_t>(dims[2]);
  g.wXY = Matrix(g.nX, g.nY);
  g.wXZ = Matrix(g.nX, g.nZ);
  g.wYZ = Matrix(g.nY, g.nZ);
  for (Matrix* m : {&g.wXY, &g.wXZ, &g.wYZ}) {
    if (std::fread(m->data.data(), 8, m->data.size(), f) != m->data.size()) {
      std::fclose(f);
      throw std::runtime_error("load_graph_binary: truncated payload in " + path);
    }
  }
  std::fclose(f);
  return g;
}

void save_edge_list_csv(const Matrix& w, const std::string& row_label,
                        const std::string& col_label, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw std::runtime_error("save_edge_list_csv: cannot open " + path);
  bool ok = std::fprintf(f, "%s,%s,weight\r\n", row_label.c_str(), col_label.c_str()) > 0;
  for (std::size_t r = 0; r < w.rows && ok; ++r) {
    for (std::size_t c = 0; c < w.cols; ++c) {
      const double v = w.at(r, c);
      if (v == 0.0) continue;
      if (std::fprintf(f, "%zu,%zu,%.17g\r\n", r, c, v) <= 0) {
        ok = false;
        break;
      }
    }
  }
  std::fclose(f);
  if (!ok) throw std::runtime_error("save_edge_list_csv: short write to " + path);
}

}  // namespace aplab
