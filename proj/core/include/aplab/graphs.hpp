#pragma once

// Weighted tripartite graphs and k-partite hypergraphs built from
// functions on Z_N, the pattern densities counted on them (triangles,
// simplices, K_{2,2,2}), the codegree ("densification") operator, and
// the triangle-counting discrepancy experiment that compares a sparse
// weighted graph against its dense model side by side.
//
// Conventions, shared with the linear-forms and norms modules:
//   - A function f on Z_N induces the tripartite graph with parts
//     X = Y = Z = Z_N and side weights
//         wXY(x, y) = f(2x + y),
//         wXZ(x, z) = f(x - z),
//         wYZ(y, z) = f(-y - 2z).
//     A triangle (x, y, z) carries the 3-term progression
//         a1 = -y - 2z,   a2 = x - z,   a3 = 2x + y
//     (a1 + a3 = 2*a2 identically), and for each ordered progression
//     there are exactly N triangles, one per value of z.
//   - Hypergraph side j (1-based, j = 1..k) stores h(psi_j(x_{-j})) on
//     tuples x_{-j} in Z_N^{k-1}, where psi_j(x) = sum_{i != j} (j-i) x_i.
//     Coordinates i != j are laid out in increasing order with the first
//     coordinate slowest (row-major), matching the witness layout used
//     by the cyclic cut norms.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "aplab/cyclic.hpp"
#include "aplab/matrix.hpp"

namespace aplab {

struct WeightedTripartiteGraph {
  std::size_t nX = 0, nY = 0, nZ = 0;
  Matrix wXY;  // nX x nY
  Matrix wXZ;  // nX x nZ
  Matrix wYZ;  // nY x nZ

  bool shapes_ok() const {
    return wXY.rows == nX && wXY.cols == nY && wXZ.rows == nX && wXZ.cols == nZ &&
           wYZ.rows == nY && wYZ.cols == nZ && wXY.data.size() == nX * nY &&
           wXZ.data.size() == nX * nZ && wYZ.data.size() == nY * nZ;
  }
};

struct WeightedHypergraph {
  int k = 0;           // number of parts
  std::int64_t n = 0;  // common part size N
  // weights[j-1] is side j: a flattened (k-1)-dimensional array over
  // x_{-j} in Z_N^{k-1} with the layout documented above.
  std::vector<std::vector<double>> weights;
};

// 0/1 graph of a subset A of Z_N (elements are reduced mod N;
// duplicates are harmless).  Requires N >= 1.
WeightedTripartiteGraph graph_from_set(const std::vector<std::int64_t>& A, std::int64_t N);

// Weighted graph of an arbitrary function on Z_N.
WeightedTripartiteGraph graph_from_measure(const CyclicFunction& f);

// k-partite hypergraph with side weights h(psi_j).  The k arrays hold
// k * N^(k-1) doubles in total; throws std::length_error when that
// exceeds entry_budget.
WeightedHypergraph hypergraph_from_function(const CyclicFunction& h, int k,
                                            std::uint64_t entry_budget = 200'000'000);

// E_{x,y,z}[ wXY(x,y) wXZ(x,z) wYZ(y,z) ] over independent uniform
// vertices; O(nX * nY * nZ) with contiguous inner dots.
double triangle_density(const WeightedTripartiteGraph& g, unsigned threads = 1);

// E_{x_1..x_k}[ prod_j weights_j(x_{-j}) ]; k = 3 delegates to the
// triangle contraction, larger k walks an odometer over Z_N^k.
double simplex_density(const WeightedHypergraph& hg, unsigned threads = 1);

// E_{x,d}[ f(x) f(x+d) ... f(x+(k-1)d) ]; exact O(k N^2) double loop
// including the d = 0 diagonal.
double kap_density(const CyclicFunction& f, int k, unsigned threads = 1);

// Homomorphism density of the doubled triangle K_{2,2,2} (two vertices
// per part, all 12 cross-part edges).  Evaluated by the O(N^5)
// contraction sum_{x,x',z,z'} [XZ factors] * (E_y ...)^2 instead of N^6
// enumeration.  Equals the exact linear-forms expectation of the
// all-ones exponent pattern when the graph comes from a measure.
double k222_density(const WeightedTripartiteGraph& g, unsigned threads = 1);

enum class GraphSide { XY, XZ, YZ };

// Codegree matrix through the opposite part: for side XY this is
// g'(x,y) = E_z[ wXZ(x,z) wYZ(y,z) ], and cyclically for the others.
Matrix densify(const WeightedTripartiteGraph& g, GraphSide side, unsigned threads = 1);

// Entrywise min(value, 1): the capped weights used after densification.
Matrix cap_at_one(Matrix m);

// Structure report for 0/1 graphs: how many triangles there are and how
// evenly they cover the edges.  Throws unless every weight is exactly
// 0 or 1.
struct TriangleStructureReport {
  std::uint64_t triangle_count = 0;      // triples (x,y,z) with all three edges
  std::uint64_t edge_count = 0;          // 1-entries across the three sides
  std::uint64_t min_edge_multiplicity = 0;  // triangles through the least-covered edge
  std::uint64_t max_edge_multiplicity = 0;  // ... and the most-covered edge
  bool every_edge_in_exactly_one = false;   // min == max == 1 over all present edges
};
TriangleStructureReport triangle_structure(const WeightedTripartiteGraph& g);

// Randomized greedy subset of Z_N containing no nontrivial 3-term
// progression (a1 + a3 = 2*a2 with not all terms equal, wraparound
// included).  Deterministic for a fixed seed; returned sorted.
std::vector<std::int64_t> greedy_ap_free_set(std::int64_t N, std::uint64_t seed);

struct CountingDiscrepancyOptions {
  int restarts = 32;             // heuristic cut-norm restarts (large sides)
  std::uint64_t seed = 0;        // seed for the heuristic restarts
  unsigned threads = 1;
  std::size_t exact_limit = 25;  // sides this small get the exact cut norm
  double tolerance = 1e-9;       // additive slack in the dense-case bound
};

struct CountingDiscrepancyReport {
  // Cut norms of the per-side differences g - gtilde, and their max.
  double cut_xy = 0.0, cut_xz = 0.0, cut_yz = 0.0;
  double eps = 0.0;
  bool exact_norms = false;  // all three sides within the exact enumerator

  double density_g = 0.0;       // triangle density of g
  double density_gtilde = 0.0;  // triangle density of gtilde
  double gap = 0.0;             // |density_g - density_gtilde|

  // When both graphs have all weights in [0,1] the triangle counting
  // bound gap <= 3*eps applies; dense_bound_ok records it (with the
  // configured tolerance).  Outside the dense case the bound is not
  // asserted and dense_bound_ok stays true.
  bool dense_case = false;
  double dense_bound = 0.0;
  bool dense_bound_ok = true;

  // Entrywise preconditions 0 <= g <= nu and 0 <= gtilde <= 1 are
  // checked and reported, never clamped or thrown.
  bool preconditions_ok = true;
  std::string precondition_message;

  std::string to_json_string(int indent = 2) const;
};

// Compares the weighted graph g against its model gtilde under the
// majorant graph nu: per-side cut norms of the difference, both
// triangle densities, and the dense-case counting bound.
CountingDiscrepancyReport counting_discrepancy_experiment(const WeightedTripartiteGraph& nu,
                                                          const WeightedTripartiteGraph& g,
                                                          const WeightedTripartiteGraph& gtilde,
                                                          const CountingDiscrepancyOptions& opts = {});

// Binary tensor format: magic "APGRAPH1", then nX, nY, nZ as u64
// little-endian, then the three weight matrices row-major as f64
// little-endian in the order wXY, wXZ, wYZ.
void save_graph_binary(const WeightedTripartiteGraph& g, const std::string& path);
WeightedTripartiteGraph load_graph_binary(const std::string& path);

// CSV edge list of one side: header "<row_label>,<col_label>,weight",
// CRLF line endings, one row per nonzero entry in row-major order,
// weights printed with %.17g.
void save_edge_list_csv(const Matrix& w, const std::string& row_label,
                        const std::string& col_label, const std::string& path);

}  // namespace aplab
