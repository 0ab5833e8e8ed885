#pragma once

// Dense row-major real matrices, sized for desk-scale experiments
// (N up to a few thousand).  Kept deliberately small: storage, element
// access, and the one contraction everything downstream leans on,
// A * B^T with row dots (both operands walk contiguous memory).

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "aplab/util.hpp"

namespace aplab {

struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;  // row-major

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  const double* row(std::size_t r) const { return data.data() + r * cols; }
  double* row(std::size_t r) { return data.data() + r * cols; }

  bool same_shape(const Matrix& o) const { return rows == o.rows && cols == o.cols; }
};

// C = A * B^T, so C(i, j) = sum_k A(i, k) B(j, k); requires matching
// inner dimension.  Row-by-row dot products keep both factors
// contiguous, which is what lets the O(N^3) contractions downstream
// (codegree matrices, Gowers fourth moments) run at vector speed.
inline Matrix multiply_transposed(const Matrix& a, const Matrix& b) {
  if (a.cols != b.cols) throw std::invalid_argument("multiply_transposed: inner dim mismatch");
  Matrix c(a.rows, b.rows);
  for (std::size_t i = 0; i < a.rows; ++i) {
    const double* ai = a.row(i);
    double* ci = c.row(i);
    for (std::size_t j = 0; j < b.rows; ++j) {
      const double* bj = b.row(j);
      double acc = 0.0;
      for (std::size_t k = 0; k < a.cols; ++k) acc += ai[k] * bj[k];
      ci[j] = acc;
    }
  }
  return c;
}

// Threaded variant.  Each output row is written by exactly one worker,
// and within a row the k-loop order is fixed, so the result is
// bit-identical for every thread count.
inline Matrix multiply_transposed(const Matrix& a, const Matrix& b, unsigned threads) {
  if (a.cols != b.cols) throw std::invalid_argument("multiply_transposed: inner dim mismatch");
  Matrix c(a.rows, b.rows);
  parallel_chunks(a.rows, threads, 64,
                  [&](std::uint64_t, std::uint64_t lo, std::uint64_t hi) {
                    for (std::uint64_t i = lo; i < hi; ++i) {
                      const double* ai = a.row(i);
                      double* ci = c.row(i);
                      for (std::size_t j = 0; j < b.rows; ++j) {
                        const double* bj = b.row(j);
                        double acc = 0.0;
                        for (std::size_t k = 0; k < a.cols; ++k) acc += ai[k] * bj[k];
                        ci[j] = acc;
                      }
                    }
                  });
  return c;
}

inline Matrix transposed(const Matrix& m) {
  Matrix t(m.cols, m.rows);
  for (std::size_t r = 0; r < m.rows; ++r)
    for (std::size_t c = 0; c < m.cols; ++c) t.at(c, r) = m.at(r, c);
  return t;
}

}  // namespace aplab
