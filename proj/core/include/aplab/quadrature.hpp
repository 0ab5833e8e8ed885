#pragma once

// Adaptive Simpson quadrature with interval bisection.  Recursion depth is
// bounded; running past the bound throws, since a non-converging integrand
// here always means a bug in the caller (our integrands are piecewise
// smooth on compact intervals).

#include <cmath>
#include <complex>
#include <stdexcept>

namespace aplab {

namespace detail {

template <typename F>
double simpson_rec(const F& f, double a, double b, double fa, double fm, double fb,
                   double whole, double tol, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  if (depth <= 0) throw std::runtime_error("adaptive_simpson: bisection depth exhausted");
  return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Absolute-tolerance adaptive Simpson on [a, b].
template <typename F>
double adaptive_simpson(const F& f, double a, double b, double tol, int max_depth = 60) {
  if (!(a <= b)) throw std::invalid_argument("adaptive_simpson: bad interval");
  if (a == b) return 0.0;
  double m = 0.5 * (a + b);
  double fa = f(a), fm = f(m), fb = f(b);
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

// Complex-valued integrand: integrate real and imaginary parts separately.
template <typename F>
std::complex<double> adaptive_simpson_complex(const F& f, double a, double b, double tol,
                                              int max_depth = 60) {
  double re = adaptive_simpson([&](double x) { return f(x).real(); }, a, b, tol, max_depth);
  double im = adaptive_simpson([&](double x) { return f(x).imag(); }, a, b, tol, max_depth);
  return {re, im};
}

}  // namespace aplab
