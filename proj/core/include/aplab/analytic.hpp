#pragma once

// Fourier-side verification of the analytic estimates behind the
// truncated divisor sums:
//
//   * the profile phi with  e^x chi(x) = \int_R phi(xi) e^{-i x xi} dxi,
//     i.e. phi(xi) = (1/2pi) \int e^x chi(x) e^{i x xi} dx  (the 1/2pi
//     sits on the forward transform; the inversion carries none);
//   * the reconstruction -chi'(x) = \int phi(xi)(1+i xi)e^{-(1+i xi)x} dxi;
//   * the second route to c_chi via the double integral
//     \int\int (1+i xi)(1+i xi')/(2+i(xi+xi')) phi(xi) phi(xi') dxi dxi';
//   * zeta(s) near its pole through the integral-comparison series
//     zeta(s) = 1/(s-1) + sum_n \int_n^{n+1} (n^{-s} - x^{-s}) dx;
//   * exact local Euler factors E_p of the shifted linear-forms system
//     against their zeta-shaped approximation E'_p.

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "aplab/cutoff.hpp"
#include "aplab/forms.hpp"
#include "aplab/sieve.hpp"

namespace aplab {

struct FourierProfile {
  CutoffFunction chi;
  double xi_max = 0.0;                    // grid half-width
  std::vector<double> grid;               // uniform on [-xi_max, xi_max], odd size
  std::vector<std::complex<double>> phi;  // phi(grid[i])
  bool slow_decay_warning = false;        // set for non-smooth chi (tent):
                                          // phi only decays like xi^-2

  // max over the grid of |phi(-xi) - conj(phi(xi))| (should be ~0 since
  // e^x chi(x) is real).
  double conjugate_symmetry_defect() const;

  // CSV "xi,re_phi,im_phi", CRLF, %.17g.
  void save_csv(const std::string& path) const;
};

// Samples phi on n_grid uniform points (n_grid odd and >= 3, so the
// grid carries composite-Simpson weights downstream), each value by
// adaptive quadrature over the support of chi.
FourierProfile fourier_profile(const CutoffFunction& chi, double xi_max, std::size_t n_grid,
                               double quad_tol = 1e-10);

// Grid-Simpson evaluation of \int phi(xi) e^{-(1+i xi) x} dxi (which is
// chi(x) up to truncation error) and of
// \int phi(xi) (1+i xi) e^{-(1+i xi) x} dxi (which is -chi'(x)).
std::complex<double> profile_inverse(const FourierProfile& p, double x);
std::complex<double> profile_derivative(const FourierProfile& p, double x);

// The double integral above on the sampled grid; its real part is the
// second route to c_chi, its imaginary part a symmetry check.
std::complex<double> c_chi_double_integral(const FourierProfile& p);

// Least-squares slope of log|phi| vs log xi over grid points with
// xi >= xi_lo and |phi| > floor; more negative = faster decay.
double fitted_decay_exponent(const FourierProfile& p, double xi_lo = 4.0, double floor = 1e-13);

struct ZetaPoint {
  double s = 0.0;
  double zeta = 0.0;        // series value
  double pole_diff = 0.0;   // zeta - 1/(s-1)
  double product = 0.0;     // zeta * (s-1)
  std::uint64_t terms = 0;  // series terms summed
  double tail_bound = 0.0;  // proven remainder bound M^{-s}/2
};

// Sums the integral-comparison series until the proven tail bound
// M^{-s}/2 drops below tol.  Requires s > 1 (std::domain_error) and a
// reachable tolerance (std::runtime_error past 2^31 terms).
double zeta_by_series(double s, double tol = 1e-9, std::uint64_t* terms_used = nullptr,
                      double* tail_bound = nullptr);

std::vector<ZetaPoint> zeta_pole_check(const std::vector<double>& s_values, double tol = 1e-9);

struct EulerFactorResult {
  std::complex<double> ep;        // exact local factor from divisibility counts
  std::complex<double> ep_prime;  // zeta-shaped product E'_p
  std::complex<double> ratio;     // ep / ep_prime
  double scaled_gap = 0.0;        // |ratio - 1| * p^2
};

// Local factor of the W-shifted system {W psi_j + 1} at the prime p:
//
//   E_p = sum over subsets S of forms of
//         Pr_{x in Z_p^t}[ p | W psi_j(x)+1 for all j in S ]
//         * prod_{j in S} -(p^{-z_j} + p^{-z'_j} - p^{-z_j - z'_j}),
//
// with z_j = (1+i xi_{2j})/log R, z'_j = (1+i xi_{2j+1})/log R, the
// probabilities exact (forms module).  xi holds 2m reals for the m =
// system.forms.size() forms; R > 1; p must be prime.
EulerFactorResult euler_factor_compare(const LinearFormsSystem& system, const WTrick& wt,
                                       std::uint64_t p, const std::vector<double>& xi, double R);

struct EulerWComparison {
  double prod_ep_prime = 0.0;    // prod_{p <= w} E'_p(0)
  double phi_ratio_power = 0.0;  // (phi(W)/W)^m
  double rel_gap = 0.0;          // |prod/power - 1|
};

// prod_{p <= w} E'_p(0) for m forms against (phi(W)/W)^m; the gap
// shrinks as log R grows with w fixed.
EulerWComparison euler_w_product_compare(const WTrick& wt, int m, double R);

}  // namespace aplab
