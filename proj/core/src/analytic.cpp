#include "aplab/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "aplab/quadrature.hpp"

namespace aplab {

namespace {

// Composite-Simpson weights for a uniform odd-size grid.
std::vector<double> simpson_weights(std::size_t n, double h) {
  std::vector<double> w(n, 0.0);
  w[0] = w[n - 1] = h / 3.0;
  for (std::size_t i = 1; i + 1 < n; ++i) w[i] = (i % 2 == 1) ? 4.0 * h / 3.0 : 2.0 * h / 3.0;
  return w;
}

void require_profile(const FourierProfile& p, const char* who) {
  if (p.grid.size() < 3 || p.grid.size() % 2 == 0 || p.phi.size() != p.grid.size()) {
    throw std::invalid_argument(std::string(who) + ": malformed profile");
  }
}

constexpr double kPi = 3.14159265358979323846;

}  // namespace

FourierProfile fourier_profile(const CutoffFunction& chi, double xi_max, std::size_t n_grid,
                               double quad_tol) {
  if (!(xi_max > 0.0)) throw std::invalid_argument("fourier_profile: xi_max must be > 0");
  if (n_grid < 3 || n_grid % 2 == 0) {
    throw std::invalid_argument("fourier_profile: n_grid must be odd and >= 3");
  }
  if (!(quad_tol > 0.0)) throw std::invalid_argument("fourier_profile: quad_tol must be > 0");

  FourierProfile p;
  p.chi = chi;
  p.xi_max = xi_max;
  p.slow_decay_warning = !chi.smooth;
  p.grid.resize(n_grid);
  p.phi.resize(n_grid);
  const double h = 2.0 * xi_max / static_cast<double>(n_grid - 1);
  const double r = chi.support_radius;
  for (std::size_t i = 0; i < n_grid; ++i) {
    const double xi = -xi_max + h * static_cast<double>(i);
    p.grid[i] = xi;
    p.phi[i] = adaptive_simpson_complex(
                   [&](double x) {
                     const double g = std::exp(x) * chi.eval(x);
                     return std::complex<double>(g * std::cos(x * xi), g * std::sin(x * xi));
                   },
                   -r, r, quad_tol) /
               (2.0 * kPi);
  }
  return p;
}

double FourierProfile::conjugate_symmetry_defect() const {
  require_profile(*this, "conjugate_symmetry_defect");
  const std::size_t n = grid.size();
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::complex<double> d = phi[n - 1 - i] - std::conj(phi[i]);
    worst = std::max(worst, std::abs(d));
  }
  return worst;
}

void FourierProfile::save_csv(const std::string& path) const {
  require_profile(*this, "FourierProfile::save_csv");
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw std::runtime_error("FourierProfile::save_csv: cannot open " + path);
  bool ok = std::fputs("xi,re_phi,im_phi\r\n", f) >= 0;
  for (std::size_t i = 0; i < grid.size() && ok; ++i) {
    ok = std::fprintf(f, "%.17g,%.17g,%.17g\r\n", grid[i], phi[i].real(), phi[i].imag()) > 0;
  }
  std::fclose(f);
  if (!ok) throw std::runtime_error("FourierProfile::save_csv: short write to " + path);
}

std::complex<double> profile_inverse(const FourierProfile& p, double x) {
  require_profile(p, "profile_inverse");
  const std::size_t n = p.grid.size();
  const double h = 2.0 * p.xi_max / static_cast<double>(n - 1);
  const std::vector<double> w = simpson_weights(n, h);
  std::complex<double> acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::complex<double> z(1.0, p.grid[i]);
    acc += w[i] * p.phi[i] * std::exp(-z * x);
  }
  return acc;
}

std::complex<double> profile_derivative(const FourierProfile& p, double x) {
  require_profile(p, "profile_derivative");
  const std::size_t n = p.grid.size();
  const double h = 2.0 * p.xi_max / static_cast<double>(n - 1);
  const std::vector<double> w = simpson_weights(n, h);
  std::complex<double> acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::complex<double> z(1.0, p.grid[i]);
    acc += w[i] * p.phi[i] * z * std::exp(-z * x);
  }
  return acc;
}

std::complex<double> c_chi_double_integral(const FourierProfile& p) {
  require_profile(p, "c_chi_double_integral");
  const std::size_t n = p.grid.size();
  const double h = 2.0 * p.xi_max / static_cast<double>(n - 1);
  const std::vector<double> w = simpson_weights(n, h);
  std::complex<double> acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::complex<double> zi(1.0, p.grid[i]);
    const std::complex<double> fi = w[i] * p.phi[i] * zi;
    std::complex<double> inner = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const std::complex<double> zj(1.0, p.grid[j]);
      inner += w[j] * p.phi[j] * zj / (zi + zj);
    }
    acc += fi * inner;
  }
  return acc;
}

double fitted_decay_exponent(const FourierProfile& p, double xi_lo, double floor) {
  require_profile(p, "fitted_decay_exponent");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < p.grid.size(); ++i) {
    const double xi = p.grid[i];
    const double mag = std::abs(p.phi[i]);
    if (xi < xi_lo || mag <= floor) continue;
    const double lx = std::log(xi), ly = std::log(mag);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++count;
  }
  if (count < 2) throw std::runtime_error("fitted_decay_exponent: too few usable grid points");
  const double denom = static_cast<double>(count) * sxx - sx * sx;
  return (static_cast<double>(count) * sxy - sx * sy) / denom;
}

double zeta_by_series(double s, double tol, std::uint64_t* terms_used, double* tail_bound) {
  if (!(s > 1.0)) throw std::domain_error("zeta_by_series: requires s > 1");
  if (!(tol > 0.0)) throw std::invalid_argument("zeta_by_series: tol must be > 0");

  // zeta(s) = 1/(s-1) + sum_n [ n^{-s} - ((n+1)^{1-s} - n^{1-s})/(1-s) ];
  // the term for n is at most s n^{-s-1}/2, so the tail past M is at
  // most (s/2) * integral_M^inf x^{-s-1} dx = M^{-s}/2.
  // The tail bound after M terms is exactly M^{-s}/2 and decreases in M,
  // so reachability within the term cap is decidable up front.
  constexpr std::uint64_t kMaxTerms = 1ull << 31;
  if (0.5 * std::pow(static_cast<double>(kMaxTerms), -s) > tol) {
    throw std::runtime_error("zeta_by_series: tolerance unreachable within term cap");
  }
  long double sum = 0.0L;
  const long double one_minus_s = 1.0L - static_cast<long double>(s);
  long double pow_n1 = 1.0L;  // n^{1-s} at the current n
  std::uint64_t n = 0;
  double tail = 0.0;
  for (;;) {
    ++n;
    const long double nn = static_cast<long double>(n);
    const long double pow_n2 = std::pow(nn + 1.0L, one_minus_s);  // (n+1)^{1-s}
    const long double term = std::pow(nn, -static_cast<long double>(s)) -
                             (pow_n2 - pow_n1) / one_minus_s;
    sum += term;
    pow_n1 = pow_n2;
    tail = 0.5 * std::pow(static_cast<double>(n), -s);
    if (tail <= tol) break;
  }
  if (terms_used) *terms_used = n;
  if (tail_bound) *tail_bound = tail;
  return static_cast<double>(sum + 1.0L / (static_cast<long double>(s) - 1.0L));
}

std::vector<ZetaPoint> zeta_pole_check(const std::vector<double>& s_values, double tol) {
  std::vector<ZetaPoint> out;
  out.reserve(s_values.size());
  for (double s : s_values) {
    ZetaPoint z;
    z.s = s;
    z.zeta = zeta_by_series(s, tol, &z.terms, &z.tail_bound);
    z.pole_diff = z.zeta - 1.0 / (s - 1.0);
    z.product = z.zeta * (s - 1.0);
    out.push_back(z);
  }
  return out;
}

EulerFactorResult euler_factor_compare(const LinearFormsSystem& system, const WTrick& wt,
                                       std::uint64_t p, const std::vector<double>& xi, double R) {
  const int m = static_cast<int>(system.forms.size());
  if (m < 1 || m > 20) throw std::invalid_argument("euler_factor_compare: bad form count");
  if (xi.size() != static_cast<std::size_t>(2 * m)) {
    throw std::invalid_argument("euler_factor_compare: xi must hold 2m entries");
  }
  if (!(R > 1.0)) throw std::invalid_argument("euler_factor_compare: R must be > 1");
  if (!is_prime_u64(p)) throw std::invalid_argument("euler_factor_compare: p must be prime");

  const double log_R = std::log(R);
  const double log_p = std::log(static_cast<double>(p));
  std::vector<std::complex<double>> z(static_cast<std::size_t>(m)),
      zp(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    z[static_cast<std::size_t>(j)] =
        std::complex<double>(1.0, xi[static_cast<std::size_t>(2 * j)]) / log_R;
    zp[static_cast<std::size_t>(j)] =
        std::complex<double>(1.0, xi[static_cast<std::size_t>(2 * j + 1)]) / log_R;
  }
  auto p_pow = [&](std::complex<double> e) { return std::exp(-e * log_p); };  // p^{-e}

  // Per-form weight of "p divides this factor at least once":
  // -(p^{-z_j} + p^{-z'_j} - p^{-z_j - z'_j}).
  std::vector<std::complex<double>> weight(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    const std::size_t k = static_cast<std::size_t>(j);
    weight[k] = -(p_pow(z[k]) + p_pow(zp[k]) - p_pow(z[k] + zp[k]));
  }

  EulerFactorResult res;
  res.ep = 0.0;
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    const auto [solutions, total] = local_zero_count(system, wt, p, mask);
    if (solutions == 0) continue;
    std::complex<double> term = static_cast<double>(solutions) / static_cast<double>(total);
    for (int j = 0; j < m; ++j) {
      if ((mask >> j) & 1u) term *= weight[static_cast<std::size_t>(j)];
    }
    res.ep += term;
  }

  res.ep_prime = 1.0;
  const std::complex<double> inv_p = 1.0 / static_cast<double>(p);
  for (int j = 0; j < m; ++j) {
    const std::size_t k = static_cast<std::size_t>(j);
    res.ep_prime *= (1.0 - inv_p * p_pow(z[k])) * (1.0 - inv_p * p_pow(zp[k])) /
                    (1.0 - inv_p * p_pow(z[k] + zp[k]));
  }

  res.ratio = res.ep / res.ep_prime;
  res.scaled_gap = std::abs(res.ratio - 1.0) * static_cast<double>(p) * static_cast<double>(p);
  return res;
}

EulerWComparison euler_w_product_compare(const WTrick& wt, int m, double R) {
  if (m < 1) throw std::invalid_argument("euler_w_product_compare: m must be >= 1");
  if (!(R > 1.0)) throw std::invalid_argument("euler_w_product_compare: R must be > 1");
  const double zr = 1.0 / std::log(R);  // z_j = z'_j = 1/log R at xi = 0

  EulerWComparison out;
  out.prod_ep_prime = 1.0;
  for (std::uint64_t p = 2; p <= wt.w; ++p) {
    if (!is_prime_u64(p)) continue;
    const double pd = static_cast<double>(p);
    const double factor = (1.0 - std::pow(pd, -1.0 - zr)) * (1.0 - std::pow(pd, -1.0 - zr)) /
                          (1.0 - std::pow(pd, -1.0 - 2.0 * zr));
    out.prod_ep_prime *= std::pow(factor, m);
  }
  out.phi_ratio_power =
      std::pow(static_cast<double>(wt.phi_W) / static_cast<double>(wt.W), m);
  out.rel_gap = std::fabs(out.prod_ep_prime / out.phi_ratio_power - 1.0);
  return out;
}

}  // namespace aplab
