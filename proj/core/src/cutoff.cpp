#include "aplab/cutoff.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "aplab/quadrature.hpp"

namespace aplab {

// At kink points the stored derivative takes the inside-the-support
// one-sided value, so deriv^2 is piecewise continuous on [0, support_radius]
// and the c_chi quadrature sees no isolated-point jumps.

CutoffFunction tent_cutoff() {
  CutoffFunction chi;
  chi.name = "tent";
  chi.support_radius = 1.0;
  chi.smooth = false;
  chi.eval = [](double x) { return std::max(1.0 - std::abs(x), 0.0); };
  chi.deriv = [](double x) {
    double u = std::abs(x);
    if (u > 1.0) return 0.0;
    return x >= 0.0 ? -1.0 : 1.0;
  };
  return chi;
}

namespace {

double expm_bump(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

double expm_bump_deriv(double t) {
  if (t <= 0.0) return 0.0;
  double inv = 1.0 / t;
  return std::exp(-inv) * inv * inv;
}

// C-infinity step: 0 at t<=0, 1 at t>=1, strictly increasing between.
double smoothstep(double t) {
  double a = expm_bump(t), b = expm_bump(1.0 - t);
  return a / (a + b);
}

double smoothstep_deriv(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  double a = expm_bump(t), b = expm_bump(1.0 - t);
  double da = expm_bump_deriv(t), db = expm_bump_deriv(1.0 - t);
  double denom = (a + b) * (a + b);
  return (da * b + a * db) / denom;
}

}  // namespace

CutoffFunction smooth_bump_cutoff(double plateau) {
  if (!(plateau > 0.0 && plateau < 1.0))
    throw std::invalid_argument("smooth_bump_cutoff: plateau must lie in (0, 1)");
  CutoffFunction chi;
  chi.name = "bump";
  chi.support_radius = 1.0;
  chi.smooth = true;
  double a = plateau;
  chi.eval = [a](double x) {
    double u = std::abs(x);
    if (u <= a) return 1.0;
    if (u >= 1.0) return 0.0;
    return smoothstep((1.0 - u) / (1.0 - a));
  };
  chi.deriv = [a](double x) {
    double u = std::abs(x);
    if (u <= a || u >= 1.0) return 0.0;
    double slope = -smoothstep_deriv((1.0 - u) / (1.0 - a)) / (1.0 - a);
    return x >= 0.0 ? slope : -slope;
  };
  return chi;
}

CutoffFunction compressed_cutoff(const CutoffFunction& chi, double scale) {
  if (!(scale > 0.0)) throw std::invalid_argument("compressed_cutoff: scale must be positive");
  CutoffFunction out;
  out.name = chi.name + "_scaled";
  out.support_radius = chi.support_radius / scale;
  out.smooth = chi.smooth;
  auto eval = chi.eval, deriv = chi.deriv;
  out.eval = [eval, scale](double x) { return eval(x * scale); };
  out.deriv = [deriv, scale](double x) { return scale * deriv(x * scale); };
  return out;
}

double c_chi(const CutoffFunction& chi, double tol) {
  auto f = [&](double x) {
    double d = chi.deriv(x);
    return d * d;
  };
  return adaptive_simpson(f, 0.0, chi.support_radius, tol);
}

namespace {

// Shared subset walk over the distinct primes of n: calls visit(d, mu(d))
// for every squarefree divisor d <= bound. Primes arrive sorted, so a
// branch exceeding the bound prunes all its siblings' extensions.
template <typename Visit>
void for_each_squarefree_divisor(const std::vector<std::uint64_t>& primes, double bound,
                                 const Visit& visit) {
  struct Frame {
    std::uint64_t d;
    int sign;
    std::size_t next;
  };
  std::vector<Frame> stack{{1, 1, 0}};
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    visit(f.d, f.sign);
    for (std::size_t i = f.next; i < primes.size(); ++i) {
      double nd = static_cast<double>(f.d) * static_cast<double>(primes[i]);
      if (nd > bound) break;
      stack.push_back({f.d * primes[i], -f.sign, i + 1});
    }
  }
}

}  // namespace

double lambda_chi_R(std::uint64_t n, double R, const CutoffFunction& chi,
                    const SieveTables& tables) {
  if (n < 1) throw std::invalid_argument("lambda_chi_R: n must be >= 1");
  if (!(R > 1.0)) throw std::invalid_argument("lambda_chi_R: R must exceed 1");
  const double log_R = std::log(R);
  const double bound = std::exp(chi.support_radius * log_R);
  auto primes = tables.distinct_primes(n);
  double sum = 0.0;
  for_each_squarefree_divisor(primes, bound, [&](std::uint64_t d, int sign) {
    sum += sign * chi.eval(std::log(static_cast<double>(d)) / log_R);
  });
  return log_R * sum;
}

double lambda_R(std::uint64_t n, double R, const SieveTables& tables) {
  if (n < 1) throw std::invalid_argument("lambda_R: n must be >= 1");
  if (!(R > 1.0)) throw std::invalid_argument("lambda_R: R must exceed 1");
  const double log_R = std::log(R);
  auto primes = tables.distinct_primes(n);
  double sum = 0.0;
  for_each_squarefree_divisor(primes, R, [&](std::uint64_t d, int sign) {
    sum += sign * (log_R - std::log(static_cast<double>(d)));
  });
  return sum;
}

DivisorWeights::DivisorWeights(const CutoffFunction& chi, double R) {
  if (!(R > 1.0)) throw std::invalid_argument("DivisorWeights: R must exceed 1");
  log_R_ = std::log(R);
  const double bound = std::exp(chi.support_radius * log_R_);
  if (bound > 1e7) throw std::invalid_argument("DivisorWeights: R^support_radius too large to memoize");
  const std::uint64_t dmax = static_cast<std::uint64_t>(bound);
  // Small Mobius sieve up to dmax; only squarefree d carry weight.
  std::vector<std::int8_t> mu(dmax + 1, 1);
  std::vector<std::uint8_t> composite(dmax + 1, 0);
  std::vector<std::uint64_t> primes;
  std::vector<std::uint32_t> spf(dmax + 1, 0);
  for (std::uint64_t i = 2; i <= dmax; ++i) {
    if (!composite[i]) {
      primes.push_back(i);
      spf[i] = static_cast<std::uint32_t>(i);
      mu[i] = -1;
    }
    for (std::uint64_t p : primes) {
      if (p > spf[i] || i * p > dmax) break;
      composite[i * p] = 1;
      spf[i * p] = static_cast<std::uint32_t>(p);
      mu[i * p] = (i % p == 0) ? 0 : static_cast<std::int8_t>(-mu[i]);
    }
  }
  for (std::uint64_t d = 1; d <= dmax; ++d) {
    if (d > 1 && mu[d] == 0) continue;
    double w = mu[d] * chi.eval(std::log(static_cast<double>(d)) / log_R_);
    if (w == 0.0) continue;
    divisors_.push_back(d);
    weights_.push_back(w);
  }
}

}  // namespace aplab
