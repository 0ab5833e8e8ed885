#pragma once

// Cutoff functions chi and the truncated divisor sums built from them.
//
// A cutoff is an even function with chi(0) = 1 supported in
// [-support_radius, support_radius].  The two stock instances are the tent
// chi(x) = max(1 - |x|, 0) and a C-infinity bump that is identically 1 on
// [-plateau, plateau] and 0 outside [-1, 1].
//
// The divisor-sum transform of chi at truncation R is
//     lambda_chi_R(n) = log R * sum_{d | n} mu(d) chi(log d / log R),
// which for the tent collapses to the sharp-cutoff sum
//     lambda_R(n) = sum_{d | n, d <= R} mu(d) log(R / d).
// Only squarefree d below R^support_radius contribute, so evaluation either
// factorizes n via a smallest-prime-factor table or tests divisibility
// against a memoized list of weighted candidate divisors (the right tool
// when n runs far beyond any in-core table).
//
// The constant c_chi = int_0^infty chi'(x)^2 dx normalizes the majorant
// built downstream; it is evaluated by adaptive quadrature.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "aplab/sieve.hpp"

namespace aplab {

struct CutoffFunction {
  std::string name;
  std::function<double(double)> eval;   // values in [0, 1], even, eval(0) = 1
  std::function<double(double)> deriv;  // exact derivative (one-sided kinks allowed)
  double support_radius = 1.0;
  bool smooth = false;  // true iff C-infinity
};

// chi(x) = max(1 - |x|, 0); deriv is -sign(x) inside the support, 0 at x=0
// and outside.
CutoffFunction tent_cutoff();

// C-infinity bump: 1 on [-plateau, plateau], 0 outside [-1, 1], glued with
// the exp(-1/t) smoothstep. Requires plateau in (0, 1).
CutoffFunction smooth_bump_cutoff(double plateau);

// Same cutoff with the argument rescaled, chi_s(x) = chi(x * scale); the
// support shrinks by `scale` and c_chi grows by the same factor.
CutoffFunction compressed_cutoff(const CutoffFunction& chi, double scale);

// c_chi = int_0^infty chi'(x)^2 dx, adaptive Simpson, absolute tol.
double c_chi(const CutoffFunction& chi, double tol = 1e-9);

// Truncated divisor sum via spf-table factorization of n. Requires
// 1 <= n <= tables.limit and R > 1.
double lambda_chi_R(std::uint64_t n, double R, const CutoffFunction& chi,
                    const SieveTables& tables);

// Sharp-cutoff sum sum_{d|n, d<=R} mu(d) log(R/d) (tent transform).
double lambda_R(std::uint64_t n, double R, const SieveTables& tables);

// Memoized weighted divisor candidates for a fixed (chi, R): all squarefree
// d < R^support_radius with weight mu(d) * chi(log d / log R).  evaluate(n)
// only does divisibility tests, so n may exceed any table limit.
class DivisorWeights {
 public:
  DivisorWeights(const CutoffFunction& chi, double R);

  double log_R() const { return log_R_; }
  std::size_t size() const { return divisors_.size(); }

  // lambda_chi_R(n) for arbitrary n >= 1 (no table needed).
  double evaluate(std::uint64_t n) const {
    double s = 0.0;
    for (std::size_t i = 0; i < divisors_.size(); ++i)
      if (n % divisors_[i] == 0) s += weights_[i];
    return log_R_ * s;
  }

 private:
  double log_R_;
  std::vector<std::uint64_t> divisors_;
  std::vector<double> weights_;
};

}  // namespace aplab
