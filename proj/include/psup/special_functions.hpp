#pragma once

#include <cstdint>
#include <stdexcept>

// Numerical kernels for two-sample Poisson rate comparison: log-gamma,
// regularized incomplete beta, F-distribution CDF, terminating Gauss
// hypergeometric series, and log-space binomial / negative-binomial tail
// sums. All functions are pure and safe for unrestricted concurrent use.

namespace psup {

/// Convergence knobs for the iterative kernels.
struct Tolerance {
  double rel_eps = 1e-15;  // must lie in (0, 1e-6]
  int max_iter = 500;      // must be >= 50
};

/// Thrown when an iterative kernel exhausts its iteration budget or an
/// intermediate quantity leaves the representable range.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// ln Gamma(x) for x > 0. Relative error stays below 1e-14 across
/// [1e-6, 1e15]; throws std::domain_error for x <= 0 or non-finite x.
double log_gamma(double x);

/// ln B(a,b) = ln Gamma(a) + ln Gamma(b) - ln Gamma(a+b).
double log_beta(double a, double b);

/// Regularized incomplete beta function I_x(a,b), the CDF of Beta(a,b).
///
/// Evaluated by the modified Lentz continued fraction, switching to the
/// complement I_x(a,b) = 1 - I_{1-x}(b,a) when x > (a+1)/(a+b+2) so the
/// fraction always runs in its fast-converging tail. x = 0 and x = 1
/// return exactly 0 and 1 without iteration.
double reg_inc_beta(double x, double a, double b, const Tolerance& tol = {});

/// CDF of the F distribution with (d1, d2) degrees of freedom,
/// F_{d1,d2}(x) = I_{d1 x/(d1 x + d2)}(d1/2, d2/2).
double f_cdf(double x, double d1, double d2, const Tolerance& tol = {});

/// Gauss hypergeometric 2F1(a, b; c; z) for the terminating case only:
/// b must be an exact non-positive integer, so the Pochhammer series stops
/// after |b|+1 terms. c must not be a non-positive integer and |z| < 1.
///
/// For z < 0 the terms keep one sign and the series is summed directly,
/// ascending in t with compensated accumulation. For z > 0 the terms
/// alternate and cancel catastrophically once |b| is large, so the series
/// is first mapped through the Pfaff transformation
///   2F1(a,b;c;z) = (1-z)^{-b} 2F1(c-a, b; c; z/(z-1)),
/// which preserves termination and produces a single-signed series when
/// c >= a (the case all callers in this library hit); the transformed
/// series is then summed the same way. Non-terminating inputs are a
/// domain error: callers needing those must go through reg_inc_beta.
double gauss_2f1_terminating(double a, double b, double c, double z);

/// sum_{r=lo}^{hi} C(n,r) q^r (1-q)^{n-r} for 0 <= lo <= hi <= n.
/// Each term is computed in log space via log_gamma so counts in the
/// thousands survive; terms are accumulated ascending in r with
/// compensated summation and the result is clamped to [0,1].
double binomial_tail(std::int64_t n, std::int64_t lo, std::int64_t hi,
                     double q);

/// sum_{r=0}^{kmax} C(a+r-1, a-1) p^a (1-p)^r for integer a >= 1,
/// kmax >= 0, p in (0,1): the negative binomial CDF, in log space.
double neg_binomial_cdf(std::int64_t a, std::int64_t kmax, double p);

}  // namespace psup
