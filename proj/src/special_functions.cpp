#include "psup/special_functions.hpp"

#include <cmath>
#include <limits>
#include <string>

// Thread-safe lgamma; std::lgamma may write the signgam global. For x > 0
// the sign output is always +1 and gets discarded.
extern "C" double lgamma_r(double, int*);

namespace psup {
namespace {

// Pivot floor for the Lentz recurrence.
constexpr double kTinyPivot = 1e-300;

// Neumaier-compensated accumulator: keeps the running error term even when
// an incoming term is larger than the sum so far.
struct CompensatedSum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double term) {
    const double t = sum + term;
    if (std::abs(sum) >= std::abs(term)) {
      comp += (sum - t) + term;
    } else {
      comp += (term - t) + sum;
    }
    sum = t;
  }

  double value() const { return sum + comp; }
};

void check_tolerance(const Tolerance& tol) {
  if (!(tol.rel_eps > 0.0) || !(tol.rel_eps <= 1e-6)) {
    throw std::domain_error("Tolerance: rel_eps must lie in (0, 1e-6]");
  }
  if (tol.max_iter < 50) {
    throw std::domain_error("Tolerance: max_iter must be at least 50");
  }
}

// Modified Lentz evaluation of the incomplete-beta continued fraction.
// Only called with x on the fast-converging side of (a+1)/(a+b+2).
double beta_cont_frac(double a, double b, double x, const Tolerance& tol) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTinyPivot) d = kTinyPivot;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= tol.max_iter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTinyPivot) d = kTinyPivot;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTinyPivot) c = kTinyPivot;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTinyPivot) d = kTinyPivot;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTinyPivot) c = kTinyPivot;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) <= tol.rel_eps) return h;
  }
  throw ConvergenceError(
      "reg_inc_beta: continued fraction did not converge within " +
      std::to_string(tol.max_iter) + " iterations (a=" + std::to_string(a) +
      ", b=" + std::to_string(b) + ", x=" + std::to_string(x) + ")");
}

// Ascending-t, compensated summation of the terminating Pochhammer series
// sum_{t=0}^{m} (a)_t (b)_t / (c)_t * z^t / t!.
double terminating_series(double a, double b, double c, double z,
                          std::int64_t m) {
  CompensatedSum s;
  double term = 1.0;
  s.add(term);
  for (std::int64_t t = 0; t < m; ++t) {
    const double td = static_cast<double>(t);
    term *= (a + td) * (b + td) / ((c + td) * (td + 1.0)) * z;
    s.add(term);
  }
  return s.value();
}

}  // namespace

double log_gamma(double x) {
  if (!std::isfinite(x) || x <= 0.0) {
    throw std::domain_error("log_gamma: argument must be positive and finite");
  }
  int sign = 0;
  return lgamma_r(x, &sign);
}

double log_beta(double a, double b) {
  return log_gamma(a) + log_gamma(b) - log_gamma(a + b);
}

double reg_inc_beta(double x, double a, double b, const Tolerance& tol) {
  check_tolerance(tol);
  if (!std::isfinite(x) || x < 0.0 || x > 1.0) {
    throw std::domain_error("reg_inc_beta: x must lie in [0,1]");
  }
  if (!std::isfinite(a) || !std::isfinite(b) || a <= 0.0 || b <= 0.0) {
    throw std::domain_error("reg_inc_beta: a and b must be positive");
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  if (x > (a + 1.0) / (a + b + 2.0)) {
    // complement identity keeps the fraction in its fast tail; the inner
    // call never switches back since 1-x < (b+1)/(a+b+2) here
    return 1.0 - reg_inc_beta(1.0 - x, b, a, tol);
  }
  const double front =
      std::exp(a * std::log(x) + b * std::log1p(-x) - log_beta(a, b));
  return front * beta_cont_frac(a, b, x, tol) / a;
}

double f_cdf(double x, double d1, double d2, const Tolerance& tol) {
  if (!std::isfinite(d1) || !std::isfinite(d2) || d1 <= 0.0 || d2 <= 0.0) {
    throw std::domain_error("f_cdf: degrees of freedom must be positive");
  }
  if (!std::isfinite(x) || x < 0.0) {
    throw std::domain_error("f_cdf: x must be non-negative");
  }
  if (x == 0.0) return 0.0;
  const double t = d1 * x;
  return reg_inc_beta(t / (t + d2), 0.5 * d1, 0.5 * d2, tol);
}

double gauss_2f1_terminating(double a, double b, double c, double z) {
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c) ||
      !std::isfinite(z)) {
    throw std::domain_error("gauss_2f1_terminating: arguments must be finite");
  }
  if (b > 0.0 || b != std::floor(b)) {
    throw std::domain_error(
        "gauss_2f1_terminating: b must be a non-positive integer "
        "(only the terminating series is supported)");
  }
  if (c <= 0.0 && c == std::floor(c)) {
    throw std::domain_error(
        "gauss_2f1_terminating: c must not be a non-positive integer");
  }
  if (std::abs(z) >= 1.0) {
    throw std::domain_error("gauss_2f1_terminating: need |z| < 1");
  }
  if (-b > 9.0e15) {
    throw std::domain_error("gauss_2f1_terminating: |b| too large");
  }
  const auto m = static_cast<std::int64_t>(-b);
  if (m == 0 || z == 0.0) return 1.0;
  if (z < 0.0) {
    // (b)_t z^t >= 0: single-signed terms, sum directly
    return terminating_series(a, b, c, z, m);
  }
  // z > 0 alternates; Pfaff-transform onto z' < 0 before summing
  const double zp = z / (z - 1.0);
  const double transformed = terminating_series(c - a, b, c, zp, m);
  const double result =
      std::pow(1.0 - z, static_cast<double>(m)) * transformed;
  if (!std::isfinite(result)) {
    throw ConvergenceError(
        "gauss_2f1_terminating: transformed series left the double range");
  }
  return result;
}

double binomial_tail(std::int64_t n, std::int64_t lo, std::int64_t hi,
                     double q) {
  if (n < 1) {
    throw std::domain_error("binomial_tail: n must be positive");
  }
  if (lo < 0 || lo > hi || hi > n) {
    throw std::domain_error("binomial_tail: need 0 <= lo <= hi <= n");
  }
  if (!std::isfinite(q) || q < 0.0 || q > 1.0) {
    throw std::domain_error("binomial_tail: q must lie in [0,1]");
  }
  if (q == 0.0) return lo == 0 ? 1.0 : 0.0;
  if (q == 1.0) return hi == n ? 1.0 : 0.0;
  const double lq = std::log(q);
  const double l1q = std::log1p(-q);
  const double lgn = log_gamma(static_cast<double>(n) + 1.0);
  CompensatedSum s;
  for (std::int64_t r = lo; r <= hi; ++r) {
    const double rd = static_cast<double>(r);
    const double nrd = static_cast<double>(n - r);
    const double lg = lgn - log_gamma(rd + 1.0) - log_gamma(nrd + 1.0);
    s.add(std::exp(lg + rd * lq + nrd * l1q));
  }
  // accumulated roundoff can push a probability a few ulp past the range
  return std::min(1.0, std::max(0.0, s.value()));
}

double neg_binomial_cdf(std::int64_t a, std::int64_t kmax, double p) {
  if (a < 1) {
    throw std::domain_error("neg_binomial_cdf: a must be a positive integer");
  }
  if (kmax < 0) {
    throw std::domain_error("neg_binomial_cdf: kmax must be non-negative");
  }
  if (!std::isfinite(p) || p <= 0.0 || p >= 1.0) {
    throw std::domain_error("neg_binomial_cdf: p must lie in (0,1)");
  }
  const double lp = std::log(p);
  const double l1p = std::log1p(-p);
  const double ad = static_cast<double>(a);
  const double lga = log_gamma(ad);
  CompensatedSum s;
  for (std::int64_t r = 0; r <= kmax; ++r) {
    const double rd = static_cast<double>(r);
    const double lg = log_gamma(ad + rd) - lga - log_gamma(rd + 1.0);
    s.add(std::exp(lg + ad * lp + rd * l1p));
  }
  return std::min(1.0, std::max(0.0, s.value()));
}

}  // namespace psup
