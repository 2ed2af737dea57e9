#pragma once

#include <cstdint>
#include <stdexcept>
#include <variant>

namespace psup {

/// One arm of a two-sample Poisson comparison: an event count k and the
/// exposure n it accrued over (person-years or subject count; real-valued).
struct Observation {
  std::int64_t events = 0;  // k >= 0
  double exposure = 1.0;    // n > 0, finite
};

/// Proper conjugate prior Ga(alpha, beta).
struct ProperGamma {
  double alpha = 1.0;
  double beta = 1.0;
};

/// Scale-invariant improper prior proportional to 1/lambda; the
/// (alpha,beta) -> (0,0) limit of the gamma family.
struct NonInformative {};

/// Jeffreys prior proportional to lambda^{-1/2}.
struct Jeffreys {};

/// Conditional power prior: a historical likelihood raised to a fixed
/// weight on top of the non-informative base, i.e. Ga(a x0, a m).
struct ConditionalPower {
  Observation historical;  // (x0, m)
  double weight = 1.0;     // a in (0, 1]
};

using PriorSpec =
    std::variant<ProperGamma, NonInformative, Jeffreys, ConditionalPower>;

/// Gamma law in the shape-rate convention: density ~ x^{a-1} e^{-b x},
/// mean a/b. Both fields strictly positive.
struct GammaPosterior {
  double shape = 1.0;  // a
  double rate = 1.0;   // b
};

/// The data/prior combination yields an improper posterior (e.g. the
/// non-informative prior with zero observed events).
class ImproperPosteriorError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

void validate(const Observation& obs);
void validate(const GammaPosterior& post);

/// Conjugate update mapping (prior, observation) to the posterior gamma law:
///   ProperGamma{A,B}       -> Ga(A + k, B + n)
///   NonInformative         -> Ga(k, n),        requires k > 0
///   Jeffreys               -> Ga(k + 1/2, n)
///   ConditionalPower{h, a} -> Ga(a x0 + k, a m + n), requires a x0 + k > 0
GammaPosterior posterior(const PriorSpec& prior, const Observation& obs);

/// True when the shape sits within 1e-9 of a positive integer, i.e. the
/// finite binomial / negative-binomial sum expressions apply. The slack
/// absorbs power-prior arithmetic (a*x0) that lands on integers inexactly.
bool is_integer_shape(const GammaPosterior& post);

}  // namespace psup
