#pragma once

#include <array>
#include <cstddef>
#include <optional>

#include "psup/model.hpp"
#include "psup/special_functions.hpp"

namespace psup {

enum class Direction { Less, Greater };

/// Which tail of the posterior rate ratio lambda1/lambda2 to report, and
/// the threshold c. Less with c = 1 is the plain superiority index
/// P(lambda1 < lambda2 | data).
struct ComparisonQuery {
  Direction direction = Direction::Less;
  double threshold = 1.0;  // c > 0, finite
};

/// The equivalent closed forms the index (and the conditional p-value)
/// can be computed by.
enum class Expression : std::size_t {
  IncBeta = 0,
  FDist,
  BinomialSum,
  NegBinomialSum,
  Hypergeometric2F1,
};

inline constexpr std::size_t kExpressionCount = 5;

inline constexpr std::array<Expression, kExpressionCount> kAllExpressions = {
    Expression::IncBeta, Expression::FDist, Expression::BinomialSum,
    Expression::NegBinomialSum, Expression::Hypergeometric2F1};

const char* expression_name(Expression e);

/// Values keyed by Expression; disengaged entries mean "not applicable"
/// for the posteriors at hand (e.g. the finite sums need integer shapes).
using ExpressionValues = std::array<std::optional<double>, kExpressionCount>;

/// theta together with every applicable expression's value and the spread
/// across them. theta always equals the IncBeta entry.
struct IndexReport {
  double theta = 0.0;
  ExpressionValues by_expression{};
  double max_disagreement = 0.0;

  const std::optional<double>& value(Expression e) const {
    return by_expression[static_cast<std::size_t>(e)];
  }
};

/// A cross-expression spread above this deserves a diagnostic warning.
inline constexpr double kDisagreementWarnThreshold = 1e-9;

/// Bayesian index theta = P(lambda1/lambda2 < c | data) for gamma
/// posteriors Ga(a1,b1), Ga(a2,b2), canonically I_{b1 c/(b1 c + b2)}(a1,a2).
/// Direction Greater returns the complement (the ratio law is continuous).
/// Alongside the canonical value, the report carries the F-distribution
/// form always, the binomial / negative-binomial sums when both shapes are
/// integers, and the terminating-2F1 form when a1 is an integer.
IndexReport index(const GammaPosterior& post1, const GammaPosterior& post2,
                  const ComparisonQuery& query, const Tolerance& tol = {});

/// Posterior CDF of the rate ratio pi = lambda1/lambda2 at x > 0:
/// I_{b1 x/(b1 x + b2)}(a1, a2). index(..., Less, c) == ratio_cdf(..., c).
double ratio_cdf(const GammaPosterior& post1, const GammaPosterior& post2,
                 double x, const Tolerance& tol = {});

/// Posterior density of the rate ratio at x > 0, computed in log space.
double ratio_pdf(const GammaPosterior& post1, const GammaPosterior& post2,
                 double x);

}  // namespace psup
