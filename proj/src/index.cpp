#include "psup/index.hpp"

#include <cmath>

namespace psup {
namespace {

void check_threshold(double c) {
  if (!std::isfinite(c) || c <= 0.0) {
    throw std::domain_error("ratio threshold must be positive and finite");
  }
}

std::optional<double>& slot(ExpressionValues& values, Expression e) {
  return values[static_cast<std::size_t>(e)];
}

}  // namespace

const char* expression_name(Expression e) {
  switch (e) {
    case Expression::IncBeta:
      return "inc_beta";
    case Expression::FDist:
      return "f_dist";
    case Expression::BinomialSum:
      return "binomial_sum";
    case Expression::NegBinomialSum:
      return "neg_binomial_sum";
    case Expression::Hypergeometric2F1:
      return "hypergeometric_2f1";
  }
  return "unknown";
}

IndexReport index(const GammaPosterior& post1, const GammaPosterior& post2,
                  const ComparisonQuery& query, const Tolerance& tol) {
  validate(post1);
  validate(post2);
  check_threshold(query.threshold);

  const double a1 = post1.shape;
  const double a2 = post2.shape;
  // every expression depends on b1 and c only through b1*c, computed once
  const double b1c = post1.rate * query.threshold;
  const double b2 = post2.rate;
  const double z = b1c / (b1c + b2);  // b1 c / (b1 c + b2)
  const double w = b2 / (b1c + b2);

  IndexReport report;
  const double theta_less = reg_inc_beta(z, a1, a2, tol);
  slot(report.by_expression, Expression::IncBeta) = theta_less;
  slot(report.by_expression, Expression::FDist) =
      f_cdf((b1c / a1) / (b2 / a2), 2.0 * a1, 2.0 * a2, tol);

  const bool int1 = is_integer_shape(post1);
  const bool int2 = is_integer_shape(post2);
  const bool open_interval = z > 0.0 && z < 1.0;  // rounding at extreme rates
  if (int1 && int2 && open_interval) {
    const auto m1 = static_cast<std::int64_t>(std::llround(a1));
    const auto m2 = static_cast<std::int64_t>(std::llround(a2));
    slot(report.by_expression, Expression::BinomialSum) =
        binomial_tail(m1 + m2 - 1, 0, m2 - 1, w);
    slot(report.by_expression, Expression::NegBinomialSum) =
        neg_binomial_cdf(m1, m2 - 1, z);
  }
  if (int1 && open_interval) {
    const auto m1 = static_cast<std::int64_t>(std::llround(a1));
    const double series = gauss_2f1_terminating(
        a2, 1.0 - static_cast<double>(m1), 1.0 + a2, w);
    // prefactor combined in log space; it underflows doubles long before
    // the product does
    slot(report.by_expression, Expression::Hypergeometric2F1) =
        1.0 - std::exp(a2 * std::log(w) - std::log(a2) -
                       log_beta(static_cast<double>(m1), a2) +
                       std::log(series));
  }

  double spread = 0.0;
  for (auto& value : report.by_expression) {
    if (!value) continue;
    if (!std::isfinite(*value)) {
      throw ConvergenceError("index: an expression produced a non-finite value");
    }
    spread = std::max(spread, std::abs(*value - theta_less));
  }
  report.max_disagreement = spread;

  if (query.direction == Direction::Greater) {
    for (auto& value : report.by_expression) {
      if (value) *value = 1.0 - *value;
    }
  }
  report.theta = *report.value(Expression::IncBeta);
  return report;
}

double ratio_cdf(const GammaPosterior& post1, const GammaPosterior& post2,
                 double x, const Tolerance& tol) {
  validate(post1);
  validate(post2);
  if (!std::isfinite(x) || x <= 0.0) {
    throw std::domain_error("ratio_cdf: x must be positive");
  }
  const double t = post1.rate * x;
  return reg_inc_beta(t / (t + post2.rate), post1.shape, post2.shape, tol);
}

double ratio_pdf(const GammaPosterior& post1, const GammaPosterior& post2,
                 double x) {
  validate(post1);
  validate(post2);
  if (!std::isfinite(x) || x <= 0.0) {
    throw std::domain_error("ratio_pdf: x must be positive");
  }
  const double a1 = post1.shape;
  const double a2 = post2.shape;
  const double t = post1.rate * x;         // b1 x
  const double denom = t + post2.rate;     // b1 x + b2
  return std::exp(a1 * std::log(t / denom) +
                  a2 * std::log(post2.rate / denom) - std::log(x) -
                  log_beta(a1, a2));
}

}  // namespace psup
