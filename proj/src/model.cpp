#include "psup/model.hpp"

#include <cmath>

namespace psup {
namespace {

constexpr double kIntegerShapeTol = 1e-9;

}  // namespace

void validate(const Observation& obs) {
  if (obs.events < 0) {
    throw std::domain_error("Observation: event count must be non-negative");
  }
  if (!std::isfinite(obs.exposure) || obs.exposure <= 0.0) {
    throw std::domain_error(
        "Observation: exposure must be positive and finite");
  }
}

void validate(const GammaPosterior& post) {
  if (!std::isfinite(post.shape) || !std::isfinite(post.rate) ||
      post.shape <= 0.0 || post.rate <= 0.0) {
    throw std::domain_error(
        "GammaPosterior: shape and rate must be positive and finite");
  }
}

GammaPosterior posterior(const PriorSpec& prior, const Observation& obs) {
  validate(obs);
  const double k = static_cast<double>(obs.events);
  const double n = obs.exposure;

  return std::visit(
      [&](const auto& p) -> GammaPosterior {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, ProperGamma>) {
          if (!std::isfinite(p.alpha) || !std::isfinite(p.beta) ||
              p.alpha <= 0.0 || p.beta <= 0.0) {
            throw std::domain_error(
                "ProperGamma: alpha and beta must be positive");
          }
          return {p.alpha + k, p.beta + n};
        } else if constexpr (std::is_same_v<P, NonInformative>) {
          if (obs.events == 0) {
            throw ImproperPosteriorError(
                "non-informative prior with zero events yields an improper "
                "posterior");
          }
          return {k, n};
        } else if constexpr (std::is_same_v<P, Jeffreys>) {
          return {k + 0.5, n};
        } else {
          static_assert(std::is_same_v<P, ConditionalPower>);
          validate(p.historical);
          if (!std::isfinite(p.weight) || p.weight <= 0.0 || p.weight > 1.0) {
            throw std::domain_error(
                "ConditionalPower: weight must lie in (0, 1]");
          }
          const double shape =
              p.weight * static_cast<double>(p.historical.events) + k;
          if (shape <= 0.0) {
            throw ImproperPosteriorError(
                "conditional power prior with no current or historical "
                "events yields an improper posterior");
          }
          // historical x0 = 0 with k > 0 is fine: the prior degenerates to
          // the non-informative limit but the posterior stays proper
          return {shape, p.weight * p.historical.exposure + n};
        }
      },
      prior);
}

bool is_integer_shape(const GammaPosterior& post) {
  const double r = std::round(post.shape);
  return r >= 1.0 && std::abs(post.shape - r) <= kIntegerShapeTol;
}

}  // namespace psup
