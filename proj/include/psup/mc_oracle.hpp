#pragma once

#include <cstdint>
#include <vector>

#include "psup/index.hpp"
#include "psup/model.hpp"

namespace psup {

/// Empirical estimate of the index from paired posterior draws.
struct McEstimate {
  double estimate = 0.0;
  double std_error = 0.0;  // sqrt(estimate (1-estimate) / draws)
  std::uint64_t draws = 0;
  std::uint64_t seed = 0;
};

/// count independent draws from Ga(shape, rate) in the shape-rate
/// convention. The generator is mt19937_64 (fully pinned by the standard)
/// feeding a Marsaglia-Tsang squeeze sampler, with the shape+1 boost for
/// shapes below 1, so a fixed seed reproduces the sequence bit for bit.
std::vector<double> sample_gamma(const GammaPosterior& post, std::size_t count,
                                 std::uint64_t seed);

/// Fraction of paired draws with lambda1/lambda2 below (Less) or above
/// (Greater) the threshold. Work is split over a fixed number of logical
/// shards with seeds derived from the master seed by a SplitMix64 step, so
/// the estimate depends only on (inputs, seed, draws), never on scheduling.
/// Requires draws >= 10^4.
McEstimate estimate_index(const GammaPosterior& post1,
                          const GammaPosterior& post2,
                          const ComparisonQuery& query, std::uint64_t draws,
                          std::uint64_t seed);

}  // namespace psup
