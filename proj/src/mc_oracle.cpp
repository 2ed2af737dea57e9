#include "psup/mc_oracle.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace psup {
namespace {

// Logical shard count is fixed so a pooled estimate depends only on
// (seed, draws), never on how many workers execute the shards.
constexpr std::uint64_t kLogicalShards = 64;

// SplitMix64 step; derives decorrelated per-shard seeds from the master.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Gamma variates in the shape-rate convention on top of mt19937_64, whose
// output is pinned by the standard. The normal and gamma transforms are
// spelled out here because the std distributions are not pinned and would
// break cross-platform reproducibility.
class GammaStream {
 public:
  GammaStream(double shape, double rate, std::uint64_t seed)
      : rng_(seed), shape_(shape), rate_(rate) {}

  double next() {
    if (shape_ >= 1.0) return marsaglia_tsang(shape_) / rate_;
    // boost for shape < 1: draw at shape+1, scale by U^{1/shape}
    const double g = marsaglia_tsang(shape_ + 1.0);
    return g * std::pow(uniform_open(), 1.0 / shape_) / rate_;
  }

 private:
  double uniform_open() {  // (0,1), never 0, so log() stays finite
    return (static_cast<double>(rng_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double normal() {  // Marsaglia polar method
    for (;;) {
      const double u = 2.0 * uniform_open() - 1.0;
      const double v = 2.0 * uniform_open() - 1.0;
      const double s = u * u + v * v;
      if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
    }
  }

  double marsaglia_tsang(double shape) {  // squeeze accept-reject, shape >= 1
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x;
      double v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform_open();
      const double x2 = x * x;
      if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
      if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  std::mt19937_64 rng_;
  double shape_;
  double rate_;
};

}  // namespace

std::vector<double> sample_gamma(const GammaPosterior& post, std::size_t count,
                                 std::uint64_t seed) {
  validate(post);
  if (count == 0) {
    throw std::domain_error("sample_gamma: count must be positive");
  }
  GammaStream stream(post.shape, post.rate, seed);
  std::vector<double> out(count);
  for (auto& v : out) v = stream.next();
  return out;
}

McEstimate estimate_index(const GammaPosterior& post1,
                          const GammaPosterior& post2,
                          const ComparisonQuery& query, std::uint64_t draws,
                          std::uint64_t seed) {
  validate(post1);
  validate(post2);
  if (!std::isfinite(query.threshold) || query.threshold <= 0.0) {
    throw std::domain_error(
        "estimate_index: ratio threshold must be positive and finite");
  }
  if (draws < 10'000) {
    throw std::domain_error("estimate_index: need at least 10^4 draws");
  }

  const bool less = query.direction == Direction::Less;
  std::uint64_t hits = 0;
  const std::uint64_t base = draws / kLogicalShards;
  const std::uint64_t extra = draws % kLogicalShards;
  for (std::uint64_t shard = 0; shard < kLogicalShards; ++shard) {
    const std::uint64_t quota = base + (shard < extra ? 1 : 0);
    GammaStream s1(post1.shape, post1.rate, derive_seed(seed, 2 * shard));
    GammaStream s2(post2.shape, post2.rate, derive_seed(seed, 2 * shard + 1));
    for (std::uint64_t i = 0; i < quota; ++i) {
      const double ratio = s1.next() / s2.next();
      hits += less ? ratio < query.threshold : ratio > query.threshold;
    }
  }

  const double est = static_cast<double>(hits) / static_cast<double>(draws);
  const double se = std::sqrt(est * (1.0 - est) / static_cast<double>(draws));
  return {est, se, draws, seed};
}

}  // namespace psup
