#include <cmath>
#include <numeric>

#include <doctest.h>

#include "psup/index.hpp"
#include "psup/mc_oracle.hpp"

using namespace psup;

TEST_CASE("sample_gamma is deterministic for a fixed seed") {
  const GammaPosterior post{41.0, 28010.0};
  const auto a = sample_gamma(post, 4096, 12345);
  const auto b = sample_gamma(post, 4096, 12345);
  CHECK(a == b);  // bitwise
  const auto c = sample_gamma(post, 4096, 12346);
  CHECK(a != c);
}

TEST_CASE("sample_gamma moments match the law") {
  const GammaPosterior post{41.0, 28010.0};
  const std::size_t n = 1'000'000;
  const auto draws = sample_gamma(post, n, 777);
  const double mean =
      std::accumulate(draws.begin(), draws.end(), 0.0) / double(n);
  double var = 0.0;
  for (double v : draws) var += (v - mean) * (v - mean);
  var /= double(n - 1);

  const double true_mean = post.shape / post.rate;
  const double true_var = post.shape / (post.rate * post.rate);
  // 4 standard errors: SE(mean) = sigma/sqrt(n); SE(S^2) uses the gamma
  // fourth moment, kurtosis excess 6/shape
  const double se_mean = std::sqrt(true_var / double(n));
  const double se_var =
      true_var * std::sqrt((2.0 + 6.0 / post.shape) / double(n));
  CHECK(std::abs(mean - true_mean) <= 4.0 * se_mean);
  CHECK(std::abs(var - true_var) <= 4.0 * se_var);
}

TEST_CASE("sample_gamma handles shapes below one") {
  const GammaPosterior post{0.5, 10.0};  // Jeffreys-style half shape
  const std::size_t n = 400'000;
  const auto draws = sample_gamma(post, n, 2020);
  for (double v : draws) CHECK(v > 0.0);
  const double mean =
      std::accumulate(draws.begin(), draws.end(), 0.0) / double(n);
  const double se_mean =
      std::sqrt(post.shape / (post.rate * post.rate) / double(n));
  CHECK(std::abs(mean - post.shape / post.rate) <= 4.0 * se_mean);
}

TEST_CASE("sample_gamma validates inputs") {
  CHECK_THROWS_AS(sample_gamma({0.0, 1.0}, 10, 1), std::domain_error);
  CHECK_THROWS_AS(sample_gamma({1.0, -1.0}, 10, 1), std::domain_error);
  CHECK_THROWS_AS(sample_gamma({1.0, 1.0}, 0, 1), std::domain_error);
}

TEST_CASE("estimate_index on exchangeable posteriors") {
  const auto mc = estimate_index({1.0, 10.0}, {1.0, 10.0},
                                 {Direction::Less, 1.0}, 1'000'000, 42);
  CHECK(std::abs(mc.estimate - 0.5) <= 4.0 * mc.std_error);
  CHECK(mc.std_error ==
        std::sqrt(mc.estimate * (1.0 - mc.estimate) / double(mc.draws)));
  CHECK(mc.draws == 1'000'000);
  CHECK(mc.seed == 42);
}

TEST_CASE("estimate_index concords with the closed form") {
  // hypertension posterior pair, published value 0.930
  const GammaPosterior p1{54.0, 5635.0};
  const GammaPosterior p2{70.0, 5600.0};
  const auto mc = estimate_index(p1, p2, {Direction::Less, 1.0}, 1'000'000, 7);
  CHECK(std::abs(mc.estimate - 0.930) <= 4.0 * mc.std_error + 5e-4);
  CHECK(std::abs(mc.estimate - ratio_cdf(p1, p2, 1.0)) <=
        4.0 * mc.std_error);

  // breast cancer pair at threshold 1.5, direction Greater
  const GammaPosterior q1{41.0, 28010.0};
  const GammaPosterior q2{15.0, 19017.0};
  const auto mc2 =
      estimate_index(q1, q2, {Direction::Greater, 1.5}, 1'000'000, 11);
  const double closed = 1.0 - ratio_cdf(q1, q2, 1.5);
  CHECK(std::abs(mc2.estimate - closed) <= 4.0 * mc2.std_error);
}

TEST_CASE("estimate_index determinism and draw floor") {
  const GammaPosterior p1{2.0, 3.0};
  const GammaPosterior p2{4.0, 5.0};
  const auto a = estimate_index(p1, p2, {Direction::Less, 1.0}, 50'000, 9);
  const auto b = estimate_index(p1, p2, {Direction::Less, 1.0}, 50'000, 9);
  CHECK(a.estimate == b.estimate);
  CHECK(a.std_error == b.std_error);
  CHECK_THROWS_AS(estimate_index(p1, p2, {Direction::Less, 1.0}, 9'999, 9),
                  std::domain_error);
  CHECK_THROWS_AS(estimate_index(p1, p2, {Direction::Less, 0.0}, 50'000, 9),
                  std::domain_error);
}

TEST_CASE("Less and Greater estimates partition the draws") {
  const GammaPosterior p1{3.5, 2.0};
  const GammaPosterior p2{1.5, 4.0};
  const auto less = estimate_index(p1, p2, {Direction::Less, 1.2}, 65'536, 3);
  const auto greater =
      estimate_index(p1, p2, {Direction::Greater, 1.2}, 65'536, 3);
  // the ratio law is continuous, ties have probability zero
  CHECK(less.estimate + greater.estimate == 1.0);
}
