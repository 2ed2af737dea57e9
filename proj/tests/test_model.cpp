#include <doctest.h>

#include "psup/model.hpp"

using namespace psup;

TEST_CASE("posterior updates per prior family") {
  // breast cancer exposed arm under the non-informative prior
  const auto p1 = posterior(NonInformative{}, {41, 28010.0});
  CHECK(p1.shape == 41.0);
  CHECK(p1.rate == 28010.0);

  const auto p2 = posterior(Jeffreys{}, {15, 19017.0});
  CHECK(p2.shape == 15.5);
  CHECK(p2.rate == 19017.0);

  // hypertension treatment arm with historical borrowing at weight 0.5
  const auto p3 =
      posterior(ConditionalPower{{47, 5135.0}, 0.5}, {54, 5635.0});
  CHECK(p3.shape == 77.5);
  CHECK(p3.rate == 8202.5);

  const auto p4 = posterior(ProperGamma{2.0, 3.0}, {10, 7.0});
  CHECK(p4.shape == 12.0);
  CHECK(p4.rate == 10.0);
}

TEST_CASE("posterior additivity is exact") {
  const auto post = posterior(ProperGamma{0.125, 2.5}, {9, 40.0});
  CHECK(post.shape == 0.125 + 9.0);
  CHECK(post.rate == 2.5 + 40.0);
}

TEST_CASE("non-informative prior with zero events is improper") {
  CHECK_THROWS_AS(posterior(NonInformative{}, {0, 10.0}),
                  ImproperPosteriorError);
  // Jeffreys stays proper at zero events
  const auto post = posterior(Jeffreys{}, {0, 10.0});
  CHECK(post.shape == 0.5);
  CHECK(post.rate == 10.0);
}

TEST_CASE("conditional power prior edge cases") {
  // no current or historical events: improper
  CHECK_THROWS_AS(posterior(ConditionalPower{{0, 100.0}, 0.5}, {0, 10.0}),
                  ImproperPosteriorError);
  // zero historical events but current data: proper (non-informative limit)
  const auto post = posterior(ConditionalPower{{0, 100.0}, 0.5}, {3, 10.0});
  CHECK(post.shape == 3.0);
  CHECK(post.rate == 60.0);
  // weight outside (0,1]
  CHECK_THROWS_AS(posterior(ConditionalPower{{5, 100.0}, 0.0}, {3, 10.0}),
                  std::domain_error);
  CHECK_THROWS_AS(posterior(ConditionalPower{{5, 100.0}, 1.5}, {3, 10.0}),
                  std::domain_error);
}

TEST_CASE("conditional power prior at vanishing weight meets the "
          "non-informative posterior exactly") {
  const auto limit =
      posterior(ConditionalPower{{47, 5135.0}, 1e-300}, {54, 5635.0});
  const auto base = posterior(NonInformative{}, {54, 5635.0});
  CHECK(limit.shape == base.shape);
  CHECK(limit.rate == base.rate);
}

TEST_CASE("invalid observations and priors are rejected") {
  CHECK_THROWS_AS(posterior(NonInformative{}, {-1, 10.0}), std::domain_error);
  CHECK_THROWS_AS(posterior(NonInformative{}, {3, 0.0}), std::domain_error);
  CHECK_THROWS_AS(posterior(NonInformative{}, {3, -5.0}), std::domain_error);
  CHECK_THROWS_AS(posterior(ProperGamma{0.0, 1.0}, {3, 5.0}),
                  std::domain_error);
  CHECK_THROWS_AS(posterior(ProperGamma{1.0, -1.0}, {3, 5.0}),
                  std::domain_error);
}

TEST_CASE("is_integer_shape") {
  CHECK(is_integer_shape({41.0, 28010.0}));
  CHECK_FALSE(is_integer_shape({15.5, 19017.0}));
  CHECK_FALSE(is_integer_shape({77.5, 8202.5}));
  // tolerance window of 1e-9 around integers
  CHECK(is_integer_shape({3.0 + 5e-10, 1.0}));
  CHECK(is_integer_shape({3.0 - 5e-10, 1.0}));
  CHECK_FALSE(is_integer_shape({3.0 + 1e-8, 1.0}));
  // shapes below 1 never qualify
  CHECK_FALSE(is_integer_shape({0.5, 1.0}));
  CHECK_FALSE(is_integer_shape({1e-12, 1.0}));
}
