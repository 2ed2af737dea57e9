#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "psup/special_functions.hpp"

// Self-check sweeps over the library's numerical identities. These back
// both the CLI selftest subcommand and the acceptance suite; each returns
// a summary instead of asserting so callers decide how to report.

namespace psup {

struct SuiteResult {
  std::string name;
  bool pass = false;
  std::size_t cases = 0;  // cells / points examined
  double worst = 0.0;     // worst residual observed (suite-specific meaning)
  double bound = 0.0;     // the limit it was held to
  std::string detail;     // worst-case coordinates, excursion counts, ...
};

/// Cross-expression spread of the index over all integer shape pairs
/// (1..shape_max)^2, rate pairs from `rates`, thresholds from
/// `thresholds`, plus the matching sweep of the conditional p-value
/// expressions over the same counts and exposures. worst = the largest
/// max-minus-min across applicable expressions.
SuiteResult expression_agreement_suite(std::int64_t shape_max,
                                       const std::vector<double>& rates,
                                       const std::vector<double>& thresholds,
                                       double bound,
                                       const Tolerance& tol = {});

/// |theta_shifted - (1 - p)| over k1 in 0..k1_max, k2 in 1..k2_max, the
/// given exposure pairs and thresholds. `perturbation` is a test hook that
/// shifts theta_shifted to make the suite fail on purpose.
SuiteResult duality_suite(
    std::int64_t k1_max, std::int64_t k2_max,
    const std::vector<std::pair<double, double>>& exposures,
    const std::vector<double>& thresholds, double bound,
    double perturbation = 0.0, const Tolerance& tol = {});

/// Strict dominance theta > 1 - p over the full (n1, n2) grid at the given
/// threshold. worst = the smallest margin theta - (1-p); passes when it is
/// strictly positive.
SuiteResult dominance_suite(double n1, double n2, double threshold,
                            const Tolerance& tol = {});

/// Symmetry residual |I_x(a,b) + I_{1-x}(b,a) - 1| over `points` random
/// (x, a, b) with a, b log-uniform in (0.1, 100).
SuiteResult beta_symmetry_suite(std::size_t points, std::uint64_t seed,
                                double bound);

/// Agreement of the Monte Carlo estimate with the closed-form index over
/// `parameter_sets` random posterior pairs (shapes in [0.5,100], rates in
/// [1,1e5], thresholds in [0.25,4]). An excursion is a gap beyond
/// z_multiplier standard errors (the empirical std_error when positive,
/// else the binomial standard error at the closed-form value); the suite
/// passes when excursions <= allowed_excursions. worst = largest |gap|/band.
SuiteResult mc_concordance_suite(std::size_t parameter_sets,
                                 std::uint64_t draws, std::uint64_t seed,
                                 double z_multiplier,
                                 std::size_t allowed_excursions);

}  // namespace psup
