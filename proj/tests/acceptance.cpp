// Acceptance suite: one line per criterion, nonzero exit when any fails.
// Each criterion pins its tolerance and runtime budget in code.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "psup/conditional_test.hpp"
#include "psup/index.hpp"
#include "psup/mc_oracle.hpp"
#include "psup/model.hpp"
#include "psup/validation.hpp"

using namespace psup;

namespace {

int g_failures = 0;

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ =
      std::chrono::steady_clock::now();
};

void report(int id, const char* name, bool pass, const std::string& detail,
            double seconds) {
  std::printf("%s  criterion %d: %s (%s) [%.2fs]\n", pass ? "PASS" : "FAIL",
              id, name, detail.c_str(), seconds);
  if (!pass) ++g_failures;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

struct PublishedValue {
  const char* label;
  double published;
  double computed;
};

void check_published(int id, const char* name,
                     const std::vector<PublishedValue>& values,
                     double time_limit, const Timer& timer) {
  double max_gap = 0.0;
  const char* worst = "";
  for (const auto& v : values) {
    const double gap = std::abs(v.computed - v.published);
    if (gap > max_gap) {
      max_gap = gap;
      worst = v.label;
    }
  }
  const double elapsed = timer.seconds();
  const bool pass = max_gap <= 5e-4 && elapsed < time_limit;
  report(id, name, pass,
         "max gap " + fmt("%.2e", max_gap) + " at " + worst +
             ", tolerance 5e-4",
         elapsed);
}

void criterion_1_table2() {
  Timer timer;
  const Observation o1{41, 28010.0};
  const Observation o2{15, 19017.0};
  const ComparisonQuery query{Direction::Greater, 1.0};
  check_published(
      1, "breast-cancer reproduction at c=1",
      {{"p", 0.024, p_value(o1, o2, query).p_value},
       {"theta noninformative", 0.985,
        index(posterior(NonInformative{}, o1), posterior(NonInformative{}, o2),
              query)
            .theta},
       {"theta jeffreys", 0.983,
        index(posterior(Jeffreys{}, o1), posterior(Jeffreys{}, o2), query)
            .theta}},
      1.0, timer);
}

void criterion_2_table3() {
  Timer timer;
  const Observation o1{41, 28010.0};
  const Observation o2{15, 19017.0};
  const ComparisonQuery query{Direction::Greater, 1.5};
  check_published(
      2, "breast-cancer reproduction at c=1.5",
      {{"p", 0.291, p_value(o1, o2, query).p_value},
       {"theta noninformative", 0.776,
        index(posterior(NonInformative{}, o1), posterior(NonInformative{}, o2),
              query)
            .theta},
       {"theta jeffreys", 0.757,
        index(posterior(Jeffreys{}, o1), posterior(Jeffreys{}, o2), query)
            .theta}},
      1.0, timer);
}

void criterion_3_table5() {
  Timer timer;
  const Observation o1{54, 5635.0};
  const Observation o2{70, 5600.0};
  const Observation h1{47, 5135.0};
  const Observation h2{63, 4960.0};
  const ComparisonQuery query{Direction::Less, 1.0};
  std::vector<PublishedValue> values = {
      {"p", 0.083, p_value(o1, o2, query).p_value},
      {"theta noninformative", 0.930,
       index(posterior(NonInformative{}, o1), posterior(NonInformative{}, o2),
             query)
           .theta}};
  const std::pair<double, double> weights[] = {
      {0.1, 0.942}, {0.5, 0.971}, {1.0, 0.988}};
  for (const auto& [a, published] : weights) {
    values.push_back(
        {a == 0.1 ? "theta power a=0.1"
                  : (a == 0.5 ? "theta power a=0.5" : "theta power a=1.0"),
         published,
         index(posterior(ConditionalPower{h1, a}, o1),
               posterior(ConditionalPower{h2, a}, o2), query)
             .theta});
  }
  check_published(3, "hypertension reproduction with power priors", values,
                  1.0, timer);
}

void criterion_4_expressions() {
  Timer timer;
  const auto suite = expression_agreement_suite(
      50, {1.0, 10.0, 28010.0, 19017.0}, {0.5, 1.0, 1.5, 2.0}, 1e-10);
  const double elapsed = timer.seconds();
  report(4, "expression identities over integer shapes 1..50",
         suite.pass && elapsed < 30.0,
         "cases " + std::to_string(suite.cases) + ", worst spread " +
             fmt("%.2e", suite.worst) + " <= 1e-10 at " + suite.detail,
         elapsed);
}

void criterion_5_duality() {
  Timer timer;
  const auto suite = duality_suite(
      40, 40, {{1.0, 1.0}, {10.0, 10.0}, {10.0, 20.0}, {28010.0, 19017.0}},
      {0.5, 1.0, 1.5, 2.0}, 1e-12);
  const double elapsed = timer.seconds();
  report(5, "duality theta(k1+1,k2) = 1-p(k1,k2)",
         suite.pass && elapsed < 60.0,
         "cases " + std::to_string(suite.cases) + ", worst gap " +
             fmt("%.2e", suite.worst) + " <= 1e-12 at " + suite.detail,
         elapsed);
}

void criterion_6_dominance() {
  Timer timer;
  const auto suite = dominance_suite(10.0, 10.0, 1.0);
  const double elapsed = timer.seconds();
  report(6, "strict dominance theta > 1-p on the 10x10 grid",
         suite.pass && elapsed < 5.0,
         "cells " + std::to_string(suite.cases) + ", smallest margin " +
             fmt("%.2e", suite.worst) + " at " + suite.detail,
         elapsed);
}

void criterion_7_monte_carlo() {
  Timer timer;
  const auto suite = mc_concordance_suite(20, 1'000'000, 8675309, 4.0, 1);
  const double elapsed = timer.seconds();
  report(7, "monte carlo concordance, 20 posterior pairs x 1e6 draws",
         suite.pass && elapsed < 60.0,
         "worst z " + fmt("%.2f", suite.worst) + ", " + suite.detail, elapsed);
}

void criterion_8_edge_cases() {
  Timer timer;
  bool pass = true;
  std::string detail;

  // k2 = 0 forces p = 1 exactly, any threshold
  for (double c : {0.5, 1.0, 2.0}) {
    if (p_value({5, 10.0}, {0, 10.0}, {Direction::Less, c}).p_value != 1.0) {
      pass = false;
      detail += "p(k2=0) != 1; ";
    }
  }

  // non-informative prior with zero events raises the typed error
  bool typed_error = false;
  try {
    posterior(NonInformative{}, {0, 10.0});
  } catch (const ImproperPosteriorError&) {
    typed_error = true;
  } catch (...) {
  }
  if (!typed_error) {
    pass = false;
    detail += "missing ImproperPosteriorError; ";
  }

  // symmetry identity on a 1000-point sweep
  const auto symmetry = beta_symmetry_suite(1000, 8675309, 1e-13);
  if (!symmetry.pass) pass = false;
  detail += "symmetry worst " + fmt("%.2e", symmetry.worst) + " <= 1e-13";

  report(8, "edge cases: k2=0 p-value, improper posterior, beta symmetry",
         pass, detail, timer.seconds());
}

}  // namespace

int main() {
  criterion_1_table2();
  criterion_2_table3();
  criterion_3_table5();
  criterion_4_expressions();
  criterion_5_duality();
  criterion_6_dominance();
  criterion_7_monte_carlo();
  criterion_8_edge_cases();
  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all 8 criteria passed\n");
  return 0;
}
