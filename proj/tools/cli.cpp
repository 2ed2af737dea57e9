#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "psup/conditional_test.hpp"
#include "psup/index.hpp"
#include "psup/mc_oracle.hpp"
#include "psup/model.hpp"
#include "psup/validation.hpp"

namespace psup::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr std::uint64_t kDefaultMcSeed = 8675309;
constexpr double kTableTolerance = 5e-4;  // published values are 3-decimal

enum class Format { plain, as_json, csv };

std::string fmt(double v) {  // round-trips through text exactly
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_short(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

Format parse_format(const std::string& s) {
  if (s == "plain") return Format::plain;
  if (s == "json") return Format::as_json;
  if (s == "csv") return Format::csv;
  throw std::domain_error("unknown format '" + s +
                          "' (expected plain|json|csv)");
}

Direction parse_direction(const std::string& s) {
  if (s == "less") return Direction::Less;
  if (s == "greater") return Direction::Greater;
  throw std::domain_error("unknown direction '" + s +
                          "' (expected less|greater)");
}

std::vector<double> split_numbers(const std::string& s) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const std::size_t comma = std::min(s.find(',', pos), s.size());
    const std::string piece = s.substr(pos, comma - pos);
    std::size_t used = 0;
    out.push_back(std::stod(piece, &used));
    if (used != piece.size()) throw std::invalid_argument(piece);
    pos = comma + 1;
  }
  return out;
}

PriorSpec parse_prior(const std::string& s) {
  try {
    if (s == "noninformative") return NonInformative{};
    if (s == "jeffreys") return Jeffreys{};
    if (s.rfind("gamma:", 0) == 0) {
      const auto v = split_numbers(s.substr(6));
      if (v.size() != 2) throw std::invalid_argument(s);
      return ProperGamma{v[0], v[1]};
    }
    if (s.rfind("power:", 0) == 0) {
      const auto v = split_numbers(s.substr(6));
      if (v.size() != 3) throw std::invalid_argument(s);
      if (v[0] < 0.0 || v[0] != std::floor(v[0])) {
        throw std::domain_error("prior 'power:': historical count x0 must be "
                                "a non-negative integer");
      }
      return ConditionalPower{{static_cast<std::int64_t>(v[0]), v[1]}, v[2]};
    }
  } catch (const std::domain_error&) {
    throw;
  } catch (const std::exception&) {
    // fall through to the usage message
  }
  throw std::domain_error(
      "unrecognized prior '" + s +
      "' (expected noninformative | jeffreys | gamma:ALPHA,BETA | "
      "power:X0,M,A)");
}

std::uint64_t parse_seed_string(const std::string& s, const char* origin) {
  char* end = nullptr;
  errno = 0;
  const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (errno != 0 || end == s.c_str() || *end != '\0' || s.front() == '-') {
    throw std::domain_error(std::string(origin) + " must be an unsigned "
                            "64-bit integer, got '" + s + "'");
  }
  return v;
}

json expressions_to_json(const ExpressionValues& values) {
  json j = json::object();
  for (Expression e : kAllExpressions) {
    const auto& v = values[static_cast<std::size_t>(e)];
    j[expression_name(e)] = v ? json(*v) : json(nullptr);
  }
  return j;
}

void print_expressions_plain(std::ostream& out, const ExpressionValues& values) {
  for (Expression e : kAllExpressions) {
    const auto& v = values[static_cast<std::size_t>(e)];
    char line[80];
    std::snprintf(line, sizeof line, "  %-19s %s", expression_name(e),
                  v ? fmt(*v).c_str() : "n/a");
    out << line << "\n";
  }
}

std::string expressions_csv_cells(const ExpressionValues& values) {
  std::string row;
  for (Expression e : kAllExpressions) {
    const auto& v = values[static_cast<std::size_t>(e)];
    row += ',';
    if (v) row += fmt(*v);
  }
  return row;
}

// ---------------------------------------------------------------------------
// index

struct IndexArgs {
  std::int64_t k1 = 0;
  std::int64_t k2 = 0;
  double n1 = 1.0;
  double n2 = 1.0;
  std::string prior = "noninformative";
  std::string prior1;
  std::string prior2;
  std::string direction = "less";
  double ratio = 1.0;
  std::string format = "plain";
};

int cmd_index(const IndexArgs& a, std::ostream& out, std::ostream& err) {
  const Observation o1{a.k1, a.n1};
  const Observation o2{a.k2, a.n2};
  const PriorSpec p1 =
      parse_prior(a.prior1.empty() ? a.prior : a.prior1);
  const PriorSpec p2 =
      parse_prior(a.prior2.empty() ? a.prior : a.prior2);
  const GammaPosterior post1 = posterior(p1, o1);
  const GammaPosterior post2 = posterior(p2, o2);
  const ComparisonQuery query{parse_direction(a.direction), a.ratio};
  const IndexReport report = index(post1, post2, query);

  if (report.max_disagreement > kDisagreementWarnThreshold) {
    err << "warning: expression disagreement " << fmt(report.max_disagreement)
        << " exceeds " << fmt(kDisagreementWarnThreshold) << "\n";
  }

  switch (parse_format(a.format)) {
    case Format::as_json: {
      json j;
      j["posterior1"] = {{"shape", post1.shape}, {"rate", post1.rate}};
      j["posterior2"] = {{"shape", post2.shape}, {"rate", post2.rate}};
      j["direction"] = a.direction;
      j["threshold"] = a.ratio;
      j["theta"] = report.theta;
      j["by_expression"] = expressions_to_json(report.by_expression);
      j["max_disagreement"] = report.max_disagreement;
      out << j.dump(2) << "\n";
      break;
    }
    case Format::csv: {
      out << "theta,inc_beta,f_dist,binomial_sum,neg_binomial_sum,"
             "hypergeometric_2f1,max_disagreement\n";
      out << fmt(report.theta) << expressions_csv_cells(report.by_expression)
          << ',' << fmt(report.max_disagreement) << "\n";
      break;
    }
    case Format::plain: {
      out << "posterior1 = Ga(shape=" << fmt_short(post1.shape)
          << ", rate=" << fmt_short(post1.rate) << ")\n";
      out << "posterior2 = Ga(shape=" << fmt_short(post2.shape)
          << ", rate=" << fmt_short(post2.rate) << ")\n";
      out << "query: P(lambda1/lambda2 "
          << (query.direction == Direction::Less ? '<' : '>') << " "
          << fmt_short(a.ratio) << " | data)\n";
      out << "theta = " << fmt(report.theta) << "\n";
      print_expressions_plain(out, report.by_expression);
      out << "max_disagreement = " << fmt(report.max_disagreement) << "\n";
      break;
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------
// pvalue

struct PvalueArgs {
  std::int64_t k1 = 0;
  std::int64_t k2 = 0;
  double n1 = 1.0;
  double n2 = 1.0;
  std::string direction = "less";
  double ratio = 1.0;
  std::string format = "plain";
  bool expressions = false;
};

int cmd_pvalue(const PvalueArgs& a, std::ostream& out) {
  const Observation o1{a.k1, a.n1};
  const Observation o2{a.k2, a.n2};
  const ComparisonQuery query{parse_direction(a.direction), a.ratio};
  const TestResult result = p_value(o1, o2, query);
  std::optional<ExpressionValues> exprs;
  if (a.expressions) exprs = p_value_expressions(o1, o2, query);

  switch (parse_format(a.format)) {
    case Format::as_json: {
      json j;
      j["p_value"] = result.p_value;
      j["conditioning_total"] = result.conditioning_total;
      j["success_prob"] = result.success_prob;
      j["direction"] = a.direction;
      j["threshold"] = a.ratio;
      if (exprs) j["expressions"] = expressions_to_json(*exprs);
      out << j.dump(2) << "\n";
      break;
    }
    case Format::csv: {
      out << "p_value,conditioning_total,success_prob";
      if (exprs) {
        for (Expression e : kAllExpressions) out << ',' << expression_name(e);
      }
      out << "\n"
          << fmt(result.p_value) << ',' << result.conditioning_total << ','
          << fmt(result.success_prob);
      if (exprs) out << expressions_csv_cells(*exprs);
      out << "\n";
      break;
    }
    case Format::plain: {
      out << "p_value = " << fmt(result.p_value) << "\n";
      out << "conditioning_total = " << result.conditioning_total << "\n";
      out << "success_prob = " << fmt(result.success_prob) << "\n";
      if (exprs) {
        out << "expressions:\n";
        print_expressions_plain(out, *exprs);
      }
      break;
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------
// duality

struct DualityArgs {
  std::int64_t k1 = 0;
  std::int64_t k2 = 0;
  double n1 = 1.0;
  double n2 = 1.0;
  double ratio = 1.0;
  std::string format = "plain";
};

int cmd_duality(const DualityArgs& a, std::ostream& out) {
  const DualityRecord rec =
      check_duality({a.k1, a.n1}, {a.k2, a.n2}, a.ratio);
  switch (parse_format(a.format)) {
    case Format::as_json: {
      json j;
      j["theta_shifted"] = rec.theta_shifted;
      j["one_minus_p"] = rec.one_minus_p;
      j["gap"] = rec.gap;
      out << j.dump(2) << "\n";
      break;
    }
    case Format::csv:
      out << "theta_shifted,one_minus_p,gap\n"
          << fmt(rec.theta_shifted) << ',' << fmt(rec.one_minus_p) << ','
          << fmt(rec.gap) << "\n";
      break;
    case Format::plain:
      out << "theta_shifted = " << fmt(rec.theta_shifted) << "\n"
          << "one_minus_p = " << fmt(rec.one_minus_p) << "\n"
          << "gap = " << fmt(rec.gap) << "\n";
      break;
  }
  return 0;
}

// ---------------------------------------------------------------------------
// tables: built-in worked examples with their published reference values

struct TableRow {
  std::string study;
  std::string quantity;
  double published;
  double computed;
};

std::vector<TableRow> compute_table_rows() {
  std::vector<TableRow> rows;

  // breast cancer incidence: exposed 41 events / 28010 person-years,
  // control 15 / 19017; reported one-sided p and P(rate1 > rate2)
  const Observation bc1{41, 28010.0};
  const Observation bc2{15, 19017.0};
  for (const auto& [label, c, pub_p, pub_non, pub_jef] :
       {std::tuple{"breast-cancer c=1", 1.0, 0.024, 0.985, 0.983},
        std::tuple{"breast-cancer c=1.5", 1.5, 0.291, 0.776, 0.757}}) {
    const ComparisonQuery query{Direction::Greater, c};
    rows.push_back({label, "p-value",
                    pub_p, p_value(bc1, bc2, query).p_value});
    rows.push_back({label, "theta noninformative", pub_non,
                    index(posterior(NonInformative{}, bc1),
                          posterior(NonInformative{}, bc2), query)
                        .theta});
    rows.push_back({label, "theta jeffreys", pub_jef,
                    index(posterior(Jeffreys{}, bc1),
                          posterior(Jeffreys{}, bc2), query)
                        .theta});
  }

  // hypertension trials: current 54/5635 vs 70/5600, historical 47/5135 vs
  // 63/4960; reported one-sided p and P(rate1 < rate2) with power priors
  // of shared weight on both arms
  const Observation ht1{54, 5635.0};
  const Observation ht2{70, 5600.0};
  const Observation hist1{47, 5135.0};
  const Observation hist2{63, 4960.0};
  const ComparisonQuery less1{Direction::Less, 1.0};
  rows.push_back({"hypertension c=1", "p-value", 0.083,
                  p_value(ht1, ht2, less1).p_value});
  rows.push_back({"hypertension c=1", "theta noninformative", 0.930,
                  index(posterior(NonInformative{}, ht1),
                        posterior(NonInformative{}, ht2), less1)
                      .theta});
  for (const auto& [weight, published] :
       {std::pair{0.1, 0.942}, std::pair{0.5, 0.971}, std::pair{1.0, 0.988}}) {
    char q[40];
    std::snprintf(q, sizeof q, "theta power a=%.1f", weight);
    rows.push_back({"hypertension c=1", q, published,
                    index(posterior(ConditionalPower{hist1, weight}, ht1),
                          posterior(ConditionalPower{hist2, weight}, ht2),
                          less1)
                        .theta});
  }
  return rows;
}

int cmd_tables(const std::string& format, std::ostream& out) {
  const auto rows = compute_table_rows();
  double max_gap = 0.0;
  for (const auto& r : rows) {
    max_gap = std::max(max_gap, std::abs(r.computed - r.published));
  }
  const bool pass = max_gap <= kTableTolerance;

  switch (parse_format(format)) {
    case Format::as_json: {
      json jrows = json::array();
      for (const auto& r : rows) {
        jrows.push_back({{"study", r.study},
                         {"quantity", r.quantity},
                         {"published", r.published},
                         {"computed", r.computed},
                         {"gap", std::abs(r.computed - r.published)}});
      }
      json j;
      j["rows"] = jrows;
      j["max_gap"] = max_gap;
      j["tolerance"] = kTableTolerance;
      j["pass"] = pass;
      out << j.dump(2) << "\n";
      break;
    }
    case Format::csv: {
      out << "study,quantity,published,computed,gap\n";
      for (const auto& r : rows) {
        out << r.study << ',' << r.quantity << ',' << fmt(r.published) << ','
            << fmt(r.computed) << ',' << fmt(std::abs(r.computed - r.published))
            << "\n";
      }
      break;
    }
    case Format::plain: {
      char line[160];
      std::snprintf(line, sizeof line, "%-22s %-22s %10s %12s %10s",
                    "study", "quantity", "published", "computed", "|gap|");
      out << line << "\n";
      for (const auto& r : rows) {
        std::snprintf(line, sizeof line, "%-22s %-22s %10.3f %12.6f %10.2e",
                      r.study.c_str(), r.quantity.c_str(), r.published,
                      r.computed, std::abs(r.computed - r.published));
        out << line << "\n";
      }
      out << "max gap = " << fmt_short(max_gap) << " (tolerance "
          << fmt_short(kTableTolerance) << "): "
          << (pass ? "PASS" : "FAIL") << "\n";
      break;
    }
  }
  return pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// figures

struct FiguresArgs {
  double n1 = 0.0;
  double n2 = 0.0;
  bool n1_given = false;
  bool n2_given = false;
  double ratio = 1.0;
  std::string out_dir = ".";
};

int cmd_figures(const FiguresArgs& a, std::ostream& out) {
  std::vector<std::pair<double, double>> grids;
  if (a.n1_given || a.n2_given) {
    if (!(a.n1_given && a.n2_given)) {
      throw std::domain_error("figures: --n1 and --n2 must be given together");
    }
    grids.push_back({a.n1, a.n2});
  } else {
    grids = {{10, 10}, {20, 20}, {50, 50}, {100, 100}};
  }

  std::error_code ec;
  fs::create_directories(a.out_dir, ec);
  if (ec) {
    throw std::runtime_error("figures: cannot create directory '" + a.out_dir +
                             "': " + ec.message());
  }

  for (const auto& [n1, n2] : grids) {
    const auto records = grid_compare(n1, n2, a.ratio);
    char name[80];
    std::snprintf(name, sizeof name, "figures_n1-%g_n2-%g.csv", n1, n2);
    const fs::path path = fs::path(a.out_dir) / name;
    std::ofstream file(path);
    if (!file) {
      throw std::runtime_error("figures: cannot open '" + path.string() +
                               "' for writing");
    }
    file << "k1,k2,rate_diff,theta,one_minus_p,theta_shifted\n";
    for (const auto& r : records) {
      file << r.k1 << ',' << r.k2 << ',' << fmt(r.rate_diff) << ','
           << fmt(r.theta) << ',' << fmt(r.one_minus_p) << ','
           << fmt(r.theta_shifted) << "\n";
    }
    file.flush();
    if (!file) {
      throw std::runtime_error("figures: write failed for '" + path.string() +
                               "'");
    }
    out << "wrote " << path.string() << " (" << records.size() << " rows)\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// selftest

struct SelftestArgs {
  std::uint64_t draws = 1'000'000;
  std::string seed;  // empty = env or default
  std::size_t sets = 20;
  bool perturb = false;
};

std::uint64_t resolve_seed(const std::string& flag_value) {
  if (!flag_value.empty()) return parse_seed_string(flag_value, "--seed");
  if (const char* env = std::getenv("POISSON_SUP_SEED")) {
    return parse_seed_string(env, "POISSON_SUP_SEED");
  }
  return kDefaultMcSeed;
}

int cmd_selftest(const SelftestArgs& a, std::ostream& out) {
  const std::uint64_t seed = resolve_seed(a.seed);
  // perturbation is a negative-control hook: it nudges theta_shifted so the
  // duality suite must fail
  const double perturbation = a.perturb ? 1e-9 : 0.0;

  std::vector<SuiteResult> results;
  results.push_back(expression_agreement_suite(
      20, {1.0, 10.0, 28010.0, 19017.0}, {0.5, 1.0, 1.5, 2.0}, 1e-10));
  results.push_back(duality_suite(40, 40,
                                  {{1.0, 1.0},
                                   {10.0, 10.0},
                                   {10.0, 20.0},
                                   {28010.0, 19017.0}},
                                  {0.5, 1.0, 1.5, 2.0}, 1e-12, perturbation));
  results.push_back(dominance_suite(10.0, 10.0, 1.0));
  results.push_back(beta_symmetry_suite(1000, seed, 1e-13));
  results.push_back(mc_concordance_suite(a.sets, a.draws, seed, 4.0, 1));

  std::size_t passed = 0;
  for (const auto& r : results) {
    passed += r.pass;
    out << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << ": cases=" << r.cases
        << " worst=" << fmt_short(r.worst) << " bound=" << fmt_short(r.bound);
    if (!r.detail.empty()) out << " (" << r.detail << ")";
    out << "\n";
  }
  out << passed << "/" << results.size() << " suites passed (seed=" << seed
      << ", draws=" << a.draws << ")\n";
  return passed == results.size() ? 0 : 1;
}

}  // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"exact inference for comparing two Poisson rates"};
  app.require_subcommand(1);

  IndexArgs index_args;
  auto* c_index = app.add_subcommand(
      "index", "Bayesian superiority index P(lambda1/lambda2 < c | data)");
  c_index->add_option("--k1", index_args.k1, "events in arm 1")->required();
  c_index->add_option("--n1", index_args.n1, "exposure of arm 1")->required();
  c_index->add_option("--k2", index_args.k2, "events in arm 2")->required();
  c_index->add_option("--n2", index_args.n2, "exposure of arm 2")->required();
  c_index->add_option("--prior", index_args.prior,
                      "prior for both arms: noninformative | jeffreys | "
                      "gamma:ALPHA,BETA | power:X0,M,A");
  c_index->add_option("--prior1", index_args.prior1,
                      "override prior for arm 1");
  c_index->add_option("--prior2", index_args.prior2,
                      "override prior for arm 2");
  c_index->add_option("--direction", index_args.direction, "less | greater");
  c_index->add_option("--ratio", index_args.ratio,
                      "rate-ratio threshold c (default 1)");
  c_index->add_option("--format", index_args.format, "plain | json | csv");

  PvalueArgs pvalue_args;
  auto* c_pvalue = app.add_subcommand(
      "pvalue", "one-sided conditional exact test p-value");
  c_pvalue->add_option("--k1", pvalue_args.k1, "events in arm 1")->required();
  c_pvalue->add_option("--n1", pvalue_args.n1, "exposure of arm 1")->required();
  c_pvalue->add_option("--k2", pvalue_args.k2, "events in arm 2")->required();
  c_pvalue->add_option("--n2", pvalue_args.n2, "exposure of arm 2")->required();
  c_pvalue->add_option("--direction", pvalue_args.direction, "less | greater");
  c_pvalue->add_option("--ratio", pvalue_args.ratio,
                       "rate-ratio threshold c (default 1)");
  c_pvalue->add_option("--format", pvalue_args.format, "plain | json | csv");
  c_pvalue->add_flag("--expressions", pvalue_args.expressions,
                     "also print every applicable closed form");

  DualityArgs duality_args;
  auto* c_duality = app.add_subcommand(
      "duality", "compare theta at (k1+1, k2) with 1-p at (k1, k2)");
  c_duality->add_option("--k1", duality_args.k1, "events in arm 1")->required();
  c_duality->add_option("--n1", duality_args.n1, "exposure of arm 1")
      ->required();
  c_duality->add_option("--k2", duality_args.k2, "events in arm 2")->required();
  c_duality->add_option("--n2", duality_args.n2, "exposure of arm 2")
      ->required();
  c_duality->add_option("--ratio", duality_args.ratio,
                        "rate-ratio threshold c (default 1)");
  c_duality->add_option("--format", duality_args.format, "plain | json | csv");

  std::string tables_format = "plain";
  auto* c_tables = app.add_subcommand(
      "tables", "recompute the built-in worked examples against their "
                "published values");
  c_tables->add_option("--format", tables_format, "plain | json | csv");

  FiguresArgs figures_args;
  auto* c_figures = app.add_subcommand(
      "figures", "emit comparison-grid CSV files (theta vs 1-p)");
  auto* opt_fn1 = c_figures->add_option("--n1", figures_args.n1,
                                        "exposure of arm 1 (>= 1)");
  auto* opt_fn2 = c_figures->add_option("--n2", figures_args.n2,
                                        "exposure of arm 2 (>= 1)");
  c_figures->add_option("--ratio", figures_args.ratio,
                        "rate-ratio threshold c (default 1)");
  c_figures->add_option("--out", figures_args.out_dir,
                        "output directory (default .)");

  SelftestArgs selftest_args;
  auto* c_selftest = app.add_subcommand(
      "selftest", "run the numerical identity and Monte Carlo suites");
  c_selftest->add_option("--draws", selftest_args.draws,
                         "Monte Carlo draws per parameter set");
  c_selftest->add_option("--seed", selftest_args.seed,
                         "Monte Carlo seed (overrides POISSON_SUP_SEED)");
  c_selftest->add_option("--sets", selftest_args.sets,
                         "number of random parameter sets");
  c_selftest->add_flag("--perturb", selftest_args.perturb,
                       "test hook: inject an error so the duality suite fails");

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(c_index)) return cmd_index(index_args, out, err);
    if (app.got_subcommand(c_pvalue)) return cmd_pvalue(pvalue_args, out);
    if (app.got_subcommand(c_duality)) return cmd_duality(duality_args, out);
    if (app.got_subcommand(c_tables)) return cmd_tables(tables_format, out);
    if (app.got_subcommand(c_figures)) {
      figures_args.n1_given = opt_fn1->count() > 0;
      figures_args.n2_given = opt_fn2->count() > 0;
      return cmd_figures(figures_args, out);
    }
    if (app.got_subcommand(c_selftest)) return cmd_selftest(selftest_args, out);
    err << "error: no subcommand\n";
    return 2;
  } catch (const GridCapacityError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace psup::cli
