#include <cmath>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "gbelab/harness.hpp"

using namespace gbelab;

namespace {

ExperimentSpec small_spec() {
  ExperimentSpec s;
  s.kind = ExperimentKind::clt_fixed_beta;
  s.n_list = {30, 60};
  s.beta_rule = BetaRule::fixed(1.0);
  s.test_function = TestFunctionSpec::monomial(2);
  s.replicates = 300;
  s.seed = 99;
  return s;
}

}  // namespace

TEST(ExperimentSpec, Validation) {
  auto s = small_spec();
  EXPECT_NO_THROW(s.validate());
  s.replicates = 1;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = small_spec();
  s.n_list.clear();
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = small_spec();
  s.beta_rule = BetaRule::fixed(0.0);
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = small_spec();
  s.alpha = -1.0;
  EXPECT_THROW(s.validate(), std::invalid_argument);
}

TEST(BetaRule, Values) {
  EXPECT_EQ(BetaRule::fixed(2.5).beta_for(100), 2.5);
  EXPECT_EQ(BetaRule::nbeta_fixed(2.0).beta_for(1000), 0.002);
  EXPECT_NEAR(BetaRule::nbeta_growth(0.5).beta_for(400), 0.05, 1e-15);
  EXPECT_NEAR(BetaRule::nbeta_growth(1.0).beta_for(77), 1.0, 1e-15);
}

TEST(TestFunctionSpec, ParseAndResolve) {
  EXPECT_EQ(TestFunctionSpec::parse("monomial:3").resolve().poly, Polynomial::monomial(3));
  EXPECT_EQ(TestFunctionSpec::parse("poly:1,0,2").describe(), "poly:1,0,2");
  EXPECT_FALSE(TestFunctionSpec::parse("named:exp").resolve().poly);
  EXPECT_THROW(TestFunctionSpec::parse("exp"), std::invalid_argument);
  EXPECT_THROW(TestFunctionSpec::parse("spline:1"), std::invalid_argument);
  EXPECT_THROW(TestFunctionSpec::parse("named:nope").resolve(), std::invalid_argument);
}

TEST(RunExperiment, BudgetGuard) {
  auto s = small_spec();
  s.n_list = {100000};
  s.replicates = 2000;
  s.route = StatisticRoute::eigenvalues;
  EXPECT_THROW(run_experiment(s), BudgetError);
}

TEST(RunExperiment, TraceRouteNeedsPolynomial) {
  auto s = small_spec();
  s.test_function = TestFunctionSpec::named("exp");
  s.route = StatisticRoute::trace;
  EXPECT_THROW(run_experiment(s), std::invalid_argument);
}

TEST(RunExperiment, ReproducibleJson) {
  const auto a = result_to_json(run_experiment(small_spec()), false).dump();
  const auto b = result_to_json(run_experiment(small_spec()), false).dump();
  EXPECT_EQ(a, b);
  auto other = small_spec();
  other.seed = 100;
  EXPECT_NE(result_to_json(run_experiment(other), false).dump(), a);
}

TEST(RunExperiment, RoutesAgree) {
  auto s = small_spec();
  s.route = StatisticRoute::eigenvalues;
  const auto eig = run_experiment(s);
  s.route = StatisticRoute::trace;
  const auto tr = run_experiment(s);
  EXPECT_EQ(eig.route, "eigen");
  EXPECT_EQ(tr.route, "trace");
  for (std::size_t i = 0; i < eig.per_size.size(); ++i) {
    ASSERT_EQ(eig.per_size[i].standardized.size(), tr.per_size[i].standardized.size());
    for (std::size_t k = 0; k < eig.per_size[i].standardized.size(); ++k) {
      EXPECT_NEAR(eig.per_size[i].standardized[k], tr.per_size[i].standardized[k], 1e-9);
    }
  }
}

TEST(RunExperiment, JsonFields) {
  const auto j = result_to_json(run_experiment(small_spec()));
  for (const char* key : {"spec", "per_size", "version", "seed", "wall_time_s"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  const auto& e = j["per_size"][0];
  for (const char* key : {"n", "beta", "mean", "var", "skew", "ex_kurt", "ks_normal", "exact_sigma",
                          "reps", "failures"}) {
    EXPECT_TRUE(e.contains(key)) << key;
  }
  EXPECT_EQ(e["reps"], 300);
  EXPECT_EQ(e["failures"], 0);
  EXPECT_EQ(e["exact_sigma"], 4.0);
  EXPECT_EQ(j["spec"]["kind"], "clt-fixed-beta");
  EXPECT_EQ(j["seed"], 99);
}

TEST(RunExperiment, SamplesCsv) {
  auto s = small_spec();
  s.n_list = {10};
  s.replicates = 3;
  std::ostringstream os;
  write_samples_csv(run_experiment(s), os);
  const std::string text = os.str();
  EXPECT_EQ(text.rfind("n,beta,replicate,value\n", 0), 0u);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 4);
}

TEST(RunExperiment, NamedFunctionIsSelfCentered) {
  auto s = small_spec();
  s.test_function = TestFunctionSpec::named("exp");
  const auto r = run_experiment(s);
  for (const auto& p : r.per_size) {
    EXPECT_TRUE(p.self_centered);
    EXPECT_FALSE(p.exact_sigma);
    EXPECT_FALSE(p.exact_variance);
  }
}

// Variance of <L_n, p> against the exact value, within 5 standard errors.
TEST(RunExperiment, EmpiricalVarianceMatchesExact) {
  for (const char* coeffs : {"0,1", "0,0,1", "1,-1,0,1"}) {
    ExperimentSpec s;
    s.kind = ExperimentKind::variance_scan;
    s.n_list = {40, 80};
    s.beta_rule = BetaRule::fixed(0.5);
    s.test_function = TestFunctionSpec::polynomial(coeffs);
    s.replicates = 20000;
    s.seed = 3;
    for (const auto& p : run_experiment(s).per_size) {
      ASSERT_TRUE(p.exact_variance);
      EXPECT_LE(std::abs(p.var - *p.exact_variance), 5.0 * p.var_standard_error) << coeffs;
    }
  }
}

TEST(RunExperiment, CltFixedBetaExample) {
  ExperimentSpec s;
  s.n_list = {200};
  s.beta_rule = BetaRule::fixed(1.0);
  s.test_function = TestFunctionSpec::monomial(2);
  s.replicates = 10000;
  s.seed = 2024;
  const auto p = run_experiment(s).per_size[0];
  EXPECT_NEAR(p.var, 4.0, 0.05 * 4.0);
  EXPECT_LT(std::abs(p.skew), 0.1);
  EXPECT_LT(std::abs(p.ex_kurt), 0.2);
}

TEST(RunExperiment, SemicircleLawExample) {
  ExperimentSpec s;
  s.kind = ExperimentKind::semicircle_law;
  s.n_list = {2000};
  s.beta_rule = BetaRule::fixed(1.0);
  s.test_function = TestFunctionSpec::monomial(2);
  s.replicates = 50;
  s.seed = 8;
  const auto p = run_experiment(s).per_size[0];
  ASSERT_EQ(p.spectral_moments.size(), 6u);
  for (unsigned r = 2; r <= 6; r += 2) {
    const double c = semicircle_moment(r).get_d();
    EXPECT_NEAR(p.spectral_moments[r - 1], c, 0.02 * c) << r;
  }
  ASSERT_TRUE(p.semicircle_ks);
  EXPECT_LT(*p.semicircle_ks, 0.05);
}

TEST(RunExperiment, AlphaRegimeExample) {
  ExperimentSpec s;
  s.kind = ExperimentKind::alpha_regime;
  s.n_list = {1000};
  s.beta_rule = BetaRule::nbeta_fixed(2.0);
  s.test_function = TestFunctionSpec::monomial(2);
  s.replicates = 10000;
  s.seed = 9;
  const auto p = run_experiment(s).per_size[0];
  EXPECT_NEAR(p.mean, 2.0, 0.02 * 2.0);
  ASSERT_TRUE(p.exact_sigma_alpha);
  EXPECT_EQ(*p.exact_sigma_alpha, 8.0);
}

TEST(Config, ParsesKeyValueText) {
  const auto kv = parse_config_text(
      "# comment\n"
      "kind = alpha-regime\n"
      "  n_list = 100, 200  # trailing\n"
      "nbeta = 2\n"
      "test_function = poly:0,0,1\n"
      "\n"
      "replicates = 500\n"
      "seed=7\n");
  ExperimentSpec s;
  apply_config(s, kv);
  EXPECT_EQ(s.kind, ExperimentKind::alpha_regime);
  EXPECT_EQ(s.n_list, (std::vector<std::size_t>{100, 200}));
  EXPECT_EQ(s.beta_rule.type, BetaRule::Type::nbeta_fixed);
  EXPECT_EQ(s.beta_rule.value, 2.0);
  EXPECT_EQ(s.test_function.describe(), "poly:0,0,1");
  EXPECT_EQ(s.replicates, 500u);
  EXPECT_EQ(s.seed, 7u);
}

TEST(Config, RejectsMalformedInput) {
  EXPECT_THROW(parse_config_text("just words\n"), std::invalid_argument);
  ExperimentSpec s;
  EXPECT_THROW(apply_config(s, parse_config_text("colour = red\n")), std::invalid_argument);
  EXPECT_THROW(apply_config(s, parse_config_text("kind = nope\n")), std::invalid_argument);
  EXPECT_THROW(parse_size_list(" , "), std::invalid_argument);
  EXPECT_THROW(read_config_file("/nonexistent/config"), std::runtime_error);
}

TEST(Names, KindsAndRoutesRoundTrip) {
  for (auto k : {ExperimentKind::semicircle_law, ExperimentKind::clt_fixed_beta,
                 ExperimentKind::clt_growing_nbeta, ExperimentKind::alpha_regime,
                 ExperimentKind::variance_scan, ExperimentKind::martingale_check}) {
    EXPECT_EQ(parse_experiment_kind(to_string(k)), k);
  }
  for (auto r : {StatisticRoute::automatic, StatisticRoute::eigenvalues, StatisticRoute::trace}) {
    EXPECT_EQ(parse_statistic_route(to_string(r)), r);
  }
}
