#include "confset/dataset_io.hpp"
#include "confset/distgen.hpp"
#include "confset/metrics.hpp"
#include "confset/rules.hpp"
#include "confset/serialize.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

namespace confset {
namespace {

// A fixed "model" whose scores equal its single input row: the oracle posterior of a
// K = 3 mixture is replaced by explicit score rows through sets_from_scores.
std::shared_ptr<const ProbModel> mixture_model(int k = 3, int d = 2, std::uint64_t seed = 1) {
  return std::make_shared<const ProbModel>(make_oracle_model(Distribution(sample_mixture_spec(k, d, seed))));
}

ScoreMatrix one_row(std::initializer_list<double> v) {
  Eigen::MatrixXd m(1, static_cast<Index>(v.size()));
  Index j = 0;
  for (double x : v) m(0, j++) = x;
  return ScoreMatrix(m);
}

TEST(TopBeta, Examples) {
  const auto model = mixture_model();
  EXPECT_EQ(fit_top_beta(model, 2).sets_from_scores(one_row({0.5, 0.3, 0.2}))[0], ConfidenceSet(3, {1, 2}));
  EXPECT_EQ(fit_top_beta(model, 3).sets_from_scores(one_row({0.5, 0.3, 0.2}))[0], ConfidenceSet::full(3));
  EXPECT_EQ(fit_top_beta(model, 1).sets_from_scores(one_row({0.4, 0.4, 0.2}))[0], ConfidenceSet(3, {1}));
  EXPECT_EQ(fit_top_beta(model, 2).sets_from_scores(one_row({0.1, 0.3, 0.3}))[0], ConfidenceSet(3, {2, 3}));
}

TEST(TopBeta, BetaRange) {
  const auto model = mixture_model();
  EXPECT_THROW(fit_top_beta(model, 0), std::invalid_argument);
  EXPECT_THROW(fit_top_beta(model, 4), std::invalid_argument);
  EXPECT_FALSE(fit_top_beta(model, 2).threshold().has_value());
}

TEST(TopBetaPropertyTest, CardinalityAlwaysBeta) {
  Rng rng(1);
  const auto model = mixture_model(6, 2);
  const Eigen::MatrixXd x = testing::random_features(rng, 500, 2, 3.0).array() + 2.0;
  for (int beta = 1; beta <= 6; ++beta)
    for (const auto& s : fit_top_beta(model, beta).predict_sets(x)) ASSERT_EQ(s.cardinality(), beta);
}

TEST(TopBetaPropertyTest, MatchesSortOracleWithTies) {
  Rng rng(2);
  for (int trial = 0; trial < 500; ++trial) {
    const int k = 2 + static_cast<int>(rng.below(8));
    const int beta = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(k)));
    const Eigen::RowVectorXd s = testing::random_grid_scores(rng, 1, k, 3);
    std::vector<int> idx(static_cast<std::size_t>(k));
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return s(a) > s(b); });
    ConfidenceSet expected(k);
    for (int j = 0; j < beta; ++j) expected.insert(idx[static_cast<std::size_t>(j)] + 1);
    ASSERT_EQ(top_beta_set(s, beta), expected);
  }
}

TEST(ThresholdRule, PredictExamples) {
  const auto model = mixture_model();
  EXPECT_EQ(ConfidenceRule::thresholded(model, 1, Threshold(0.0)).sets_from_scores(one_row({0.0, 0.3, 0.7}))[0],
            ConfidenceSet::full(3));
  EXPECT_TRUE(ConfidenceRule::thresholded(model, 1, Threshold(0.71)).sets_from_scores(one_row({0.0, 0.3, 0.7}))[0].empty());
  EXPECT_EQ(ConfidenceRule::thresholded(model, 1, Threshold(0.30)).sets_from_scores(one_row({0.30, 0.50, 0.20}))[0],
            ConfidenceSet(3, {1, 2}));
}

TEST(ThresholdRule, PredictSetDimensionChecked) {
  const auto rule = ConfidenceRule::thresholded(mixture_model(), 1, Threshold(0.2));
  EXPECT_NO_THROW(predict_set(rule, Eigen::Vector2d(1.0, 1.0)));
  EXPECT_THROW(predict_set(rule, Eigen::Vector3d(1.0, 1.0, 1.0)), std::invalid_argument);
}

TEST(ThresholdRule, ThresholdZeroReturnsFullSetForRealModel) {
  Rng rng(3);
  const auto rule = ConfidenceRule::thresholded(mixture_model(4, 2), 1, Threshold(0.0));
  for (const auto& s : rule.predict_sets(testing::random_features(rng, 100, 2, 30.0))) ASSERT_EQ(s.cardinality(), 4);
}

TEST(FitSupervised, TwoPointSplit) {
  Eigen::MatrixXd x(2, 2);
  x << 0.5, 0.5, 3.0, 1.0;
  const LabeledDataset train(x, {1, 2}, 2);
  const Distribution dist(sample_mixture_spec(2, 2, 4));
  FitConfig cfg;
  cfg.beta = 1;
  cfg.estimator = OracleEstimator{dist};
  cfg.seed = 11;
  const ConfidenceRule rule = fit_supervised(train, cfg);
  const ScoreMatrix held_out = perturb_scores(make_oracle_model(dist).predict(x.bottomRows(1)), cfg.noise_std, cfg.seed);
  const double t = rule.threshold()->value();
  EXPECT_TRUE(t == held_out(0, 0) || t == held_out(0, 1));
  EXPECT_EQ(t, testing::brute_inverse(held_out.values(), 1.0));
}

TEST(FitSupervised, Preconditions) {
  const Distribution dist(sample_mixture_spec(3, 2, 4));
  FitConfig cfg;
  cfg.beta = 1;
  EXPECT_THROW(fit_supervised(dist.sample_labeled(1, 1), cfg), std::invalid_argument);
  cfg.beta = 3;
  EXPECT_THROW(fit_supervised(dist.sample_labeled(10, 1), cfg), std::invalid_argument);
  cfg.beta = 0;
  EXPECT_THROW(fit_supervised(dist.sample_labeled(10, 1), cfg), std::invalid_argument);
}

// The posterior of a low-dimensional mixture overlaps enough that theta* is far above the
// perturbation scale; on the K = 10, d = 10 benchmark mixture theta* is itself of order
// noise_std and the threshold of the perturbed pool sits about one noise_std higher.
TEST(FitSupervised, OracleModelMatchesMcThreshold) {
  const Distribution dist(sample_mixture_spec(5, 2, 5));
  FitConfig cfg;
  cfg.beta = 2;
  cfg.estimator = OracleEstimator{dist};
  const ConfidenceRule rule = fit_supervised(dist.sample_labeled(400'000, 2), cfg);
  EXPECT_NEAR(rule.threshold()->value(), mc_true_threshold(dist, 2, 1'000'000, 3).value(), 0.01);
}

TEST(FitSupervised, ByteIdenticalForIdenticalInputs) {
  const Distribution dist(sample_mixture_spec(4, 3, 6));
  const LabeledDataset train = dist.sample_labeled(300, 1);
  FitConfig cfg;
  cfg.beta = 2;
  cfg.estimator = SoftmaxEstimator{{1e-3, 200, 0.5}};
  cfg.seed = 99;
  EXPECT_EQ(to_json(fit_supervised(train, cfg)).dump(), to_json(fit_supervised(train, cfg)).dump());
}

TEST(FitSemiSupervised, EmptyPoolEqualsSupervised) {
  const Distribution dist(sample_mixture_spec(4, 3, 6));
  const LabeledDataset train = dist.sample_labeled(300, 1);
  for (const EstimatorConfig est : {EstimatorConfig{SoftmaxEstimator{{1e-3, 100, 0.5}}}, EstimatorConfig{KnnEstimator{}},
                                    EstimatorConfig{OracleEstimator{dist}}}) {
    FitConfig cfg;
    cfg.beta = 2;
    cfg.estimator = est;
    cfg.seed = 5;
    const UnlabeledDataset empty(Eigen::MatrixXd(0, 3), 3);
    EXPECT_EQ(to_json(fit_semi_supervised(train, empty, cfg)).dump(), to_json(fit_supervised(train, cfg)).dump());
  }
}

TEST(FitSemiSupervised, DimensionMismatch) {
  const Distribution dist(sample_mixture_spec(4, 3, 6));
  FitConfig cfg;
  cfg.beta = 2;
  cfg.estimator = KnnEstimator{};
  EXPECT_THROW(fit_semi_supervised(dist.sample_labeled(20, 1), UnlabeledDataset(Eigen::MatrixXd::Zero(5, 2)), cfg),
               std::invalid_argument);
}

TEST(FitSemiSupervised, OracleInformationWithTenThousandUnlabeled) {
  const Distribution dist(sample_mixture_spec(5, 2, 7));
  FitConfig cfg;
  cfg.beta = 2;
  cfg.estimator = OracleEstimator{dist};
  cfg.seed = 1;
  const ConfidenceRule rule = fit_semi_supervised(dist.sample_labeled(1000, 2), dist.sample_unlabeled(10'000, 3), cfg);
  EXPECT_NEAR(information(rule, dist.sample_unlabeled(100'000, 4)), 2.0, 0.05);
}

TEST(FitSemiSupervised, LargePoolMatchesMcThreshold) {
  const Distribution dist(sample_mixture_spec(5, 2, 8));
  FitConfig cfg;
  cfg.beta = 2;
  cfg.estimator = OracleEstimator{dist};
  cfg.seed = 2;
  const ConfidenceRule rule = fit_semi_supervised(dist.sample_labeled(1000, 1), dist.sample_unlabeled(1'000'000, 2), cfg);
  // the half-normal noise lifts every pooled score by about 0.8 noise_std
  const double gap = rule.threshold()->value() - mc_true_threshold(dist, 2, 1'000'000, 3).value();
  EXPECT_GT(gap, 0.0);
  EXPECT_LT(gap, 2.0 * kDefaultNoiseStd);
}

TEST(FitSemiSupervised, SensitiveToThePool) {
  const Distribution dist(sample_mixture_spec(4, 2, 9));
  const LabeledDataset train = dist.sample_labeled(40, 1);
  FitConfig cfg;
  cfg.beta = 1;
  cfg.estimator = OracleEstimator{dist};
  const Eigen::MatrixXd& means = std::get<MixtureSpec>(dist.variant()).means;
  // a pool piled on one mean (one score near 1 per row) versus one piled between two means
  const Eigen::RowVectorXd mu1 = means.row(0), mid = 0.5 * (means.row(0) + means.row(1));
  const UnlabeledDataset near(mu1.replicate(500, 1));
  const UnlabeledDataset between(mid.replicate(500, 1));
  EXPECT_NE(fit_semi_supervised(train, near, cfg).threshold(), fit_semi_supervised(train, between, cfg).threshold());
}

TEST(DefinitionTwo, SupervisedIgnoresAnyUnlabeledSet) {
  // fit_supervised never reads an unlabeled set, so the fitted rule is a function of
  // (train, cfg) alone: different pools drawn between two fits leave it byte-identical.
  const Distribution dist(sample_mixture_spec(5, 3, 10));
  const LabeledDataset train = dist.sample_labeled(200, 1);
  FitConfig cfg;
  cfg.beta = 2;
  cfg.estimator = KnnEstimator{};
  cfg.seed = 3;
  const UnlabeledDataset pool_a = dist.sample_unlabeled(1000, 2);
  const std::string a = to_json(fit_supervised(train, cfg)).dump();
  const UnlabeledDataset pool_b = dist.sample_unlabeled(50, 3);
  const std::string b = to_json(fit_supervised(train, cfg)).dump();
  EXPECT_EQ(a, b);
  EXPECT_NE(to_json(fit_semi_supervised(train, pool_a, cfg)).dump(), to_json(fit_semi_supervised(train, pool_b, cfg)).dump());
}

TEST(NestingInBetaPropertyTest, ThresholdsAndSetsMonotone) {
  Rng rng(4);
  const Distribution dist(sample_mixture_spec(6, 2, 11));
  const auto model = std::make_shared<const ProbModel>(make_oracle_model(dist));
  const Eigen::MatrixXd pool = dist.sample_unlabeled(500, 2).features();
  const Eigen::MatrixXd x = dist.sample_unlabeled(300, 3).features();
  std::vector<ConfidenceSet> prev;
  double prev_t = 2.0;
  for (int beta = 1; beta <= 5; ++beta) {
    const ConfidenceRule rule = fit_plugin(model, pool, beta, kDefaultNoiseStd, 7);
    EXPECT_LE(rule.threshold()->value(), prev_t);
    prev_t = rule.threshold()->value();
    const auto sets = rule.predict_sets(x);
    if (!prev.empty())
      for (std::size_t i = 0; i < sets.size(); ++i) ASSERT_EQ(intersection_size(prev[i], sets[i]), prev[i].cardinality());
    prev = sets;
  }
}

TEST(FitPlugin, BetaMustBeBelowK) {
  const auto model = mixture_model(3, 2);
  EXPECT_THROW(fit_plugin(model, Eigen::MatrixXd::Zero(5, 2), 3, 0.0, 0), std::invalid_argument);
  EXPECT_THROW(fit_plugin(model, Eigen::MatrixXd::Zero(0, 2), 1, 0.0, 0), std::invalid_argument);
}

TEST(FitOracle, PathologySets) {
  const PathologySpec spec;
  const ConfidenceRule rule = fit_oracle(Distribution(spec), 2, 1'000'000, 0);
  Eigen::VectorXd inner = Eigen::VectorXd::Zero(2), outer = Eigen::VectorXd::Zero(2);
  inner(0) = 0.05;
  outer(1) = 4.0;
  EXPECT_EQ(predict_set(rule, inner), ConfidenceSet(10, {1, 2, 3}));
  EXPECT_TRUE(predict_set(rule, outer).empty());
  EXPECT_EQ(rule.model().kind(), ModelKind::OraclePosterior);
}

TEST(FitOracle, MixtureBetaFiveErrorNearZero) {
  const Distribution dist(sample_mixture_spec(10, 10, 12));
  const ConfidenceRule rule = fit_oracle(dist, 5, 200'000, 1);
  EXPECT_LT(error_rate(rule, dist.sample_labeled(10'000, 2)), 0.01);
}

TEST(FitModel, OracleEstimatorChecksShape) {
  const Distribution dist(sample_mixture_spec(3, 2, 1));
  const Distribution other(sample_mixture_spec(4, 2, 1));
  EXPECT_THROW(fit_model(OracleEstimator{other}, dist.sample_labeled(10, 1)), std::invalid_argument);
}

TEST(ConfidenceRule, ConstructThenCompareDigests) {
  const Distribution dist(sample_mixture_spec(4, 3, 6));
  FitConfig cfg;
  cfg.beta = 2;
  cfg.estimator = KnnEstimator{5};
  const ConfidenceRule rule = fit_supervised(dist.sample_labeled(100, 1), cfg);
  const std::string before = rule_digest(rule);
  (void)rule.predict_sets(dist.sample_unlabeled(100, 2).features());
  (void)information(rule, dist.sample_unlabeled(100, 3));
  EXPECT_EQ(rule_digest(rule), before);
  EXPECT_EQ(rule_digest(rule_from_json(to_json(rule))), before);
}

}  // namespace
}  // namespace confset
