#include "confset/distgen.hpp"
#include "confset/gfun.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace confset {
namespace {

using testing::brute_g;
using testing::brute_inverse;

ScoreMatrix scores_of(std::initializer_list<std::initializer_list<double>> rows) {
  Eigen::MatrixXd m(static_cast<Index>(rows.size()), static_cast<Index>(rows.begin()->size()));
  Index i = 0;
  for (const auto& r : rows) {
    Index k = 0;
    for (double v : r) m(i, k++) = v;
    ++i;
  }
  return ScoreMatrix(m);
}

TEST(Threshold, RangeChecked) {
  EXPECT_NO_THROW(Threshold(0.0));
  EXPECT_NO_THROW(Threshold(1.0));
  EXPECT_THROW(Threshold(-1e-12), std::invalid_argument);
  EXPECT_THROW(Threshold(1.0 + 1e-12), std::invalid_argument);
  EXPECT_THROW(Threshold(std::nan("")), std::invalid_argument);
}

TEST(EmpiricalG, Examples) {
  EXPECT_DOUBLE_EQ(build_empirical_g(scores_of({{0.7, 0.3}}))(0.5), 1.0);
  const EmpiricalG g(scores_of({{0.9, 0.1}, {0.6, 0.4}}));
  EXPECT_DOUBLE_EQ(g(0.5), 1.0);
  EXPECT_DOUBLE_EQ(g(1.0), 0.0);
  EXPECT_EQ(g.pooled().size(), 4u);
  EXPECT_TRUE(std::is_sorted(g.pooled().begin(), g.pooled().end(), std::greater<>()));
}

TEST(EmpiricalG, StrictInequalityAtPooledValues) {
  const EmpiricalG g(scores_of({{0.5, 0.5}, {0.5, 0.2}}));
  EXPECT_DOUBLE_EQ(g(0.5), 0.0);
  EXPECT_DOUBLE_EQ(g(0.2), 1.5);
  EXPECT_DOUBLE_EQ(g(0.0), 2.0);
}

TEST(EmpiricalG, RejectsEmptyOrUnclipped) {
  EXPECT_THROW(EmpiricalG(ScoreMatrix(Eigen::MatrixXd(0, 3))), std::invalid_argument);
  EXPECT_THROW(EmpiricalG(scores_of({{1.5, 0.0}})), std::invalid_argument);
}

TEST(GeneralizedInverse, Examples) {
  const EmpiricalG g(scores_of({{0.9, 0.1}, {0.6, 0.4}}));
  EXPECT_EQ(generalized_inverse(g, 2.0).value(), 0.0);
  EXPECT_EQ(generalized_inverse(g, 1.0).value(), 0.4);
  EXPECT_EQ(generalized_inverse(g, 1.0 / 4.0).value(), 0.9);
}

TEST(GeneralizedInverse, RejectsBetaOutOfRange) {
  const EmpiricalG g(scores_of({{0.9, 0.1}}));
  EXPECT_THROW(generalized_inverse(g, 0.0), std::invalid_argument);
  EXPECT_THROW(generalized_inverse(g, -1.0), std::invalid_argument);
  EXPECT_THROW(generalized_inverse(g, 2.5), std::invalid_argument);
}

TEST(GeneralizedInversePropertyTest, MatchesBruteForceScanOnRandomInstances) {
  Rng rng(derive_seed(2024, 0, "ginv"));
  for (int trial = 0; trial < 1000; ++trial) {
    SCOPED_TRACE(trial);
    const Index m = 1 + static_cast<Index>(rng.below(12));
    const Index k = 2 + static_cast<Index>(rng.below(4));
    const Eigen::MatrixXd s = trial % 2 == 0 ? testing::random_scores(rng, m, k)
                                             : testing::random_grid_scores(rng, m, k, 1 + static_cast<int>(rng.below(6)));
    const EmpiricalG g{ScoreMatrix(s)};
    // integer, half-integer and arbitrary beta values including beta = K
    for (double beta : {1.0, 0.5, static_cast<double>(k), static_cast<double>(k) * rng.uniform_pos(),
                        static_cast<double>(1 + rng.below(static_cast<std::uint64_t>(k))) / static_cast<double>(m)}) {
      ASSERT_EQ(generalized_inverse(g, beta).value(), brute_inverse(s, beta)) << "beta=" << beta;
    }
  }
}

TEST(GeneralizedInversePropertyTest, EvaluateMatchesBruteCount) {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::MatrixXd s = testing::random_grid_scores(rng, 1 + static_cast<Index>(rng.below(8)), 3, 4);
    const EmpiricalG g{ScoreMatrix(s)};
    for (double t : {0.0, 0.25, 0.3, 0.5, 0.75, 1.0, rng.uniform()}) ASSERT_EQ(g(t), brute_g(s, t));
  }
}

TEST(GeneralizedInversePropertyTest, MonotoneNonincreasing) {
  Rng rng(6);
  for (int trial = 0; trial < 200; ++trial) {
    const EmpiricalG g{ScoreMatrix(testing::random_scores(rng, 1 + static_cast<Index>(rng.below(20)), 4))};
    double prev = g(0.0);
    for (double t = 0.0; t <= 1.0; t += 0.013) {
      const double cur = g(t);
      ASSERT_LE(cur, prev);
      ASSERT_GE(cur, 0.0);
      ASSERT_LE(cur, 4.0);
      prev = cur;
    }
  }
}

// Exhaustive over all score matrices with M <= 3, K <= 3 whose entries come from a small
// grid (four levels when M K <= 6, three otherwise), every beta in (0, K] on a 1/(2M)
// grid, and t on a 1/24 grid covering the pooled values and the points between them.
TEST(Proposition6, InverseLawExhaustiveSmallInstances) {
  std::vector<double> ts;
  for (int i = 0; i <= 24; ++i) ts.push_back(i / 24.0);
  for (int m = 1; m <= 3; ++m)
    for (int k = 2; k <= 3; ++k) {
      const int cells = m * k;
      const std::vector<double> levels =
          cells <= 6 ? std::vector<double>{0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0} : std::vector<double>{0.0, 0.5, 1.0};
      const int base = static_cast<int>(levels.size());
      std::vector<int> digits(static_cast<std::size_t>(cells), 0);
      for (;;) {
        Eigen::MatrixXd s(m, k);
        for (int c = 0; c < cells; ++c) s(c / k, c % k) = levels[static_cast<std::size_t>(digits[static_cast<std::size_t>(c)])];
        const EmpiricalG g{ScoreMatrix(s)};
        for (int b = 1; b <= 2 * k * m; ++b) {
          const double beta = b / (2.0 * m);
          const double inv = generalized_inverse(g, beta).value();
          for (double t : ts) ASSERT_EQ(inv <= t, g(t) <= beta) << "beta=" << beta << " t=" << t << "\n" << s;
        }
        int c = 0;
        while (c < cells && ++digits[static_cast<std::size_t>(c)] == base) digits[static_cast<std::size_t>(c++)] = 0;
        if (c == cells) break;
      }
    }
}

TEST(Proposition6, CalibrationAfterPerturbation) {
  Rng rng(derive_seed(7, 0, "calibration"));
  for (int trial = 0; trial < 300; ++trial) {
    SCOPED_TRACE(trial);
    const Index m = 5 + static_cast<Index>(rng.below(200));
    const Index k = 2 + static_cast<Index>(rng.below(6));
    const Eigen::MatrixXd base = trial % 3 == 0 ? Eigen::MatrixXd(0.9 * testing::random_grid_scores(rng, m, k, 2))
                                                     : testing::random_simplex_rows(rng, m, k);
    const ScoreMatrix p = perturb_scores(ScoreMatrix(base), kDefaultNoiseStd, rng.below(1u << 30));
    const EmpiricalG g(p);
    for (int b = 1; b < k; ++b) {
      const double inv = generalized_inverse(g, b).value();
      ASSERT_LE(std::abs(g(inv) - b), static_cast<double>(k) / static_cast<double>(m)) << "beta=" << b;
    }
  }
}

TEST(Lemma1, ThresholdGapBoundedBySupNorm) {
  Rng rng(derive_seed(8, 0, "lemma1"));
  for (int trial = 0; trial < 1000; ++trial) {
    SCOPED_TRACE(trial);
    const Index m = 1 + static_cast<Index>(rng.below(60));
    const Index k = 2 + static_cast<Index>(rng.below(5));
    const ScoreMatrix p = perturb_scores(ScoreMatrix(testing::random_simplex_rows(rng, m, k)), kDefaultNoiseStd, trial);
    const double gap = std::pow(10.0, -3.0 * rng.uniform());  // sup-norm scale in (1e-3, 1]
    Eigen::MatrixXd q = p.values();
    for (Index i = 0; i < m; ++i)
      for (Index j = 0; j < k; ++j) q(i, j) = std::clamp(q(i, j) + gap * (2.0 * rng.uniform() - 1.0), 0.0, 1.0);
    const ScoreMatrix ph(q);
    const double sup = (p.values() - ph.values()).cwiseAbs().maxCoeff();
    const EmpiricalG gp(p), gq(ph);
    for (int b = 1; b < k; ++b)
      ASSERT_LE(std::abs(generalized_inverse(gp, b).value() - generalized_inverse(gq, b).value()), sup + 1e-15);
  }
}

TEST(PerturbScores, ZeroNoiseIsIdentity) {
  Rng rng(1);
  const ScoreMatrix s(testing::random_scores(rng, 20, 4));
  EXPECT_EQ(perturb_scores(s, 0.0, 9).values(), s.values());
}

TEST(PerturbScores, DeterministicInSeed) {
  Rng rng(1);
  const ScoreMatrix s(testing::random_scores(rng, 20, 4));
  EXPECT_EQ(perturb_scores(s, 0.1, 9).values(), perturb_scores(s, 0.1, 9).values());
  EXPECT_NE(perturb_scores(s, 0.1, 9).values(), perturb_scores(s, 0.1, 10).values());
}

TEST(PerturbScores, BreaksTiesOnConstantInput) {
  const ScoreMatrix s(Eigen::MatrixXd::Constant(1000, 10, 0.5));
  const ScoreMatrix p = perturb_scores(s, std::exp(-5.0), 3);
  std::vector<double> v(p.values().data(), p.values().data() + p.values().size());
  std::sort(v.begin(), v.end());
  EXPECT_EQ(std::adjacent_find(v.begin(), v.end()), v.end());
  EXPECT_GE(v.front(), 0.5);
  EXPECT_LE(v.back(), 1.0);
}

TEST(PerturbScores, ClipsAndRejectsNegativeNoise) {
  const ScoreMatrix s(Eigen::MatrixXd::Constant(5, 3, 1.0));
  EXPECT_EQ(perturb_scores(s, 0.5, 1).values(), s.values());
  EXPECT_THROW(perturb_scores(s, -0.1, 1), std::invalid_argument);
}

TEST(PerturbScores, DefaultNoiseIsExpMinusFive) { EXPECT_DOUBLE_EQ(kDefaultNoiseStd, std::exp(-5.0)); }

TEST(McTrueThreshold, SymmetricTwoComponentMixture) {
  MixtureSpec spec;
  spec.k_classes = 2;
  spec.dim = 1;
  spec.means = Eigen::MatrixXd(2, 1);
  spec.means << 0.0, 4.0;
  EXPECT_NEAR(mc_true_threshold(Distribution(spec), 1, 1'000'000, 17).value(), 0.5, 0.01);
}

TEST(McTrueThreshold, BetaEqualsKIsZero) {
  const Distribution d(sample_mixture_spec(3, 2, 1));
  EXPECT_EQ(mc_true_threshold(d, 3, 1000, 1).value(), 0.0);
}

TEST(McTrueThreshold, Preconditions) {
  const Distribution d(sample_mixture_spec(3, 2, 1));
  EXPECT_THROW(mc_true_threshold(d, 1, 999, 1), std::invalid_argument);
  EXPECT_THROW(mc_true_threshold(d, 0, 1000, 1), std::invalid_argument);
  EXPECT_THROW(mc_true_threshold(d, 4, 1000, 1), std::invalid_argument);
  const LabeledDataset data = d.sample_labeled(50, 2);
  EXPECT_THROW(mc_true_threshold(Distribution(EmpiricalSource{data}), 1, 1000, 1), std::invalid_argument);
}

TEST(McTrueThreshold, DeterministicInSeed) {
  const Distribution d(sample_mixture_spec(4, 3, 2));
  EXPECT_EQ(mc_true_threshold(d, 2, 5000, 3), mc_true_threshold(d, 2, 5000, 3));
}

}  // namespace
}  // namespace confset
