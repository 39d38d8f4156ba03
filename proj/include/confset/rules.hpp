#pragma once

#include "confset/core.hpp"
#include "confset/gfun.hpp"
#include "confset/probest.hpp"

#include <memory>
#include <optional>
#include <string>
#include <variant>

namespace confset {

enum class RuleMode { TopBeta, Threshold };

/// Immutable set-valued classifier built on a fitted probability model.
///   TopBeta:   the beta classes with the largest scores (ties to the smaller index).
///   Threshold: {k : p_hat_k(x) >= threshold}.
class ConfidenceRule {
 public:
  static ConfidenceRule top_beta(std::shared_ptr<const ProbModel> model, int beta);
  static ConfidenceRule thresholded(std::shared_ptr<const ProbModel> model, int beta, Threshold threshold,
                                    std::optional<std::uint64_t> perturb_seed = std::nullopt);

  RuleMode mode() const noexcept { return mode_; }
  int beta() const noexcept { return beta_; }
  /// Set only in Threshold mode.
  std::optional<Threshold> threshold() const noexcept { return threshold_; }
  std::optional<std::uint64_t> perturb_seed() const noexcept { return perturb_seed_; }
  const ProbModel& model() const noexcept { return *model_; }
  std::shared_ptr<const ProbModel> model_ptr() const noexcept { return model_; }
  int k_classes() const { return model_->k_classes(); }

  /// Sets for precomputed (clipped) scores, one per row.
  std::vector<ConfidenceSet> sets_from_scores(const ScoreMatrix& scores) const;
  std::vector<ConfidenceSet> predict_sets(const Eigen::MatrixXd& x) const;

 private:
  ConfidenceRule(RuleMode mode, std::shared_ptr<const ProbModel> model, int beta, std::optional<Threshold> threshold,
                 std::optional<std::uint64_t> perturb_seed);

  RuleMode mode_;
  std::shared_ptr<const ProbModel> model_;
  int beta_;
  std::optional<Threshold> threshold_;
  std::optional<std::uint64_t> perturb_seed_;
};

ConfidenceSet predict_set(const ConfidenceRule& rule, const Eigen::VectorXd& x);

/// {k : scores_k >= threshold}.
template <typename Derived>
ConfidenceSet threshold_set(const Eigen::MatrixBase<Derived>& scores, double threshold) {
  ConfidenceSet s(static_cast<int>(scores.size()));
  for (Eigen::Index k = 0; k < scores.size(); ++k)
    if (scores(k) >= threshold) s.insert(static_cast<int>(k) + 1);
  return s;
}

/// The beta largest entries, ties broken towards the smaller class index.
ConfidenceSet top_beta_set(const Eigen::Ref<const Eigen::RowVectorXd>& scores, int beta);

struct OracleEstimator {
  Distribution dist;
};
struct KnnEstimator {
  std::optional<int> k_neighbors;  // default ceil(sqrt(n_fit))
};
struct SoftmaxEstimator {
  SoftmaxHyper hyper;
};
using EstimatorConfig = std::variant<OracleEstimator, KnnEstimator, SoftmaxEstimator>;

/// Fits the configured estimator on `train`. The oracle estimator ignores the data.
ProbModel fit_model(const EstimatorConfig& estimator, const LabeledDataset& train);

struct FitConfig {
  int beta = 1;
  EstimatorConfig estimator = SoftmaxEstimator{};
  double noise_std = kDefaultNoiseStd;
  std::uint64_t seed = 0;
};

ConfidenceRule fit_top_beta(std::shared_ptr<const ProbModel> model, int beta);

/// Plug-in rule for an already fitted model: the threshold is the generalized inverse at
/// beta of the empirical G of the perturbed scores of `pool`. beta must lie in [1, K - 1].
ConfidenceRule fit_plugin(std::shared_ptr<const ProbModel> model, const Eigen::MatrixXd& pool, int beta,
                          double noise_std, std::uint64_t seed);

/// Fits the model on the first floor(n/2) rows and thresholds on the last ceil(n/2)
/// feature rows. Row order decides the split.
ConfidenceRule fit_supervised(const LabeledDataset& train, const FitConfig& cfg);

/// As fit_supervised, with the unlabeled features appended to the threshold pool.
ConfidenceRule fit_semi_supervised(const LabeledDataset& train, const UnlabeledDataset& unlabeled,
                                   const FitConfig& cfg);

/// Exact-posterior rule thresholded at the Monte-Carlo population threshold.
ConfidenceRule fit_oracle(const Distribution& dist, int beta, Index mc_size = kDefaultMcSize, std::uint64_t seed = 0);

}  // namespace confset
