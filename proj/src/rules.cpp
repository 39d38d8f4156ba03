#include "confset/rules.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace confset {

namespace {

void require_threshold_beta(int beta, int k_classes) {
  if (beta < 1 || beta > k_classes - 1)
    throw std::invalid_argument("threshold rules need beta in [1, K - 1], got " + std::to_string(beta));
}

}  // namespace

ConfidenceRule::ConfidenceRule(RuleMode mode, std::shared_ptr<const ProbModel> model, int beta,
                               std::optional<Threshold> threshold, std::optional<std::uint64_t> perturb_seed)
    : mode_(mode), model_(std::move(model)), beta_(beta), threshold_(threshold), perturb_seed_(perturb_seed) {
  if (!model_) throw std::invalid_argument("confidence rule needs a model");
  if (mode_ == RuleMode::TopBeta && threshold_) throw std::invalid_argument("top-beta rule carries no threshold");
  if (mode_ == RuleMode::Threshold && !threshold_) throw std::invalid_argument("threshold rule needs a threshold");
  if (beta_ < 1 || beta_ > model_->k_classes())
    throw std::invalid_argument("beta must lie in [1, K], got " + std::to_string(beta_));
}

ConfidenceRule ConfidenceRule::top_beta(std::shared_ptr<const ProbModel> model, int beta) {
  return ConfidenceRule(RuleMode::TopBeta, std::move(model), beta, std::nullopt, std::nullopt);
}

ConfidenceRule ConfidenceRule::thresholded(std::shared_ptr<const ProbModel> model, int beta, Threshold threshold,
                                           std::optional<std::uint64_t> perturb_seed) {
  return ConfidenceRule(RuleMode::Threshold, std::move(model), beta, threshold, perturb_seed);
}

ConfidenceSet top_beta_set(const Eigen::Ref<const Eigen::RowVectorXd>& scores, int beta) {
  const auto k = static_cast<int>(scores.size());
  std::vector<int> order(static_cast<std::size_t>(k));
  std::iota(order.begin(), order.end(), 0);
  std::partial_sort(order.begin(), order.begin() + beta, order.end(), [&](int a, int b) {
    return scores(a) > scores(b) || (scores(a) == scores(b) && a < b);
  });
  ConfidenceSet s(k);
  for (int i = 0; i < beta; ++i) s.insert(order[static_cast<std::size_t>(i)] + 1);
  return s;
}

std::vector<ConfidenceSet> ConfidenceRule::sets_from_scores(const ScoreMatrix& scores) const {
  if (scores.k_classes() != k_classes()) throw std::invalid_argument("score matrix has the wrong number of classes");
  std::vector<ConfidenceSet> out;
  out.reserve(static_cast<std::size_t>(scores.points()));
  const auto& v = scores.values();
  for (Index i = 0; i < v.rows(); ++i) {
    if (mode_ == RuleMode::TopBeta)
      out.push_back(top_beta_set(v.row(i), beta_));
    else
      out.push_back(threshold_set(v.row(i), threshold_->value()));
  }
  return out;
}

std::vector<ConfidenceSet> ConfidenceRule::predict_sets(const Eigen::MatrixXd& x) const {
  return sets_from_scores(model_->predict(x));
}

ConfidenceSet predict_set(const ConfidenceRule& rule, const Eigen::VectorXd& x) {
  return rule.predict_sets(x.transpose()).front();
}

ProbModel fit_model(const EstimatorConfig& estimator, const LabeledDataset& train) {
  if (const auto* o = std::get_if<OracleEstimator>(&estimator)) {
    if (o->dist.dim() != train.dim() || o->dist.k_classes() != train.k_classes())
      throw std::invalid_argument("oracle estimator: distribution does not match the training data");
    return make_oracle_model(o->dist);
  }
  if (const auto* knn = std::get_if<KnnEstimator>(&estimator))
    return fit_knn(train, knn->k_neighbors.value_or(default_knn_neighbors(train.size())));
  return fit_softmax(train, std::get<SoftmaxEstimator>(estimator).hyper);
}

ConfidenceRule fit_top_beta(std::shared_ptr<const ProbModel> model, int beta) {
  if (!model) throw std::invalid_argument("fit_top_beta: null model");
  if (beta < 1 || beta > model->k_classes())
    throw std::invalid_argument("top-beta rules need beta in [1, K], got " + std::to_string(beta));
  return ConfidenceRule::top_beta(std::move(model), beta);
}

ConfidenceRule fit_plugin(std::shared_ptr<const ProbModel> model, const Eigen::MatrixXd& pool, int beta,
                          double noise_std, std::uint64_t seed) {
  if (!model) throw std::invalid_argument("fit_plugin: null model");
  require_threshold_beta(beta, model->k_classes());
  if (pool.rows() < 1) throw std::invalid_argument("fit_plugin: empty threshold pool");
  const ScoreMatrix scores = perturb_scores(model->predict(pool), noise_std, seed);
  const Threshold t = generalized_inverse(EmpiricalG(scores), beta);
  return ConfidenceRule::thresholded(std::move(model), beta, t, seed);
}

namespace {

ConfidenceRule fit_split(const LabeledDataset& train, const Eigen::MatrixXd* unlabeled, const FitConfig& cfg) {
  if (train.size() < 2) throw std::invalid_argument("plug-in fitting needs n >= 2");
  require_threshold_beta(cfg.beta, train.k_classes());
  const Index fit_rows = train.size() / 2;
  const Index hold_rows = train.size() - fit_rows;
  auto model = std::make_shared<const ProbModel>(fit_model(cfg.estimator, train.head(fit_rows)));
  const Eigen::MatrixXd held_out = train.features().bottomRows(hold_rows);
  if (!unlabeled || unlabeled->rows() == 0) return fit_plugin(std::move(model), held_out, cfg.beta, cfg.noise_std, cfg.seed);
  return fit_plugin(std::move(model), stack_rows(held_out, *unlabeled), cfg.beta, cfg.noise_std, cfg.seed);
}

}  // namespace

ConfidenceRule fit_supervised(const LabeledDataset& train, const FitConfig& cfg) {
  return fit_split(train, nullptr, cfg);
}

ConfidenceRule fit_semi_supervised(const LabeledDataset& train, const UnlabeledDataset& unlabeled,
                                   const FitConfig& cfg) {
  if (unlabeled.dim() != train.dim())
    throw std::invalid_argument("unlabeled dimension " + std::to_string(unlabeled.dim()) +
                                " != training dimension " + std::to_string(train.dim()));
  return fit_split(train, &unlabeled.features(), cfg);
}

ConfidenceRule fit_oracle(const Distribution& dist, int beta, Index mc_size, std::uint64_t seed) {
  const Threshold t = mc_true_threshold(dist, beta, mc_size, seed);
  return ConfidenceRule::thresholded(std::make_shared<const ProbModel>(make_oracle_model(dist)), beta, t);
}

}  // namespace confset
