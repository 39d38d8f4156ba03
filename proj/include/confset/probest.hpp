#pragma once

#include "confset/core.hpp"
#include "confset/distgen.hpp"

#include <Eigen/Core>

#include <string_view>
#include <variant>

namespace confset {

enum class ModelKind { OraclePosterior, Knn, Softmax };

std::string_view to_string(ModelKind kind);
ModelKind model_kind_from_string(std::string_view name);

struct OraclePosteriorModel {
  Distribution dist;
};

/// p_hat_k(x) = (# of the k_neighbors nearest training points with label k) / k_neighbors.
/// Distance ties go to the smaller training index.
struct KnnModel {
  Eigen::MatrixXd features;
  std::vector<int> labels;
  int k_classes = 0;
  int k_neighbors = 1;
};

/// p_hat(x) = softmax(W [x; 1]); W is K x (d + 1), the last column being the bias.
struct SoftmaxModel {
  Eigen::MatrixXd weights;
};

/// Fitted class-probability estimator.
class ProbModel {
 public:
  using Variant = std::variant<OraclePosteriorModel, KnnModel, SoftmaxModel>;

  explicit ProbModel(Variant v);

  ModelKind kind() const noexcept;
  int k_classes() const;
  Index dim() const;
  const Variant& variant() const noexcept { return v_; }

  /// Raw scores for every row of x (M x K), before clipping.
  Eigen::MatrixXd predict_raw(const Eigen::MatrixXd& x) const;
  /// Scores clipped to [0, 1].
  ScoreMatrix predict(const Eigen::MatrixXd& x) const;
  Eigen::VectorXd predict_one(const Eigen::VectorXd& x) const;

 private:
  Variant v_;
};

ProbModel make_oracle_model(Distribution dist);

/// ceil(sqrt(n)).
int default_knn_neighbors(Index n);
ProbModel fit_knn(const LabeledDataset& train, int k_neighbors);

struct SoftmaxHyper {
  double l2 = 1e-3;
  int iters = 2000;
  double step = 0.5;
};

// Full-batch gradient descent on
//   L(W) = (1/n) sum_i -log softmax(W z_i)_{y_i} + (l2 / 2) ||W without bias column||^2
// from W = 0, where z_i = [standardized x_i; 1]. Features are standardized with the
// training mean and standard deviation, and the map is folded back into W so the
// returned model acts on raw features.
ProbModel fit_softmax(const LabeledDataset& train, const SoftmaxHyper& hyper = {});

/// Row-wise softmax with max subtraction.
template <typename Derived>
Eigen::MatrixXd softmax_rows(const Eigen::MatrixBase<Derived>& logits) {
  const Eigen::VectorXd row_max = logits.rowwise().maxCoeff();
  Eigen::MatrixXd p = (logits.colwise() - row_max).array().exp().matrix();
  const Eigen::VectorXd total = p.rowwise().sum();
  p.array().colwise() /= total.array();
  return p;
}

/// Objective above for design matrix `z` (n x (d + 1), last column ones) and 0-based labels.
double softmax_objective(const Eigen::MatrixXd& weights, const Eigen::MatrixXd& z, const std::vector<int>& labels0,
                         double l2);
Eigen::MatrixXd softmax_gradient(const Eigen::MatrixXd& weights, const Eigen::MatrixXd& z,
                                 const std::vector<int>& labels0, double l2);

}  // namespace confset
