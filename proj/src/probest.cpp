#include "confset/probest.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>
#include <stdexcept>
#include <string>

namespace confset {

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::OraclePosterior: return "oracle";
    case ModelKind::Knn: return "knn";
    case ModelKind::Softmax: return "softmax";
  }
  return "?";
}

ModelKind model_kind_from_string(std::string_view name) {
  if (name == "oracle") return ModelKind::OraclePosterior;
  if (name == "knn") return ModelKind::Knn;
  if (name == "softmax") return ModelKind::Softmax;
  throw std::invalid_argument("unknown estimator '" + std::string(name) + "'");
}

ProbModel::ProbModel(Variant v) : v_(std::move(v)) {
  if (const auto* knn = std::get_if<KnnModel>(&v_)) {
    if (knn->features.rows() < 1 || static_cast<std::size_t>(knn->features.rows()) != knn->labels.size())
      throw std::invalid_argument("knn model: bad training data");
    if (knn->k_neighbors < 1 || knn->k_neighbors > knn->features.rows())
      throw std::invalid_argument("knn model: k_neighbors outside [1, n]");
    LabelSpace space(knn->k_classes);
    for (int y : knn->labels)
      if (!space.contains(y)) throw std::invalid_argument("knn model: label outside [1, K]");
  } else if (const auto* sm = std::get_if<SoftmaxModel>(&v_)) {
    if (sm->weights.rows() < 2 || sm->weights.cols() < 2) throw std::invalid_argument("softmax model: W must be K x (d + 1)");
    if (!sm->weights.allFinite()) throw std::invalid_argument("softmax model: non-finite weights");
  } else if (!std::get<OraclePosteriorModel>(v_).dist.has_exact_posterior()) {
    throw std::invalid_argument("oracle model needs a distribution with exact posterior");
  }
}

ModelKind ProbModel::kind() const noexcept {
  switch (v_.index()) {
    case 0: return ModelKind::OraclePosterior;
    case 1: return ModelKind::Knn;
    default: return ModelKind::Softmax;
  }
}

int ProbModel::k_classes() const {
  if (const auto* o = std::get_if<OraclePosteriorModel>(&v_)) return o->dist.k_classes();
  if (const auto* knn = std::get_if<KnnModel>(&v_)) return knn->k_classes;
  return static_cast<int>(std::get<SoftmaxModel>(v_).weights.rows());
}

Index ProbModel::dim() const {
  if (const auto* o = std::get_if<OraclePosteriorModel>(&v_)) return o->dist.dim();
  if (const auto* knn = std::get_if<KnnModel>(&v_)) return knn->features.cols();
  return std::get<SoftmaxModel>(v_).weights.cols() - 1;
}

namespace {

Eigen::MatrixXd knn_predict(const KnnModel& m, const Eigen::MatrixXd& x) {
  const Index n = m.features.rows();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(x.rows(), m.k_classes);
  std::vector<std::pair<double, Index>> dist(static_cast<std::size_t>(n));
  for (Index i = 0; i < x.rows(); ++i) {
    // Exact squared distances; the expansion ||a||^2 - 2ab + ||b||^2 could reorder near-ties.
    for (Index j = 0; j < n; ++j)
      dist[static_cast<std::size_t>(j)] = {(m.features.row(j) - x.row(i)).squaredNorm(), j};
    const auto kth = dist.begin() + m.k_neighbors;
    std::nth_element(dist.begin(), kth - 1, dist.end());
    for (auto it = dist.begin(); it != kth; ++it) out(i, m.labels[static_cast<std::size_t>(it->second)] - 1) += 1.0;
  }
  return out / static_cast<double>(m.k_neighbors);
}

Eigen::MatrixXd with_bias(const Eigen::MatrixXd& x) {
  Eigen::MatrixXd z(x.rows(), x.cols() + 1);
  z.leftCols(x.cols()) = x;
  z.col(x.cols()).setOnes();
  return z;
}

}  // namespace

Eigen::MatrixXd ProbModel::predict_raw(const Eigen::MatrixXd& x) const {
  if (x.cols() != dim())
    throw std::invalid_argument("predict: expected dimension " + std::to_string(dim()) + ", got " + std::to_string(x.cols()));
  if (!x.allFinite()) throw std::invalid_argument("predict: non-finite input");
  if (const auto* o = std::get_if<OraclePosteriorModel>(&v_)) return o->dist.posterior(x);
  if (const auto* knn = std::get_if<KnnModel>(&v_)) return knn_predict(*knn, x);
  const auto& w = std::get<SoftmaxModel>(v_).weights;
  return softmax_rows(with_bias(x) * w.transpose());
}

ScoreMatrix ProbModel::predict(const Eigen::MatrixXd& x) const { return ScoreMatrix(predict_raw(x)).clipped(); }

Eigen::VectorXd ProbModel::predict_one(const Eigen::VectorXd& x) const {
  return predict(x.transpose()).values().row(0).transpose();
}

ProbModel make_oracle_model(Distribution dist) { return ProbModel(OraclePosteriorModel{std::move(dist)}); }

int default_knn_neighbors(Index n) {
  if (n < 1) throw std::invalid_argument("default_knn_neighbors: n >= 1 required");
  auto k = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
  while (static_cast<Index>(k - 1) * (k - 1) >= n) --k;  // guard sqrt rounding
  while (static_cast<Index>(k) * k < n) ++k;
  return k;
}

ProbModel fit_knn(const LabeledDataset& train, int k_neighbors) {
  if (k_neighbors < 1 || k_neighbors > train.size())
    throw std::invalid_argument("fit_knn: k_neighbors must lie in [1, n], got " + std::to_string(k_neighbors));
  return ProbModel(KnnModel{train.features(), train.labels(), train.k_classes(), k_neighbors});
}

double softmax_objective(const Eigen::MatrixXd& weights, const Eigen::MatrixXd& z, const std::vector<int>& labels0,
                         double l2) {
  const Eigen::MatrixXd logits = z * weights.transpose();
  double loss = 0.0;
  for (Index i = 0; i < z.rows(); ++i) {
    const double top = logits.row(i).maxCoeff();
    const double lse = top + std::log((logits.row(i).array() - top).exp().sum());
    loss += lse - logits(i, labels0[static_cast<std::size_t>(i)]);
  }
  const Index d = weights.cols() - 1;
  return loss / static_cast<double>(z.rows()) + 0.5 * l2 * weights.leftCols(d).squaredNorm();
}

Eigen::MatrixXd softmax_gradient(const Eigen::MatrixXd& weights, const Eigen::MatrixXd& z,
                                 const std::vector<int>& labels0, double l2) {
  Eigen::MatrixXd residual = softmax_rows(z * weights.transpose());
  for (Index i = 0; i < z.rows(); ++i) residual(i, labels0[static_cast<std::size_t>(i)]) -= 1.0;
  Eigen::MatrixXd grad = residual.transpose() * z / static_cast<double>(z.rows());
  const Index d = weights.cols() - 1;
  grad.leftCols(d) += l2 * weights.leftCols(d);
  return grad;
}

ProbModel fit_softmax(const LabeledDataset& train, const SoftmaxHyper& hyper) {
  if (!(hyper.step > 0.0)) throw std::invalid_argument("fit_softmax: step must be positive");
  if (hyper.iters < 0) throw std::invalid_argument("fit_softmax: iters must be nonnegative");
  if (!(hyper.l2 >= 0.0)) throw std::invalid_argument("fit_softmax: l2 must be nonnegative");
  if (train.size() < train.k_classes())
    std::cerr << "warning: fit_softmax with n = " << train.size() << " < K = " << train.k_classes() << "\n";

  const Index n = train.size();
  const Index d = train.dim();
  const int k = train.k_classes();
  const Eigen::RowVectorXd mean = train.features().colwise().mean();
  Eigen::RowVectorXd scale = ((train.features().rowwise() - mean).colwise().squaredNorm() / static_cast<double>(n)).cwiseSqrt();
  for (Index j = 0; j < d; ++j)
    if (!(scale(j) > 0.0)) scale(j) = 1.0;

  Eigen::MatrixXd z(n, d + 1);
  z.leftCols(d) = (train.features().rowwise() - mean).array().rowwise() / scale.array();
  z.col(d).setOnes();
  std::vector<int> labels0(train.labels());
  for (int& y : labels0) --y;

  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(k, d + 1);
  for (int it = 0; it < hyper.iters; ++it) w -= hyper.step * softmax_gradient(w, z, labels0, hyper.l2);

  // Fold the standardization into raw-feature weights.
  Eigen::MatrixXd raw(k, d + 1);
  raw.leftCols(d) = w.leftCols(d).array().rowwise() / scale.array();
  raw.col(d) = w.col(d) - raw.leftCols(d) * mean.transpose();
  return ProbModel(SoftmaxModel{std::move(raw)});
}

}  // namespace confset
