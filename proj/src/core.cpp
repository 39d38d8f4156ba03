#include "confset/core.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace confset {

LabelSpace::LabelSpace(int k_classes) : k_(k_classes) {
  if (k_classes < 2) throw std::invalid_argument("label space needs K >= 2, got " + std::to_string(k_classes));
}

ConfidenceSet::ConfidenceSet(int k_classes) : k_(k_classes) {
  if (k_classes < 1) throw std::invalid_argument("confidence set needs K >= 1");
  if (k_classes > kInlineBits) heap_.assign((static_cast<std::size_t>(k_classes) + 63) / 64, 0);
}

ConfidenceSet::ConfidenceSet(int k_classes, std::initializer_list<int> labels) : ConfidenceSet(k_classes) {
  for (int label : labels) insert(label);
}

ConfidenceSet ConfidenceSet::full(int k_classes) {
  ConfidenceSet s(k_classes);
  for (int k = 1; k <= k_classes; ++k) s.insert(k);
  return s;
}

void ConfidenceSet::insert(int label) {
  if (label < 1 || label > k_) throw std::out_of_range("label " + std::to_string(label) + " outside [1, K]");
  const int bit = label - 1;
  words()[bit / 64] |= std::uint64_t{1} << (bit % 64);
}

bool ConfidenceSet::contains(int label) const {
  if (label < 1 || label > k_) return false;
  const int bit = label - 1;
  return (words()[bit / 64] >> (bit % 64)) & 1U;
}

int ConfidenceSet::cardinality() const noexcept {
  int count = 0;
  const std::uint64_t* w = words();
  for (std::size_t i = 0; i < word_count(); ++i) count += std::popcount(w[i]);
  return count;
}

std::vector<int> ConfidenceSet::labels() const {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(cardinality()));
  for (int k = 1; k <= k_; ++k)
    if (contains(k)) out.push_back(k);
  return out;
}

namespace {

void require_same_space(const ConfidenceSet& a, const ConfidenceSet& b) {
  if (a.k_classes() != b.k_classes())
    throw std::invalid_argument("confidence sets over different label spaces (K=" + std::to_string(a.k_classes()) +
                                " vs K=" + std::to_string(b.k_classes()) + ")");
}

}  // namespace

bool operator==(const ConfidenceSet& a, const ConfidenceSet& b) {
  if (a.k_ != b.k_) return false;
  const std::uint64_t* wa = a.words();
  const std::uint64_t* wb = b.words();
  for (std::size_t i = 0; i < a.word_count(); ++i)
    if (wa[i] != wb[i]) return false;
  return true;
}

int symmetric_difference_size(const ConfidenceSet& a, const ConfidenceSet& b) {
  require_same_space(a, b);
  int count = 0;
  const std::uint64_t* wa = a.words();
  const std::uint64_t* wb = b.words();
  for (std::size_t i = 0; i < a.word_count(); ++i) count += std::popcount(wa[i] ^ wb[i]);
  return count;
}

int intersection_size(const ConfidenceSet& a, const ConfidenceSet& b) {
  require_same_space(a, b);
  int count = 0;
  const std::uint64_t* wa = a.words();
  const std::uint64_t* wb = b.words();
  for (std::size_t i = 0; i < a.word_count(); ++i) count += std::popcount(wa[i] & wb[i]);
  return count;
}

LabeledDataset::LabeledDataset(Eigen::MatrixXd features, std::vector<int> labels, int k_classes)
    : features_(std::move(features)), labels_(std::move(labels)), space_(k_classes) {
  if (features_.rows() < 1) throw std::invalid_argument("labeled dataset needs n >= 1");
  if (features_.cols() < 1) throw std::invalid_argument("labeled dataset needs d >= 1");
  if (static_cast<std::size_t>(features_.rows()) != labels_.size())
    throw std::invalid_argument("feature rows (" + std::to_string(features_.rows()) + ") != label count (" +
                                std::to_string(labels_.size()) + ")");
  for (int y : labels_)
    if (!space_.contains(y)) throw std::invalid_argument("label " + std::to_string(y) + " outside [1, K]");
  if (!features_.allFinite()) throw std::invalid_argument("features contain NaN or inf");
}

LabeledDataset LabeledDataset::head(Index rows) const {
  if (rows < 1 || rows > size()) throw std::out_of_range("head: bad row count");
  return LabeledDataset(features_.topRows(rows), std::vector<int>(labels_.begin(), labels_.begin() + rows),
                        k_classes());
}

LabeledDataset LabeledDataset::tail(Index rows) const {
  if (rows < 1 || rows > size()) throw std::out_of_range("tail: bad row count");
  return LabeledDataset(features_.bottomRows(rows), std::vector<int>(labels_.end() - rows, labels_.end()),
                        k_classes());
}

UnlabeledDataset::UnlabeledDataset(Eigen::MatrixXd features, Index dim) : features_(std::move(features)), dim_(dim) {
  if (dim_ < 1) throw std::invalid_argument("unlabeled dataset needs d >= 1");
  if (features_.rows() == 0) features_.resize(0, dim_);
  if (features_.cols() != dim_) throw std::invalid_argument("unlabeled dataset: column count != dim");
  if (!features_.allFinite()) throw std::invalid_argument("features contain NaN or inf");
}

UnlabeledDataset::UnlabeledDataset(Eigen::MatrixXd features) : UnlabeledDataset(features, features.cols()) {}

UnlabeledDataset::UnlabeledDataset(const LabeledDataset& labeled)
    : features_(labeled.features()), dim_(labeled.dim()) {}

ScoreMatrix::ScoreMatrix(Eigen::MatrixXd values) : values_(std::move(values)) {
  if (!values_.allFinite()) throw std::invalid_argument("score matrix has non-finite entries");
}

ScoreMatrix ScoreMatrix::clipped() const { return ScoreMatrix(values_.cwiseMax(0.0).cwiseMin(1.0)); }

bool ScoreMatrix::in_unit_interval() const {
  return values_.size() == 0 || (values_.minCoeff() >= 0.0 && values_.maxCoeff() <= 1.0);
}

Eigen::MatrixXd stack_rows(const Eigen::MatrixXd& top, const Eigen::MatrixXd& bottom) {
  if (top.rows() > 0 && bottom.rows() > 0 && top.cols() != bottom.cols())
    throw std::invalid_argument("stack_rows: column mismatch");
  const Index cols = top.rows() > 0 ? top.cols() : bottom.cols();
  Eigen::MatrixXd out(top.rows() + bottom.rows(), cols);
  if (top.rows() > 0) out.topRows(top.rows()) = top;
  if (bottom.rows() > 0) out.bottomRows(bottom.rows()) = bottom;
  return out;
}

}  // namespace confset
