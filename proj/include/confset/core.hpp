#pragma once

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <initializer_list>
#include <vector>

namespace confset {

using Index = Eigen::Index;

/// Label set [K] = {1, ..., K}. Labels are 1-based at every public boundary.
class LabelSpace {
 public:
  explicit LabelSpace(int k_classes);

  int k_classes() const noexcept { return k_; }
  bool contains(int label) const noexcept { return label >= 1 && label <= k_; }

  friend bool operator==(const LabelSpace&, const LabelSpace&) = default;

 private:
  int k_;
};

/// Subset of [K] stored as a bitmask. Two inline words cover K <= 128;
/// larger label spaces spill into a heap-allocated word vector.
class ConfidenceSet {
 public:
  explicit ConfidenceSet(int k_classes);
  ConfidenceSet(int k_classes, std::initializer_list<int> labels);

  static ConfidenceSet full(int k_classes);

  void insert(int label);
  bool contains(int label) const;
  int cardinality() const noexcept;
  bool empty() const noexcept { return cardinality() == 0; }
  int k_classes() const noexcept { return k_; }
  /// Members in increasing order, 1-based.
  std::vector<int> labels() const;

  friend bool operator==(const ConfidenceSet& a, const ConfidenceSet& b);
  friend int symmetric_difference_size(const ConfidenceSet& a, const ConfidenceSet& b);
  friend int intersection_size(const ConfidenceSet& a, const ConfidenceSet& b);

 private:
  static constexpr int kInlineBits = 128;

  const std::uint64_t* words() const noexcept { return heap_.empty() ? inline_.data() : heap_.data(); }
  std::uint64_t* words() noexcept { return heap_.empty() ? inline_.data() : heap_.data(); }
  std::size_t word_count() const noexcept { return heap_.empty() ? inline_.size() : heap_.size(); }

  int k_;
  std::array<std::uint64_t, 2> inline_{};
  std::vector<std::uint64_t> heap_;
};

inline int confidence_set_cardinality(const ConfidenceSet& s) { return s.cardinality(); }

/// n labeled observations (X_i, Y_i), features stored row-wise.
class LabeledDataset {
 public:
  LabeledDataset(Eigen::MatrixXd features, std::vector<int> labels, int k_classes);

  Index size() const noexcept { return features_.rows(); }
  Index dim() const noexcept { return features_.cols(); }
  int k_classes() const noexcept { return space_.k_classes(); }
  const LabelSpace& label_space() const noexcept { return space_; }
  const Eigen::MatrixXd& features() const noexcept { return features_; }
  const std::vector<int>& labels() const noexcept { return labels_; }

  /// First `rows` observations.
  LabeledDataset head(Index rows) const;
  /// Last `rows` observations.
  LabeledDataset tail(Index rows) const;

 private:
  Eigen::MatrixXd features_;
  std::vector<int> labels_;
  LabelSpace space_;
};

/// N unlabeled feature vectors. N = 0 is legal; the dimension is kept anyway.
class UnlabeledDataset {
 public:
  UnlabeledDataset(Eigen::MatrixXd features, Index dim);
  explicit UnlabeledDataset(Eigen::MatrixXd features);
  explicit UnlabeledDataset(const LabeledDataset& labeled);

  Index size() const noexcept { return features_.rows(); }
  Index dim() const noexcept { return dim_; }
  bool empty() const noexcept { return size() == 0; }
  const Eigen::MatrixXd& features() const noexcept { return features_; }

 private:
  Eigen::MatrixXd features_;
  Index dim_;
};

/// M x K class scores, row i holding the K scores of point i.
class ScoreMatrix {
 public:
  explicit ScoreMatrix(Eigen::MatrixXd values);

  Index points() const noexcept { return values_.rows(); }
  int k_classes() const noexcept { return static_cast<int>(values_.cols()); }
  const Eigen::MatrixXd& values() const noexcept { return values_; }
  double operator()(Index i, int k) const { return values_(i, k); }

  ScoreMatrix clipped() const;
  bool in_unit_interval() const;

 private:
  Eigen::MatrixXd values_;
};

/// Vertically stacks two feature blocks with the same column count.
Eigen::MatrixXd stack_rows(const Eigen::MatrixXd& top, const Eigen::MatrixXd& bottom);

}  // namespace confset
