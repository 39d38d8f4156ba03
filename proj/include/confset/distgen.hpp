#pragma once

#include "confset/core.hpp"

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>

namespace confset {

// Gaussian mixture benchmark: Y uniform on [K], X | Y = k ~ N(mu_k, I_d).
// Identity covariance and the uniform prior are fixed by the model.
struct MixtureSpec {
  int k_classes = 0;
  int dim = 0;
  Eigen::MatrixXd means;  // K x d, row k-1 is mu_k
  std::uint64_t seed_of_means = 0;

  void validate() const;
};

/// Means drawn i.i.d. uniform on [0, 4]^d from `seed`.
MixtureSpec sample_mixture_spec(int k_classes, int dim, std::uint64_t seed);

/// Posterior of the identity-covariance, uniform-prior mixture for every row of `x`:
/// a softmax over -||x - mu_k||^2 / 2, evaluated after subtracting the row maximum.
template <typename Derived>
Eigen::MatrixXd mixture_posterior(const Eigen::MatrixBase<Derived>& x, const MixtureSpec& spec) {
  if (x.cols() != spec.dim) throw std::invalid_argument("mixture_posterior: dimension mismatch");
  if (!x.allFinite()) throw std::invalid_argument("mixture_posterior: non-finite input");
  Eigen::MatrixXd logits(x.rows(), spec.k_classes);
  for (int k = 0; k < spec.k_classes; ++k)
    logits.col(k) = -0.5 * (x.rowwise() - spec.means.row(k)).rowwise().squaredNorm().transpose();
  const Eigen::VectorXd row_max = logits.rowwise().maxCoeff();
  Eigen::MatrixXd w = (logits.colwise() - row_max).array().exp().matrix();
  const Eigen::VectorXd total = w.rowwise().sum();
  w.array().colwise() /= total.array();
  return w;
}

/// Single-point form; returns the K posterior probabilities.
Eigen::VectorXd mixture_posterior_at(const Eigen::VectorXd& x, const MixtureSpec& spec);

LabeledDataset sample_labeled(const MixtureSpec& spec, Index n, std::uint64_t seed);
UnlabeledDataset sample_unlabeled(const MixtureSpec& spec, Index n, std::uint64_t seed);

// Distribution on B(0, r1) u D(r2, 2 r2) u D(r3, 2 r3) (D(r, r') = {r <= |x| <= r'})
// whose beta-oracle returns the beta + 1 leading classes on the ball and the middle
// annulus and nothing on the outer annulus, so no fixed-cardinality rule can match it.
struct PathologySpec {
  int beta = 2;
  int k_classes = 10;
  int dim = 2;
  double r1 = 0.1;
  double r2 = 1.0;
  double r3 = 3.0;
  double c_l = 1.0 / 16.0;

  void validate() const;

  /// Lebesgue measure of B(0, r1), which is also its probability mass (density 1).
  double inner_mass() const;
  double middle_mass() const { return static_cast<double>(beta) / (beta + 1) - inner_mass(); }
  double outer_mass() const { return 1.0 / (beta + 1); }
  /// The threshold the construction is designed around, 1 / (2 (beta + 1)).
  double design_threshold() const { return 0.5 / (beta + 1); }
};

enum class PathologyRegion { InnerBall, MiddleAnnulus, OuterAnnulus, OffSupport };

PathologyRegion pathology_region(const Eigen::VectorXd& x, const PathologySpec& spec);

/// Regression vector of the pathology fixture. Throws for x outside the support.
Eigen::VectorXd pathology_posterior(const Eigen::VectorXd& x, const PathologySpec& spec);
Eigen::MatrixXd pathology_posterior(const Eigen::MatrixXd& x, const PathologySpec& spec);

LabeledDataset sample_pathology(const PathologySpec& spec, Index n, std::uint64_t seed);

/// Bootstrap resampling of a fixed labeled sample. It can be sampled but has no
/// exact posterior.
struct EmpiricalSource {
  LabeledDataset data;
};

/// Data-generating process handle used by the fitting and benchmark layers.
class Distribution {
 public:
  using Variant = std::variant<MixtureSpec, PathologySpec, EmpiricalSource>;

  Distribution(MixtureSpec spec);
  Distribution(PathologySpec spec);
  Distribution(EmpiricalSource source);

  const Variant& variant() const noexcept { return v_; }
  int k_classes() const;
  Index dim() const;
  std::string name() const;
  bool has_exact_posterior() const noexcept { return !std::holds_alternative<EmpiricalSource>(v_); }

  LabeledDataset sample_labeled(Index n, std::uint64_t seed) const;
  UnlabeledDataset sample_unlabeled(Index n, std::uint64_t seed) const;
  /// Exact class posterior for every row. Throws when has_exact_posterior() is false.
  Eigen::MatrixXd posterior(const Eigen::MatrixXd& x) const;

 private:
  Variant v_;
};

}  // namespace confset
