#pragma once

#include "confset/core.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace confset {

class Distribution;

/// A threshold on the score scale, always in [0, 1].
class Threshold {
 public:
  explicit Threshold(double value);
  double value() const noexcept { return value_; }
  friend bool operator==(const Threshold&, const Threshold&) = default;

 private:
  double value_;
};

/// Standard deviation of the half-normal tie-breaking noise: variance e^{-10}.
inline const double kDefaultNoiseStd = 0.006737946999085467;  // exp(-5)

/// Default Monte-Carlo sample size for the population threshold.
inline constexpr Index kDefaultMcSize = 1'000'000;

// Empirical version of G(t) = sum_k P(p_k(X) > t) over M scored points:
//   G_hat(t) = #{(i, k) : score(i, k) > t} / M.
// The M*K scores are pooled and sorted in decreasing order once, so evaluation
// is a binary search and the generalized inverse is an order statistic.
class EmpiricalG {
 public:
  explicit EmpiricalG(const ScoreMatrix& scores);

  /// G_hat(t); nonincreasing and right-continuous in t.
  double evaluate(double t) const;
  double operator()(double t) const { return evaluate(t); }
  /// #{pooled values > t}.
  std::size_t count_above(double t) const;

  Index m_points() const noexcept { return m_points_; }
  int k_classes() const noexcept { return k_classes_; }
  /// Pooled scores, descending.
  std::span<const double> pooled() const noexcept { return pooled_; }

 private:
  std::vector<double> pooled_;
  Index m_points_;
  int k_classes_;
};

EmpiricalG build_empirical_g(const ScoreMatrix& scores);

/// inf{t in [0, 1] : G_hat(t) <= beta}, for 0 < beta <= K. The result is one of the
/// pooled values or 0.
Threshold generalized_inverse(const EmpiricalG& g, double beta);

/// Adds |Z|, Z ~ N(0, noise_std^2), independently to every entry (row-major order)
/// and clips to [0, 1].
ScoreMatrix perturb_scores(const ScoreMatrix& scores, double noise_std, std::uint64_t seed);

/// Monte-Carlo stand-in for the population threshold G^{-1}(beta): the generalized
/// inverse of the empirical G built from exact posteriors of `mc_size` draws.
Threshold mc_true_threshold(const Distribution& dist, int beta, Index mc_size = kDefaultMcSize,
                            std::uint64_t seed = 0);

/// Exact-posterior scores of `mc_size` fresh draws, computed in chunks.
ScoreMatrix sample_posterior_scores(const Distribution& dist, Index mc_size, std::uint64_t seed);

}  // namespace confset
