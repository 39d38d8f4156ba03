#include "confset/gfun.hpp"

#include "confset/distgen.hpp"
#include "confset/random.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

namespace confset {

Threshold::Threshold(double value) : value_(value) {
  if (!(value >= 0.0 && value <= 1.0)) throw std::invalid_argument("threshold must lie in [0, 1], got " + std::to_string(value));
}

EmpiricalG::EmpiricalG(const ScoreMatrix& scores) : m_points_(scores.points()), k_classes_(scores.k_classes()) {
  if (m_points_ < 1 || k_classes_ < 1) throw std::invalid_argument("empirical G needs a non-empty score matrix");
  if (!scores.in_unit_interval()) throw std::invalid_argument("empirical G needs scores in [0, 1]; clip first");
  const auto& v = scores.values();
  pooled_.assign(v.data(), v.data() + v.size());
  std::sort(pooled_.begin(), pooled_.end(), std::greater<>());
}

std::size_t EmpiricalG::count_above(double t) const {
  // Descending order: the values > t form a prefix.
  const auto it = std::partition_point(pooled_.begin(), pooled_.end(), [t](double v) { return v > t; });
  return static_cast<std::size_t>(it - pooled_.begin());
}

double EmpiricalG::evaluate(double t) const {
  return static_cast<double>(count_above(t)) / static_cast<double>(m_points_);
}

EmpiricalG build_empirical_g(const ScoreMatrix& scores) { return EmpiricalG(scores); }

Threshold generalized_inverse(const EmpiricalG& g, double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("generalized_inverse: beta must be positive");
  if (beta > g.k_classes()) throw std::invalid_argument("generalized_inverse: beta exceeds K");

  // Largest admissible count j with j / M <= beta, using the same division as evaluate().
  const auto m = static_cast<double>(g.m_points());
  const std::size_t total = g.pooled().size();
  auto admissible = [&](std::size_t j) { return static_cast<double>(j) / m <= beta; };
  auto j = static_cast<std::size_t>(std::min(std::floor(beta * m), static_cast<double>(total)));
  while (j < total && admissible(j + 1)) ++j;
  while (j > 0 && !admissible(j)) --j;

  // G_hat(v_{j+1}) counts at most j values, and any t below v_{j+1} counts at least j + 1.
  if (j >= total) return Threshold(0.0);
  return Threshold(g.pooled()[j]);
}

ScoreMatrix perturb_scores(const ScoreMatrix& scores, double noise_std, std::uint64_t seed) {
  if (!(noise_std >= 0.0)) throw std::invalid_argument("perturb_scores: noise_std must be nonnegative");
  if (noise_std == 0.0) return scores;
  Rng rng(seed);
  Eigen::MatrixXd out = scores.values();
  for (Index i = 0; i < out.rows(); ++i)
    for (Index k = 0; k < out.cols(); ++k) out(i, k) = std::clamp(out(i, k) + std::abs(noise_std * rng.normal()), 0.0, 1.0);
  return ScoreMatrix(std::move(out));
}

ScoreMatrix sample_posterior_scores(const Distribution& dist, Index mc_size, std::uint64_t seed) {
  if (!dist.has_exact_posterior()) throw std::invalid_argument("distribution '" + dist.name() + "' has no exact posterior");
  const UnlabeledDataset sample = dist.sample_unlabeled(mc_size, seed);
  constexpr Index chunk = 65536;
  Eigen::MatrixXd scores(mc_size, dist.k_classes());
  for (Index start = 0; start < mc_size; start += chunk) {
    const Index rows = std::min(chunk, mc_size - start);
    scores.middleRows(start, rows) = dist.posterior(sample.features().middleRows(start, rows));
  }
  return ScoreMatrix(std::move(scores)).clipped();
}

Threshold mc_true_threshold(const Distribution& dist, int beta, Index mc_size, std::uint64_t seed) {
  if (!dist.has_exact_posterior()) throw std::invalid_argument("distribution '" + dist.name() + "' has no exact posterior");
  if (mc_size < 1000) throw std::invalid_argument("mc_true_threshold: mc_size must be at least 1000");
  if (beta < 1 || beta > dist.k_classes()) throw std::invalid_argument("mc_true_threshold: beta outside [1, K]");
  return generalized_inverse(EmpiricalG(sample_posterior_scores(dist, mc_size, seed)), beta);
}

}  // namespace confset
