#include "confset/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace confset {

namespace {

void require_nonempty(std::size_t m) {
  if (m == 0) throw std::invalid_argument("metric over an empty test set");
}

}  // namespace

double error_of_sets(std::span<const ConfidenceSet> sets, const std::vector<int>& labels) {
  require_nonempty(sets.size());
  if (sets.size() != labels.size()) throw std::invalid_argument("error: set count != label count");
  std::size_t missed = 0;
  for (std::size_t i = 0; i < sets.size(); ++i) missed += sets[i].contains(labels[i]) ? 0 : 1;
  return static_cast<double>(missed) / static_cast<double>(sets.size());
}

double info_of_sets(std::span<const ConfidenceSet> sets) {
  require_nonempty(sets.size());
  std::size_t total = 0;
  for (const auto& s : sets) total += static_cast<std::size_t>(s.cardinality());
  return static_cast<double>(total) / static_cast<double>(sets.size());
}

double hamming_of_sets(std::span<const ConfidenceSet> a, std::span<const ConfidenceSet> b) {
  require_nonempty(a.size());
  if (a.size() != b.size()) throw std::invalid_argument("hamming: set counts differ");
  std::size_t total = 0;
  for (std::size_t i = 0; i < a.size(); ++i) total += static_cast<std::size_t>(symmetric_difference_size(a[i], b[i]));
  return static_cast<double>(total) / static_cast<double>(a.size());
}

double excess_of_sets(std::span<const ConfidenceSet> sets, std::span<const ConfidenceSet> oracle,
                      const Eigen::MatrixXd& posterior, double theta) {
  require_nonempty(sets.size());
  if (sets.size() != oracle.size() || static_cast<Index>(sets.size()) != posterior.rows())
    throw std::invalid_argument("excess: row counts differ");
  double total = 0.0;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    if (sets[i].k_classes() != oracle[i].k_classes()) throw std::invalid_argument("excess: label spaces differ");
    for (int k = 1; k <= sets[i].k_classes(); ++k)
      if (sets[i].contains(k) != oracle[i].contains(k))
        total += std::abs(posterior(static_cast<Index>(i), k - 1) - theta);
  }
  return total / static_cast<double>(sets.size());
}

std::vector<ConfidenceSet> oracle_sets(const Eigen::MatrixXd& posterior, double theta) {
  std::vector<ConfidenceSet> out;
  out.reserve(static_cast<std::size_t>(posterior.rows()));
  for (Index i = 0; i < posterior.rows(); ++i) out.push_back(threshold_set(posterior.row(i), theta));
  return out;
}

double error_rate(const ConfidenceRule& rule, const LabeledDataset& test) {
  return error_of_sets(rule.predict_sets(test.features()), test.labels());
}

double information(const ConfidenceRule& rule, const UnlabeledDataset& test) {
  require_nonempty(static_cast<std::size_t>(test.size()));
  return info_of_sets(rule.predict_sets(test.features()));
}

double hamming(const ConfidenceRule& a, const ConfidenceRule& b, const UnlabeledDataset& test) {
  if (a.k_classes() != b.k_classes()) throw std::invalid_argument("hamming: rules over different label spaces");
  require_nonempty(static_cast<std::size_t>(test.size()));
  return hamming_of_sets(a.predict_sets(test.features()), b.predict_sets(test.features()));
}

double risk_beta(const ConfidenceRule& rule, const LabeledDataset& test, Threshold theta) {
  const auto sets = rule.predict_sets(test.features());
  return error_of_sets(sets, test.labels()) + theta.value() * info_of_sets(sets);
}

double excess_risk(const ConfidenceRule& rule, const Distribution& dist, Threshold theta_star,
                   const UnlabeledDataset& test) {
  if (!dist.has_exact_posterior()) throw std::invalid_argument("excess_risk needs an exact posterior");
  if (dist.k_classes() != rule.k_classes()) throw std::invalid_argument("excess_risk: label spaces differ");
  require_nonempty(static_cast<std::size_t>(test.size()));
  const Eigen::MatrixXd posterior = dist.posterior(test.features());
  const auto sets = rule.predict_sets(test.features());
  return excess_of_sets(sets, oracle_sets(posterior, theta_star.value()), posterior, theta_star.value());
}

double discrepancy(const ConfidenceRule& rule, double oracle_error, int beta, const LabeledDataset& test) {
  if (!(oracle_error >= 0.0 && oracle_error <= 1.0)) throw std::invalid_argument("discrepancy: oracle_error outside [0, 1]");
  const auto sets = rule.predict_sets(test.features());
  return std::abs(error_of_sets(sets, test.labels()) - oracle_error) + std::abs(beta - info_of_sets(sets));
}

double expected_error_of_oracle(const Eigen::MatrixXd& posterior, double theta) {
  if (posterior.rows() == 0) throw std::invalid_argument("expected_error_of_oracle: empty sample");
  double covered = 0.0;
  for (Index i = 0; i < posterior.rows(); ++i)
    for (Index k = 0; k < posterior.cols(); ++k)
      if (posterior(i, k) >= theta) covered += posterior(i, k);
  return 1.0 - covered / static_cast<double>(posterior.rows());
}

RiskSample risk_sample(std::span<const ConfidenceSet> sets, const LabeledDataset& test,
                       const Eigen::MatrixXd& test_posterior, const OracleReference& ref) {
  const auto oracle = oracle_sets(test_posterior, ref.theta);
  RiskSample s;
  s.test_size = test.size();
  s.error = error_of_sets(sets, test.labels());
  s.info = info_of_sets(sets);
  s.hamming = hamming_of_sets(sets, oracle);
  s.excess = excess_of_sets(sets, oracle, test_posterior, ref.theta);
  s.discrepancy = std::abs(s.error - ref.error) + std::abs(ref.beta - s.info);
  return s;
}

EvalReport aggregate(std::span<const RiskSample> samples) {
  if (samples.empty()) throw std::invalid_argument("aggregate: no samples");
  const auto b = static_cast<double>(samples.size());
  auto stats = [&](double RiskSample::*field, double& mean, double& sd) {
    double sum = 0.0;
    for (const auto& s : samples) sum += s.*field;
    mean = sum / b;
    double ss = 0.0;
    for (const auto& s : samples) ss += (s.*field - mean) * (s.*field - mean);
    sd = samples.size() > 1 ? std::sqrt(ss / (b - 1.0)) : 0.0;
  };
  EvalReport r;
  stats(&RiskSample::error, r.error_mean, r.error_std);
  stats(&RiskSample::info, r.info_mean, r.info_std);
  stats(&RiskSample::hamming, r.hamming_mean, r.hamming_std);
  stats(&RiskSample::excess, r.excess_mean, r.excess_std);
  stats(&RiskSample::discrepancy, r.discrepancy_mean, r.discrepancy_std);
  r.repetitions = static_cast<int>(samples.size());
  r.single_repetition = samples.size() == 1;
  return r;
}

}  // namespace confset
