#pragma once

#include "confset/core.hpp"
#include "confset/distgen.hpp"
#include "confset/gfun.hpp"
#include "confset/rules.hpp"

#include <span>
#include <string>
#include <vector>

namespace confset {

/// One repetition's test-set estimates.
struct RiskSample {
  double error = 0.0;
  double info = 0.0;
  double hamming = 0.0;
  double excess = 0.0;
  double discrepancy = 0.0;
  Index test_size = 0;
};

/// Mean and (B - 1)-denominator standard deviation of each RiskSample field over B repetitions.
struct EvalReport {
  double error_mean = 0, error_std = 0;
  double info_mean = 0, info_std = 0;
  double hamming_mean = 0, hamming_std = 0;
  double excess_mean = 0, excess_std = 0;
  double discrepancy_mean = 0, discrepancy_std = 0;
  int repetitions = 0;
  std::string config_digest;
  /// Set when B = 1, where the standard deviations are reported as 0.
  bool single_repetition = false;
};

// Set-level estimators over precomputed per-point sets; the rule-level functions below
// compute the sets once and delegate here.
double error_of_sets(std::span<const ConfidenceSet> sets, const std::vector<int>& labels);
double info_of_sets(std::span<const ConfidenceSet> sets);
double hamming_of_sets(std::span<const ConfidenceSet> a, std::span<const ConfidenceSet> b);
/// (1/M) sum_i sum_k |p_k(X_i) - theta| 1{k in sets_i xor oracle_i}.
double excess_of_sets(std::span<const ConfidenceSet> sets, std::span<const ConfidenceSet> oracle_sets,
                      const Eigen::MatrixXd& posterior, double theta);
/// Oracle sets {k : p_k(x) >= theta} for exact posterior rows.
std::vector<ConfidenceSet> oracle_sets(const Eigen::MatrixXd& posterior, double theta);

double error_rate(const ConfidenceRule& rule, const LabeledDataset& test);
double information(const ConfidenceRule& rule, const UnlabeledDataset& test);
double hamming(const ConfidenceRule& a, const ConfidenceRule& b, const UnlabeledDataset& test);
/// error + theta * information on the same rows.
double risk_beta(const ConfidenceRule& rule, const LabeledDataset& test, Threshold theta);
/// Weighted symmetric difference to the exact-posterior oracle thresholded at theta_star.
double excess_risk(const ConfidenceRule& rule, const Distribution& dist, Threshold theta_star,
                   const UnlabeledDataset& test);
/// |error - oracle_error| + |beta - information|.
double discrepancy(const ConfidenceRule& rule, double oracle_error, int beta, const LabeledDataset& test);

/// Population error of the oracle at theta, estimated as the mean of 1 - sum_{k in set} p_k(X)
/// over exact-posterior rows (lower variance than counting labels).
double expected_error_of_oracle(const Eigen::MatrixXd& posterior, double theta);

/// Reference quantities for one distribution and beta, computed once per experiment.
struct OracleReference {
  int beta = 0;
  double theta = 0.0;
  double error = 0.0;
};

/// Every field of a RiskSample for `sets` on the shared test rows.
RiskSample risk_sample(std::span<const ConfidenceSet> sets, const LabeledDataset& test,
                       const Eigen::MatrixXd& test_posterior, const OracleReference& ref);

EvalReport aggregate(std::span<const RiskSample> samples);

}  // namespace confset
