#pragma once

#include "confset/distgen.hpp"
#include "confset/gfun.hpp"
#include "confset/metrics.hpp"
#include "confset/probest.hpp"
#include "confset/rules.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace confset {

inline constexpr const char* kLibraryVersion = "0.1.0";

namespace bench {

/// Paper43 fits p_hat on all of D_n and thresholds on D_N alone; Analyzed41 fits on the
/// first half of D_n and thresholds on the second half pooled with D_N.
enum class Protocol { Paper43, Analyzed41 };

enum class DistKind { Mixture, Pathology };

struct DistributionConfig {
  DistKind kind = DistKind::Mixture;
  int k_classes = 10;
  int dim = 10;
  int beta = 2;  // pathology only
};

struct ExperimentConfig {
  DistributionConfig distribution;
  std::vector<int> betas{2, 5};
  Index n = 1000;
  Index n_unlabeled = 10000;
  Index m = 1000;
  int reps = 20;
  ModelKind estimator = ModelKind::Softmax;
  std::optional<int> knn_k;
  SoftmaxHyper softmax;
  Protocol protocol = Protocol::Paper43;
  std::uint64_t master_seed = 0;
  double noise_std = kDefaultNoiseStd;
  Index mc_oracle_size = kDefaultMcSize;
  /// Worker count; does not change any result.
  int threads = 1;

  void validate() const;
};

std::string to_string(Protocol p);
Protocol protocol_from_string(const std::string& name);

nlohmann::json to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const nlohmann::json& j);
/// Digest of every field except `threads`.
std::string config_digest(const ExperimentConfig& cfg);

/// Seed of one repetition's stream for one purpose ("train", "unlabeled", "test", ...).
std::uint64_t rep_seed(const ExperimentConfig& cfg, int rep, const char* purpose);

/// The configured data-generating process. Mixture means come from the master seed.
Distribution make_distribution(const ExperimentConfig& cfg);
EstimatorConfig make_estimator(const ExperimentConfig& cfg, const Distribution& dist);

/// Population threshold and oracle error per beta from one Monte-Carlo sample.
std::vector<OracleReference> oracle_references(const Distribution& dist, const std::vector<int>& betas, Index mc_size,
                                               std::uint64_t seed);

struct ReportRow {
  std::string distribution;
  std::string rule;
  int beta = 0;
  Index n = 0;
  Index n_unlabeled = 0;
  Index m = 0;
  EvalReport report;
};

struct BenchReport {
  ExperimentConfig config;
  std::string digest;
  std::vector<OracleReference> references;
  std::vector<ReportRow> rows;
  double duration_seconds = 0.0;

  const ReportRow& row(const std::string& rule, int beta) const;
};

/// Per repetition: fresh D_N and D_M; the beta-oracle thresholds exact posteriors at the
/// generalized inverse of the empirical G of the (unperturbed) exact posteriors over D_N;
/// the top-beta oracle keeps the beta largest exact posteriors. Rules "oracle" and
/// "topbeta-oracle". noise_std is not used.
BenchReport run_oracle_table(const ExperimentConfig& cfg);

/// Per repetition: fresh D_n, D_N, D_M; one fitted model shared by the plug-in rule
/// ("sse") and the top-beta rule ("topbeta").
BenchReport run_plugin_table(const ExperimentConfig& cfg);

void write_csv(std::ostream& out, const BenchReport& report, bool header = true);
/// JSON mirror of the CSV with the full config, version and wall-clock duration.
nlohmann::json to_json(const BenchReport& report);

struct InconsistencyReport {
  int beta = 0;
  int k_classes = 0;
  Index m = 0;
  double theta_star = 0.0;
  double theta_oracle_rule = 0.0;
  double design_threshold = 0.0;
  double oracle_excess = 0.0;
  double best_topbeta_excess = 0.0;
  double oracle_info = 0.0;
  /// beta / (8 (beta + 1)^2)
  double analytic_bound = 0.0;
  /// (beta - 1) / (4 K)
  double uniform_bound = 0.0;
  bool topbeta_exceeds_half_bound = false;
  bool oracle_within_noise = false;
  double duration_seconds = 0.0;
};

inline constexpr double kOracleExcessNoise = 0.005;

/// Excess risk of the exact-posterior top-beta rule and of an independently fitted
/// Monte-Carlo oracle on the pathology fixture, both against theta_star.
InconsistencyReport run_inconsistency_experiment(const ExperimentConfig& cfg);
nlohmann::json to_json(const InconsistencyReport& r);

enum class SweepAxis { Labeled, Unlabeled };

struct SlopeFit {
  double slope = 0.0;
  double std_error = 0.0;
};

/// Ordinary least squares slope of log(y) against log(x).
SlopeFit fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

struct SweepPoint {
  Index n = 0;
  Index n_unlabeled = 0;
  double supervised_mean = 0.0;  // mean over reps of |beta - I_hat|
  double supervised_sem = 0.0;
  double semi_mean = 0.0;
  double semi_sem = 0.0;
};

struct RateSweepReport {
  SweepAxis axis = SweepAxis::Unlabeled;
  int beta = 0;
  std::vector<SweepPoint> points;
  /// Against log n (Labeled axis) or log N (Unlabeled axis).
  SlopeFit supervised;
  /// Against log(n + N).
  SlopeFit semi_supervised;
  double duration_seconds = 0.0;
};

/// For each grid value (n on the Labeled axis, N on the Unlabeled axis, the other size
/// fixed from cfg) and repetition, |beta - I_hat| of the supervised and semi-supervised
/// plug-in rules on a fresh test sample of size cfg.m. Uses cfg.betas.front().
RateSweepReport run_rate_sweep(const ExperimentConfig& cfg, SweepAxis axis, const std::vector<Index>& grid);
nlohmann::json to_json(const RateSweepReport& r);

}  // namespace bench
}  // namespace confset
