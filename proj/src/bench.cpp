#include "confset/bench.hpp"

#include "confset/dataset_io.hpp"
#include "confset/random.hpp"
#include "confset/serialize.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace confset::bench {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Runs body(rep) for rep in [0, count) on up to `threads` workers. Each repetition
// writes only its own output slot, so results do not depend on scheduling.
void parallel_reps(int count, int threads, const std::function<void(int)>& body) {
  const int workers = std::max(1, std::min(threads, count));
  if (workers == 1) {
    for (int rep = 0; rep < count; ++rep) body(rep);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int rep = next++; rep < count; rep = next++) {
        try {
          body(rep);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

const OracleReference& reference_for(const std::vector<OracleReference>& refs, int beta) {
  for (const auto& r : refs)
    if (r.beta == beta) return r;
  throw std::logic_error("no oracle reference for beta " + std::to_string(beta));
}

}  // namespace

void ExperimentConfig::validate() const {
  if (distribution.k_classes < 2) throw std::invalid_argument("config: K >= 2 required");
  if (distribution.dim < 1) throw std::invalid_argument("config: d >= 1 required");
  if (betas.empty()) throw std::invalid_argument("config: at least one beta required");
  for (int b : betas)
    if (b < 1 || b > distribution.k_classes - 1)
      throw std::invalid_argument("config: beta " + std::to_string(b) + " outside [1, K - 1]");
  if (n < 1 || m < 1) throw std::invalid_argument("config: n and M must be >= 1");
  if (n_unlabeled < 0) throw std::invalid_argument("config: N must be >= 0");
  if (reps < 1) throw std::invalid_argument("config: reps must be >= 1");
  if (!(noise_std >= 0.0)) throw std::invalid_argument("config: noise_std must be >= 0");
  if (mc_oracle_size < 1000) throw std::invalid_argument("config: mc_oracle_size must be >= 1000");
  if (threads < 1) throw std::invalid_argument("config: threads must be >= 1");
  if (knn_k && *knn_k < 1) throw std::invalid_argument("config: knn_k must be >= 1");
}

std::string to_string(Protocol p) { return p == Protocol::Paper43 ? "paper43" : "analyzed41"; }

Protocol protocol_from_string(const std::string& name) {
  if (name == "paper43") return Protocol::Paper43;
  if (name == "analyzed41") return Protocol::Analyzed41;
  throw std::invalid_argument("unknown protocol '" + name + "'");
}

nlohmann::json to_json(const ExperimentConfig& cfg) {
  const auto& d = cfg.distribution;
  nlohmann::json dist = {{"kind", d.kind == DistKind::Mixture ? "mixture" : "pathology"},
                         {"k_classes", d.k_classes},
                         {"dim", d.dim}};
  if (d.kind == DistKind::Pathology) dist["beta"] = d.beta;
  return {{"distribution", dist},
          {"betas", cfg.betas},
          {"n", cfg.n},
          {"n_unlabeled", cfg.n_unlabeled},
          {"m", cfg.m},
          {"reps", cfg.reps},
          {"estimator", std::string(confset::to_string(cfg.estimator))},
          {"knn_k", cfg.knn_k ? nlohmann::json(*cfg.knn_k) : nlohmann::json(nullptr)},
          {"softmax", {{"l2", cfg.softmax.l2}, {"iters", cfg.softmax.iters}, {"step", cfg.softmax.step}}},
          {"protocol", to_string(cfg.protocol)},
          {"master_seed", cfg.master_seed},
          {"noise_std", cfg.noise_std},
          {"mc_oracle_size", cfg.mc_oracle_size},
          {"threads", cfg.threads}};
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig cfg;
  const auto& d = j.at("distribution");
  cfg.distribution.kind = d.at("kind").get<std::string>() == "pathology" ? DistKind::Pathology : DistKind::Mixture;
  cfg.distribution.k_classes = d.at("k_classes").get<int>();
  cfg.distribution.dim = d.at("dim").get<int>();
  cfg.distribution.beta = d.value("beta", cfg.distribution.beta);
  cfg.betas = j.at("betas").get<std::vector<int>>();
  cfg.n = j.at("n").get<Index>();
  cfg.n_unlabeled = j.at("n_unlabeled").get<Index>();
  cfg.m = j.at("m").get<Index>();
  cfg.reps = j.at("reps").get<int>();
  cfg.estimator = model_kind_from_string(j.at("estimator").get<std::string>());
  if (!j.at("knn_k").is_null()) cfg.knn_k = j.at("knn_k").get<int>();
  cfg.softmax.l2 = j.at("softmax").at("l2").get<double>();
  cfg.softmax.iters = j.at("softmax").at("iters").get<int>();
  cfg.softmax.step = j.at("softmax").at("step").get<double>();
  cfg.protocol = protocol_from_string(j.at("protocol").get<std::string>());
  cfg.master_seed = j.at("master_seed").get<std::uint64_t>();
  cfg.noise_std = j.at("noise_std").get<double>();
  cfg.mc_oracle_size = j.at("mc_oracle_size").get<Index>();
  cfg.threads = j.value("threads", 1);
  return cfg;
}

std::string config_digest(const ExperimentConfig& cfg) {
  auto j = to_json(cfg);
  j.erase("threads");
  return digest_of(j);
}

std::uint64_t rep_seed(const ExperimentConfig& cfg, int rep, const char* purpose) {
  return derive_seed(cfg.master_seed, static_cast<std::uint64_t>(rep), purpose);
}

Distribution make_distribution(const ExperimentConfig& cfg) {
  const auto& d = cfg.distribution;
  if (d.kind == DistKind::Mixture)
    return Distribution(sample_mixture_spec(d.k_classes, d.dim, derive_seed(cfg.master_seed, 0, "means")));
  PathologySpec spec;
  spec.beta = d.beta;
  spec.k_classes = d.k_classes;
  spec.dim = d.dim;
  return Distribution(spec);
}

EstimatorConfig make_estimator(const ExperimentConfig& cfg, const Distribution& dist) {
  switch (cfg.estimator) {
    case ModelKind::OraclePosterior: return OracleEstimator{dist};
    case ModelKind::Knn: return KnnEstimator{cfg.knn_k};
    case ModelKind::Softmax: return SoftmaxEstimator{cfg.softmax};
  }
  throw std::logic_error("bad estimator kind");
}

std::vector<OracleReference> oracle_references(const Distribution& dist, const std::vector<int>& betas, Index mc_size,
                                               std::uint64_t seed) {
  const ScoreMatrix scores = sample_posterior_scores(dist, mc_size, seed);
  const EmpiricalG g(scores);
  std::vector<OracleReference> refs;
  for (int beta : betas) {
    const double theta = generalized_inverse(g, beta).value();
    refs.push_back({beta, theta, expected_error_of_oracle(scores.values(), theta)});
  }
  return refs;
}

const ReportRow& BenchReport::row(const std::string& rule, int beta) const {
  for (const auto& r : rows)
    if (r.rule == rule && r.beta == beta) return r;
  throw std::out_of_range("no report row for rule '" + rule + "', beta " + std::to_string(beta));
}

namespace {

// samples[rule][beta index][rep]
using SampleGrid = std::vector<std::vector<std::vector<RiskSample>>>;

BenchReport assemble(const ExperimentConfig& cfg, const std::string& label, std::vector<OracleReference> refs, const std::vector<std::string>& rules,
                     const SampleGrid& samples, Index n, Clock::time_point start) {
  BenchReport report;
  report.config = cfg;
  report.digest = config_digest(cfg);
  report.references = std::move(refs);
  for (std::size_t b = 0; b < cfg.betas.size(); ++b)
    for (std::size_t r = 0; r < rules.size(); ++r) {
      ReportRow row{label, rules[r], cfg.betas[b], n, cfg.n_unlabeled, cfg.m,
                    aggregate(samples[r][b])};
      row.report.config_digest = report.digest;
      report.rows.push_back(std::move(row));
    }
  report.duration_seconds = seconds_since(start);
  return report;
}

SampleGrid make_grid(std::size_t rules, std::size_t betas, int reps) {
  return SampleGrid(rules, std::vector<std::vector<RiskSample>>(betas, std::vector<RiskSample>(static_cast<std::size_t>(reps))));
}

}  // namespace

BenchReport run_oracle_table(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.n_unlabeled < 1) throw std::invalid_argument("oracle table needs N >= 1");
  const auto start = Clock::now();
  const Distribution dist = make_distribution(cfg);
  auto refs = oracle_references(dist, cfg.betas, cfg.mc_oracle_size, derive_seed(cfg.master_seed, 0, "mc-oracle"));
  const auto model = std::make_shared<const ProbModel>(make_oracle_model(dist));

  SampleGrid samples = make_grid(2, cfg.betas.size(), cfg.reps);
  parallel_reps(cfg.reps, cfg.threads, [&](int rep) {
    const UnlabeledDataset pool = dist.sample_unlabeled(cfg.n_unlabeled, rep_seed(cfg, rep, "unlabeled"));
    const LabeledDataset test = dist.sample_labeled(cfg.m, rep_seed(cfg, rep, "test"));
    const EmpiricalG g(model->predict(pool.features()));
    const Eigen::MatrixXd test_posterior = dist.posterior(test.features());
    const ScoreMatrix test_scores = ScoreMatrix(test_posterior).clipped();
    for (std::size_t b = 0; b < cfg.betas.size(); ++b) {
      const int beta = cfg.betas[b];
      const auto& ref = reference_for(refs, beta);
      const auto oracle = ConfidenceRule::thresholded(model, beta, generalized_inverse(g, beta));
      const auto top = fit_top_beta(model, beta);
      samples[0][b][static_cast<std::size_t>(rep)] = risk_sample(oracle.sets_from_scores(test_scores), test, test_posterior, ref);
      samples[1][b][static_cast<std::size_t>(rep)] = risk_sample(top.sets_from_scores(test_scores), test, test_posterior, ref);
    }
  });
  return assemble(cfg, dist.name(), std::move(refs), {"oracle", "topbeta-oracle"}, samples, 0, start);
}

BenchReport run_plugin_table(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.protocol == Protocol::Paper43 && cfg.n_unlabeled < 1)
    throw std::invalid_argument("the paper43 protocol thresholds on D_N and needs N >= 1");
  if (cfg.protocol == Protocol::Analyzed41 && cfg.n < 2) throw std::invalid_argument("the analyzed41 protocol needs n >= 2");
  const auto start = Clock::now();
  const Distribution dist = make_distribution(cfg);
  const EstimatorConfig estimator = make_estimator(cfg, dist);
  auto refs = oracle_references(dist, cfg.betas, cfg.mc_oracle_size, derive_seed(cfg.master_seed, 0, "mc-oracle"));

  SampleGrid samples = make_grid(2, cfg.betas.size(), cfg.reps);
  parallel_reps(cfg.reps, cfg.threads, [&](int rep) {
    const LabeledDataset train = dist.sample_labeled(cfg.n, rep_seed(cfg, rep, "train"));
    const UnlabeledDataset unlabeled = dist.sample_unlabeled(cfg.n_unlabeled, rep_seed(cfg, rep, "unlabeled"));
    const LabeledDataset test = dist.sample_labeled(cfg.m, rep_seed(cfg, rep, "test"));
    const std::uint64_t perturb_seed = rep_seed(cfg, rep, "perturb");

    std::shared_ptr<const ProbModel> model;
    Eigen::MatrixXd pool;
    if (cfg.protocol == Protocol::Paper43) {
      model = std::make_shared<const ProbModel>(fit_model(estimator, train));
      pool = unlabeled.features();
    } else {
      const Index fit_rows = train.size() / 2;
      model = std::make_shared<const ProbModel>(fit_model(estimator, train.head(fit_rows)));
      pool = stack_rows(train.features().bottomRows(train.size() - fit_rows), unlabeled.features());
    }
    const EmpiricalG g(perturb_scores(model->predict(pool), cfg.noise_std, perturb_seed));
    const Eigen::MatrixXd test_posterior = dist.posterior(test.features());
    const ScoreMatrix test_scores = model->predict(test.features());
    for (std::size_t b = 0; b < cfg.betas.size(); ++b) {
      const int beta = cfg.betas[b];
      const auto& ref = reference_for(refs, beta);
      const auto plugin = ConfidenceRule::thresholded(model, beta, generalized_inverse(g, beta), perturb_seed);
      const auto top = fit_top_beta(model, beta);
      samples[0][b][static_cast<std::size_t>(rep)] = risk_sample(plugin.sets_from_scores(test_scores), test, test_posterior, ref);
      samples[1][b][static_cast<std::size_t>(rep)] = risk_sample(top.sets_from_scores(test_scores), test, test_posterior, ref);
    }
  });
  return assemble(cfg, dist.name(), std::move(refs), {"sse", "topbeta"}, samples, cfg.n, start);
}

void write_csv(std::ostream& out, const BenchReport& report, bool header) {
  if (header)
    out << "distribution,rule,beta,n,N,M,B,error_mean,error_std,info_mean,info_std,hamming_mean,hamming_std,"
         "excess_mean,excess_std,discrepancy_mean,discrepancy_std,seed,digest\n";
  for (const auto& row : report.rows) {
    const auto& r = row.report;
    out << row.distribution << ',' << row.rule << ',' << row.beta << ',' << row.n << ',' << row.n_unlabeled << ','
        << row.m << ',' << r.repetitions;
    for (double v : {r.error_mean, r.error_std, r.info_mean, r.info_std, r.hamming_mean, r.hamming_std, r.excess_mean,
                     r.excess_std, r.discrepancy_mean, r.discrepancy_std})
      out << ',' << format_double(v);
    out << ',' << report.config.master_seed << ',' << report.digest << '\n';
  }
}

nlohmann::json to_json(const BenchReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : report.rows) {
    nlohmann::json j = confset::to_json(row.report);
    j["distribution"] = row.distribution;
    j["rule"] = row.rule;
    j["beta"] = row.beta;
    j["n"] = row.n;
    j["N"] = row.n_unlabeled;
    j["M"] = row.m;
    j["seed"] = report.config.master_seed;
    j["library_version"] = kLibraryVersion;
    j["duration_seconds"] = report.duration_seconds;
    rows.push_back(std::move(j));
  }
  nlohmann::json refs = nlohmann::json::array();
  for (const auto& r : report.references) refs.push_back({{"beta", r.beta}, {"theta", r.theta}, {"oracle_error", r.error}});
  return {{"config", to_json(report.config)},
          {"config_digest", report.digest},
          {"library_version", kLibraryVersion},
          {"duration_seconds", report.duration_seconds},
          {"oracle_references", refs},
          {"rows", rows}};
}

InconsistencyReport run_inconsistency_experiment(const ExperimentConfig& cfg) {
  if (cfg.distribution.kind != DistKind::Pathology) throw std::invalid_argument("inconsistency experiment needs the pathology distribution");
  if (cfg.distribution.beta < 2) throw std::invalid_argument("inconsistency experiment needs beta >= 2");
  if (cfg.m < 1) throw std::invalid_argument("inconsistency experiment needs M >= 1");
  const auto start = Clock::now();
  const Distribution dist = make_distribution(cfg);
  const int beta = cfg.distribution.beta;

  const Threshold theta_star = mc_true_threshold(dist, beta, cfg.mc_oracle_size, derive_seed(cfg.master_seed, 0, "mc-oracle"));
  const ConfidenceRule oracle = fit_oracle(dist, beta, cfg.mc_oracle_size, derive_seed(cfg.master_seed, 0, "oracle-fit"));
  const ConfidenceRule top = fit_top_beta(oracle.model_ptr(), beta);
  const UnlabeledDataset test = dist.sample_unlabeled(cfg.m, derive_seed(cfg.master_seed, 0, "test"));

  InconsistencyReport r;
  r.beta = beta;
  r.k_classes = dist.k_classes();
  r.m = cfg.m;
  r.theta_star = theta_star.value();
  r.theta_oracle_rule = oracle.threshold()->value();
  r.design_threshold = std::get<PathologySpec>(dist.variant()).design_threshold();
  r.oracle_excess = excess_risk(oracle, dist, theta_star, test);
  r.best_topbeta_excess = excess_risk(top, dist, theta_star, test);
  r.oracle_info = information(oracle, test);
  r.analytic_bound = beta / (8.0 * (beta + 1) * (beta + 1));
  r.uniform_bound = (beta - 1) / (4.0 * r.k_classes);
  r.topbeta_exceeds_half_bound = r.best_topbeta_excess >= 0.5 * r.analytic_bound;
  r.oracle_within_noise = r.oracle_excess <= kOracleExcessNoise;
  r.duration_seconds = seconds_since(start);
  return r;
}

nlohmann::json to_json(const InconsistencyReport& r) {
  return {{"beta", r.beta},
          {"k_classes", r.k_classes},
          {"M", r.m},
          {"theta_star", r.theta_star},
          {"theta_oracle_rule", r.theta_oracle_rule},
          {"design_threshold", r.design_threshold},
          {"oracle_excess", r.oracle_excess},
          {"best_topbeta_excess", r.best_topbeta_excess},
          {"oracle_info", r.oracle_info},
          {"analytic_bound", r.analytic_bound},
          {"uniform_bound", r.uniform_bound},
          {"topbeta_exceeds_half_bound", r.topbeta_exceeds_half_bound},
          {"oracle_within_noise", r.oracle_within_noise},
          {"library_version", kLibraryVersion},
          {"duration_seconds", r.duration_seconds}};
}

SlopeFit fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 3) throw std::invalid_argument("slope fit needs at least 3 points");
  const auto n = static_cast<double>(x.size());
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0 && y[i] > 0.0)) throw std::invalid_argument("slope fit needs positive values");
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) mx += lx[i], my += ly[i];
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("slope fit needs distinct x values");
  SlopeFit fit;
  fit.slope = sxy / sxx;
  double rss = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double res = ly[i] - my - fit.slope * (lx[i] - mx);
    rss += res * res;
  }
  fit.std_error = std::sqrt(rss / (n - 2.0) / sxx);
  return fit;
}

RateSweepReport run_rate_sweep(const ExperimentConfig& cfg, SweepAxis axis, const std::vector<Index>& grid) {
  cfg.validate();
  if (grid.size() < 4) throw std::invalid_argument("rate sweep needs at least 4 grid points");
  const auto [lo, hi] = std::minmax_element(grid.begin(), grid.end());
  if (*lo < 1) throw std::invalid_argument("rate sweep grid values must be positive");
  if (static_cast<double>(*hi) < 100.0 * static_cast<double>(*lo))
    throw std::invalid_argument("rate sweep grid must span at least two decades");
  if (axis == SweepAxis::Labeled && *lo < 2) throw std::invalid_argument("rate sweep needs n >= 2");
  const auto start = Clock::now();
  const Distribution dist = make_distribution(cfg);
  const EstimatorConfig estimator = make_estimator(cfg, dist);
  const int beta = cfg.betas.front();

  const std::size_t points = grid.size();
  std::vector<std::vector<double>> sup(points, std::vector<double>(static_cast<std::size_t>(cfg.reps)));
  std::vector<std::vector<double>> semi = sup;

  parallel_reps(cfg.reps, cfg.threads, [&](int rep) {
    const UnlabeledDataset test = dist.sample_unlabeled(cfg.m, rep_seed(cfg, rep, "test"));
    FitConfig fit;
    fit.beta = beta;
    fit.estimator = estimator;
    fit.noise_std = cfg.noise_std;
    fit.seed = rep_seed(cfg, rep, "perturb");
    for (std::size_t p = 0; p < points; ++p) {
      const Index n = axis == SweepAxis::Labeled ? grid[p] : cfg.n;
      const Index big_n = axis == SweepAxis::Unlabeled ? grid[p] : cfg.n_unlabeled;
      const LabeledDataset train = dist.sample_labeled(n, rep_seed(cfg, rep, "train"));
      const UnlabeledDataset unlabeled = dist.sample_unlabeled(big_n, rep_seed(cfg, rep, "unlabeled"));
      const auto se = fit_supervised(train, fit);
      const ConfidenceRule sse = [&] {
        if (cfg.protocol == Protocol::Analyzed41) return fit_semi_supervised(train, unlabeled, fit);
        if (unlabeled.empty()) throw std::invalid_argument("paper43 protocol needs N >= 1");
        return fit_plugin(std::make_shared<const ProbModel>(fit_model(estimator, train)), unlabeled.features(), beta,
                          cfg.noise_std, fit.seed);
      }();
      sup[p][static_cast<std::size_t>(rep)] = std::abs(beta - information(se, test));
      semi[p][static_cast<std::size_t>(rep)] = std::abs(beta - information(sse, test));
    }
  });

  auto mean_sem = [](const std::vector<double>& v) {
    double mean = 0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0;
    for (double x : v) ss += (x - mean) * (x - mean);
    const double sem = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size())) : 0.0;
    return std::pair{mean, sem};
  };

  RateSweepReport report;
  report.axis = axis;
  report.beta = beta;
  std::vector<double> x_sup, x_semi, y_sup, y_semi;
  for (std::size_t p = 0; p < points; ++p) {
    SweepPoint pt;
    pt.n = axis == SweepAxis::Labeled ? grid[p] : cfg.n;
    pt.n_unlabeled = axis == SweepAxis::Unlabeled ? grid[p] : cfg.n_unlabeled;
    std::tie(pt.supervised_mean, pt.supervised_sem) = mean_sem(sup[p]);
    std::tie(pt.semi_mean, pt.semi_sem) = mean_sem(semi[p]);
    report.points.push_back(pt);
    x_sup.push_back(static_cast<double>(axis == SweepAxis::Labeled ? pt.n : pt.n_unlabeled));
    x_semi.push_back(static_cast<double>(pt.n + pt.n_unlabeled));
    y_sup.push_back(pt.supervised_mean);
    y_semi.push_back(pt.semi_mean);
  }
  report.supervised = fit_loglog_slope(x_sup, y_sup);
  report.semi_supervised = fit_loglog_slope(x_semi, y_semi);
  report.duration_seconds = seconds_since(start);
  return report;
}

nlohmann::json to_json(const RateSweepReport& r) {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : r.points)
    pts.push_back({{"n", p.n},
                   {"N", p.n_unlabeled},
                   {"supervised_mean_deviation", p.supervised_mean},
                   {"supervised_sem", p.supervised_sem},
                   {"semi_supervised_mean_deviation", p.semi_mean},
                   {"semi_supervised_sem", p.semi_sem}});
  return {{"axis", r.axis == SweepAxis::Labeled ? "n" : "N"},
          {"beta", r.beta},
          {"points", pts},
          {"supervised_slope", r.supervised.slope},
          {"supervised_slope_se", r.supervised.std_error},
          {"supervised_regressor", r.axis == SweepAxis::Labeled ? "log n" : "log N"},
          {"semi_supervised_slope", r.semi_supervised.slope},
          {"semi_supervised_slope_se", r.semi_supervised.std_error},
          {"semi_supervised_regressor", "log(n + N)"},
          {"library_version", kLibraryVersion},
          {"duration_seconds", r.duration_seconds}};
}

}  // namespace confset::bench
