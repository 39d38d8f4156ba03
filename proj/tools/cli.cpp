#include "cli.hpp"

#include "confset/bench.hpp"
#include "confset/dataset_io.hpp"
#include "confset/metrics.hpp"
#include "confset/random.hpp"
#include "confset/serialize.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace confset::cli {

namespace {

namespace fs = std::filesystem;

// Reads a flat JSON object whose keys are long flag names of the selected subcommand.
class JsonConfig : public CLI::Config {
 public:
  explicit JsonConfig(const CLI::App* root) : root_(root) {}

  std::string to_config(const CLI::App* app, bool, bool, std::string) const override;
  std::vector<CLI::ConfigItem> from_config(std::istream& in) const override;

 private:
  const CLI::App* root_;
};

json option_value(const CLI::Option& opt) {
  auto scalar = [](const std::string& s) -> json {
    if (json::accept(s)) {
      json v = json::parse(s);
      if (v.is_number() || v.is_boolean() || v.is_array()) return v;
    }
    return s;
  };
  if (opt.count() == 0) {
    const std::string d = opt.get_default_str();
    return d.empty() ? json(nullptr) : scalar(d);
  }
  const auto& results = opt.results();
  if (results.size() == 1 && opt.get_expected_max() <= 1) return scalar(results.front());
  json arr = json::array();
  for (const auto& r : results) arr.push_back(scalar(r));
  return arr;
}

json effective_config(const CLI::App& sub) {
  json j = json::object();
  for (const CLI::Option* opt : sub.get_options()) {
    if (opt->get_lnames().empty() || opt->get_lnames().front() == "help") continue;
    j[opt->get_lnames().front()] = option_value(*opt);
  }
  return j;
}

std::string JsonConfig::to_config(const CLI::App* app, bool, bool, std::string) const {
  json j = json::object();
  for (const CLI::App* sub : app->get_subcommands()) j = effective_config(*sub);
  return j.dump(2) + "\n";
}

std::vector<CLI::ConfigItem> JsonConfig::from_config(std::istream& in) const {
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw CLI::ConfigError(std::string("malformed config: ") + e.what());
  }
  if (!j.is_object()) throw CLI::ConfigError("config must be a JSON object of flag names");
  std::vector<std::string> parents;
  if (const auto subs = root_->get_subcommands(); !subs.empty()) parents.push_back(subs.front()->get_name());

  auto text = [](const std::string& key, const json& v) -> std::string {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number()) return v.dump();
    throw CLI::ConfigError("config key '" + key + "' must be a scalar or an array of scalars");
  };
  std::vector<CLI::ConfigItem> items;
  for (const auto& [key, value] : j.items()) {
    if (value.is_null()) continue;
    CLI::ConfigItem item;
    item.parents = parents;
    item.name = key;
    if (value.is_array())
      for (const auto& v : value) item.inputs.push_back(text(key, v));
    else
      item.inputs.push_back(text(key, value));
    items.push_back(std::move(item));
  }
  return items;
}

struct Context {
  std::ostream& out;
  std::ostream& err;
  int verbosity = 1;
  json invocation;

  void progress(const std::string& msg) const {
    if (verbosity > 0) err << msg << '\n';
  }
};

void with_output(const std::string& path, const Context& ctx, const std::function<void(std::ostream&)>& write) {
  if (path.empty() || path == "-") {
    write(ctx.out);
    return;
  }
  std::ofstream file(path);
  if (!file) throw std::runtime_error("cannot open '" + path + "' for writing");
  write(file);
  if (!file) throw std::runtime_error("write to '" + path + "' failed");
}

fs::path prepare_output_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw std::runtime_error("cannot create output directory '" + dir + "'");
  return fs::path(dir);
}

std::string seconds(double s) {
  std::ostringstream os;
  os.precision(3);
  os << s << "s";
  return os.str();
}

// gen ---------------------------------------------------------------------------------

struct GenOptions {
  std::string dist = "mixture";
  int k = 10;
  int d = 0;
  int beta = 2;
  Index n = 0;
  bool unlabeled = false;
  std::uint64_t seed = 0;
  std::uint64_t means_seed = 0;
  std::string spec_in;
  std::string spec_out;
  std::string out = "-";
};

Distribution distribution_for(const GenOptions& o) {
  if (!o.spec_in.empty()) return distribution_from_json(read_json_file(o.spec_in));
  if (o.dist == "mixture") return Distribution(sample_mixture_spec(o.k, o.d == 0 ? 10 : o.d, o.means_seed));
  PathologySpec spec;
  spec.beta = o.beta;
  spec.k_classes = o.k;
  if (o.d != 0) spec.dim = o.d;
  return Distribution(spec);
}

void run_gen(const GenOptions& o, const Context& ctx) {
  if (o.n < 1) throw std::invalid_argument("gen: --n must be >= 1");
  const Distribution dist = distribution_for(o);
  const std::uint64_t seed = derive_seed(o.seed, 0, "gen");
  if (!o.spec_out.empty()) {
    json spec = to_json(dist);
    spec["invocation"] = ctx.invocation;
    write_json_file(o.spec_out, spec);
  }
  with_output(o.out, ctx, [&](std::ostream& os) {
    if (o.unlabeled)
      write_csv(os, dist.sample_unlabeled(o.n, seed));
    else
      write_csv(os, dist.sample_labeled(o.n, seed));
  });
  ctx.progress("gen: " + std::to_string(o.n) + " rows from " + dist.name());
}

// fit ---------------------------------------------------------------------------------

struct FitOptions {
  std::string rule;
  int beta = 0;
  std::string train;
  std::string unlabeled;
  std::string spec;
  int k = 0;
  std::string estimator = "softmax";
  int knn_k = 0;
  SoftmaxHyper softmax;
  std::string protocol = "analyzed41";
  double noise_std = kDefaultNoiseStd;
  Index mc_size = kDefaultMcSize;
  std::uint64_t seed = 0;
  std::string out = "-";
};

std::optional<Distribution> optional_spec(const std::string& path) {
  if (path.empty()) return std::nullopt;
  return distribution_from_json(read_json_file(path));
}

EstimatorConfig estimator_for(const std::string& name, int knn_k, const SoftmaxHyper& hyper,
                              const std::optional<Distribution>& dist) {
  switch (model_kind_from_string(name)) {
    case ModelKind::OraclePosterior:
      if (!dist) throw std::invalid_argument("the oracle estimator needs --spec");
      return OracleEstimator{*dist};
    case ModelKind::Knn:
      return KnnEstimator{knn_k > 0 ? std::optional<int>(knn_k) : std::nullopt};
    case ModelKind::Softmax:
      return SoftmaxEstimator{hyper};
  }
  throw std::logic_error("bad estimator");
}

ConfidenceRule fit_rule(const FitOptions& o) {
  const auto dist = optional_spec(o.spec);
  const std::uint64_t perturb_seed = derive_seed(o.seed, 0, "perturb");
  if (o.rule == "oracle") {
    if (!dist) throw std::invalid_argument("--rule oracle needs --spec");
    return fit_oracle(*dist, o.beta, o.mc_size, perturb_seed);
  }
  if (o.train.empty()) throw std::invalid_argument("--rule " + o.rule + " needs --train");
  const int k = dist ? dist->k_classes() : o.k;
  const LabeledDataset train = read_labeled_csv(o.train, k);
  FitConfig cfg;
  cfg.beta = o.beta;
  cfg.estimator = estimator_for(o.estimator, o.knn_k, o.softmax, dist);
  cfg.noise_std = o.noise_std;
  cfg.seed = perturb_seed;
  if (o.rule == "topbeta") return fit_top_beta(std::make_shared<const ProbModel>(fit_model(cfg.estimator, train)), o.beta);
  if (o.rule == "se") return fit_supervised(train, cfg);
  if (o.unlabeled.empty()) throw std::invalid_argument("--rule sse needs --unlabeled");
  const UnlabeledDataset pool = read_unlabeled_csv(o.unlabeled);
  if (bench::protocol_from_string(o.protocol) == bench::Protocol::Analyzed41) return fit_semi_supervised(train, pool, cfg);
  if (pool.dim() != train.dim()) throw std::invalid_argument("train and unlabeled dimensions differ");
  return fit_plugin(std::make_shared<const ProbModel>(fit_model(cfg.estimator, train)), pool.features(), o.beta,
                    o.noise_std, perturb_seed);
}

void run_fit(const FitOptions& o, const Context& ctx) {
  const auto start = std::chrono::steady_clock::now();
  const ConfidenceRule rule = fit_rule(o);
  json j = to_json(rule);
  j["invocation"] = ctx.invocation;
  with_output(o.out, ctx, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
  std::string summary = "fit: " + o.rule + " rule, beta " + std::to_string(o.beta);
  if (rule.threshold()) summary += ", threshold " + format_double(rule.threshold()->value());
  ctx.progress(summary + " in " + seconds(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()));
}

// eval --------------------------------------------------------------------------------

struct EvalOptions {
  std::string rule;
  std::string test;
  std::string spec;
  Index mc_size = kDefaultMcSize;
  std::uint64_t seed = 0;
  std::string out = "-";
};

void run_eval(const EvalOptions& o, const Context& ctx) {
  const ConfidenceRule rule = rule_from_json(read_json_file(o.rule));
  const LabeledDataset test = read_labeled_csv(o.test, rule.k_classes());
  const auto sets = rule.predict_sets(test.features());
  json report = {{"rule", o.rule},
                 {"rule_digest", rule_digest(rule)},
                 {"mode", rule.mode() == RuleMode::TopBeta ? "top_beta" : "threshold"},
                 {"beta", rule.beta()},
                 {"threshold", rule.threshold() ? json(rule.threshold()->value()) : json(nullptr)},
                 {"test_size", test.size()},
                 {"error", error_of_sets(sets, test.labels())},
                 {"info", info_of_sets(sets)}};
  if (const auto dist = optional_spec(o.spec)) {
    if (!dist->has_exact_posterior()) throw std::invalid_argument("--spec must describe a distribution with an exact posterior");
    const Threshold theta = mc_true_threshold(*dist, rule.beta(), o.mc_size, derive_seed(o.seed, 0, "mc-oracle"));
    const Eigen::MatrixXd posterior = dist->posterior(test.features());
    const auto oracle = oracle_sets(posterior, theta.value());
    report["theta_star"] = theta.value();
    report["hamming"] = hamming_of_sets(sets, oracle);
    report["excess"] = excess_of_sets(sets, oracle, posterior, theta.value());
    report["oracle_error"] = error_of_sets(oracle, test.labels());
    report["oracle_info"] = info_of_sets(oracle);
  }
  report["invocation"] = ctx.invocation;
  with_output(o.out, ctx, [&](std::ostream& os) { os << report.dump(2) << '\n'; });
  ctx.progress("eval: error " + format_double(report["error"].get<double>()) + ", info " +
               format_double(report["info"].get<double>()) + " on " + std::to_string(test.size()) + " rows");
}

// bench-oracle / bench-plugin ---------------------------------------------------------

struct BenchOptions {
  bench::ExperimentConfig cfg;
  std::string estimator = "softmax";
  std::string protocol = "paper43";
  int knn_k = 0;
  std::string out;
  bool full = false;
};

std::vector<bench::ExperimentConfig> bench_grid(const BenchOptions& o, bool plugin) {
  bench::ExperimentConfig base = o.cfg;
  base.estimator = model_kind_from_string(o.estimator);
  base.protocol = bench::protocol_from_string(o.protocol);
  if (o.knn_k > 0) base.knn_k = o.knn_k;
  if (!o.full) return {base};

  std::vector<bench::ExperimentConfig> grid;
  for (int k : {10, 100}) {
    bench::ExperimentConfig c = base;
    c.distribution.k_classes = k;
    c.betas = k == 10 ? std::vector<int>{2, 5} : std::vector<int>{2, 5, 10, 20};
    if (k == 100) c.mc_oracle_size = std::min<Index>(c.mc_oracle_size, 100'000);
    if (!plugin) {
      grid.push_back(c);
      continue;
    }
    c.n = k == 10 ? 1000 : 10000;
    for (Index big_n : {Index{100}, Index{10000}}) {
      c.n_unlabeled = big_n;
      grid.push_back(c);
    }
  }
  return grid;
}

void run_bench(const BenchOptions& o, bool plugin, const std::string& name, const Context& ctx) {
  const auto grid = bench_grid(o, plugin);
  for (const auto& c : grid) c.validate();
  std::optional<fs::path> dir;
  if (!o.out.empty()) dir = prepare_output_dir(o.out);

  std::vector<bench::BenchReport> reports;
  for (const auto& c : grid) {
    ctx.progress(name + ": K=" + std::to_string(c.distribution.k_classes) + " n=" + std::to_string(c.n) +
                 " N=" + std::to_string(c.n_unlabeled) + " M=" + std::to_string(c.m) + " B=" + std::to_string(c.reps));
    reports.push_back(plugin ? bench::run_plugin_table(c) : bench::run_oracle_table(c));
    ctx.progress(name + ": done in " + seconds(reports.back().duration_seconds));
  }
  auto write_all = [&](std::ostream& os) {
    for (std::size_t i = 0; i < reports.size(); ++i) bench::write_csv(os, reports[i], i == 0);
  };
  if (!dir) {
    write_all(ctx.out);
    return;
  }
  with_output((*dir / (name + ".csv")).string(), ctx, write_all);
  json mirror = {{"invocation", ctx.invocation}, {"experiments", json::array()}};
  for (const auto& r : reports) mirror["experiments"].push_back(bench::to_json(r));
  write_json_file((*dir / (name + ".json")).string(), mirror);
  ctx.progress(name + ": wrote " + (*dir / (name + ".csv")).string());
}

// pathology ---------------------------------------------------------------------------

struct PathologyOptions {
  bench::ExperimentConfig cfg;
  std::string out;
};

void emit_json(const std::string& out_dir, const std::string& name, json j, const Context& ctx) {
  j["invocation"] = ctx.invocation;
  if (out_dir.empty()) {
    ctx.out << j.dump(2) << '\n';
    return;
  }
  const fs::path path = prepare_output_dir(out_dir) / (name + ".json");
  write_json_file(path.string(), j);
  ctx.progress(name + ": wrote " + path.string());
}

void run_pathology(const PathologyOptions& o, const Context& ctx) {
  bench::ExperimentConfig cfg = o.cfg;
  cfg.distribution.kind = bench::DistKind::Pathology;
  PathologySpec{cfg.distribution.beta, cfg.distribution.k_classes, cfg.distribution.dim}.validate();
  ctx.progress("pathology: beta=" + std::to_string(cfg.distribution.beta) + " K=" + std::to_string(cfg.distribution.k_classes) +
               " M=" + std::to_string(cfg.m));
  const auto report = bench::run_inconsistency_experiment(cfg);
  ctx.progress("pathology: top-beta excess " + format_double(report.best_topbeta_excess) + ", oracle excess " +
               format_double(report.oracle_excess) + " in " + seconds(report.duration_seconds));
  emit_json(o.out, "pathology", bench::to_json(report), ctx);
}

// ratesweep ---------------------------------------------------------------------------

struct SweepOptions {
  bench::ExperimentConfig cfg;
  std::string axis = "N";
  int beta = 2;
  std::vector<Index> grid{100, 1000, 10000, 100000};
  std::string estimator = "oracle";
  std::string protocol = "analyzed41";
  int knn_k = 0;
  std::string out;
};

void run_ratesweep(const SweepOptions& o, const Context& ctx) {
  bench::ExperimentConfig cfg = o.cfg;
  cfg.betas = {o.beta};
  cfg.estimator = model_kind_from_string(o.estimator);
  cfg.protocol = bench::protocol_from_string(o.protocol);
  if (o.knn_k > 0) cfg.knn_k = o.knn_k;
  const auto axis = o.axis == "n" ? bench::SweepAxis::Labeled : bench::SweepAxis::Unlabeled;
  ctx.progress("ratesweep: axis " + o.axis + ", " + std::to_string(o.grid.size()) + " grid points, B=" + std::to_string(cfg.reps));
  const auto report = bench::run_rate_sweep(cfg, axis, o.grid);
  ctx.progress("ratesweep: supervised slope " + format_double(report.supervised.slope) + ", semi-supervised slope " +
               format_double(report.semi_supervised.slope) + " in " + seconds(report.duration_seconds));
  emit_json(o.out, "ratesweep", bench::to_json(report), ctx);
}

// option wiring -----------------------------------------------------------------------

const std::vector<std::string> kEstimators{"oracle", "knn", "softmax"};
const std::vector<std::string> kProtocols{"paper43", "analyzed41"};

void add_seed(CLI::App* sub, std::uint64_t& seed) {
  sub->add_option("--seed", seed, "Master seed for all randomness")->envname("CONFSET_SEED");
}

void add_sizes(CLI::App* sub, bench::ExperimentConfig& c, bool labeled) {
  sub->add_option("--k", c.distribution.k_classes, "Number of classes K")->check(CLI::Range(2, 1 << 20));
  sub->add_option("--d", c.distribution.dim, "Feature dimension")->check(CLI::PositiveNumber);
  sub->add_option("--betas", c.betas, "Comma-separated target set sizes")->delimiter(',');
  if (labeled) sub->add_option("--n", c.n, "Labeled sample size");
  sub->add_option("--n-unlabeled", c.n_unlabeled, "Unlabeled sample size N");
  sub->add_option("--m", c.m, "Test sample size M");
  sub->add_option("--reps", c.reps, "Repetitions B");
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Confidence-set classification with controlled expected set size", "confset"};
  app.option_defaults()->always_capture_default();
  app.config_formatter(std::make_shared<JsonConfig>(&app));
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.fallthrough();
  app.require_subcommand(1);
  app.set_config("--config", "", "JSON file of flag-name keys; flags on the command line take precedence");
  app.set_version_flag("--version", kLibraryVersion);
  int verbose = 0;
  bool quiet = false;
  app.add_flag("-v,--verbose", verbose, "More progress output on stderr");
  app.add_flag("-q,--quiet", quiet, "No progress output");

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "Sample a dataset as CSV");
  gen_cmd->add_option("--dist", gen.dist, "Data-generating process")->check(CLI::IsMember({"mixture", "pathology"}));
  gen_cmd->add_option("--k", gen.k, "Number of classes K")->check(CLI::Range(2, 1 << 20));
  gen_cmd->add_option("--d", gen.d, "Feature dimension; 0 picks 10 for mixture, 2 for pathology")->check(CLI::NonNegativeNumber);
  gen_cmd->add_option("--beta", gen.beta, "Pathology target set size");
  gen_cmd->add_option("--n", gen.n, "Number of rows")->required();
  gen_cmd->add_flag("--unlabeled", gen.unlabeled, "Omit the y column");
  add_seed(gen_cmd, gen.seed);
  gen_cmd->add_option("--means-seed", gen.means_seed, "Seed of the mixture means; files sharing it share the mixture");
  gen_cmd->add_option("--spec", gen.spec_in, "Read the distribution from a JSON spec instead")->check(CLI::ExistingFile);
  gen_cmd->add_option("--spec-out", gen.spec_out, "Write the distribution spec as JSON");
  gen_cmd->add_option("-o,--out", gen.out, "Output CSV path, - for stdout");

  FitOptions fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit a confidence-set rule and write it as JSON");
  fit_cmd->add_option("--rule", fit.rule, "Rule type")->required()->check(CLI::IsMember({"sse", "se", "topbeta", "oracle"}));
  fit_cmd->add_option("--beta", fit.beta, "Target expected set size")->required();
  fit_cmd->add_option("--train", fit.train, "Labeled CSV")->check(CLI::ExistingFile);
  fit_cmd->add_option("--unlabeled", fit.unlabeled, "Unlabeled CSV for the sse rule")->check(CLI::ExistingFile);
  fit_cmd->add_option("--spec", fit.spec, "Distribution spec JSON for oracle rules and estimators")->check(CLI::ExistingFile);
  fit_cmd->add_option("--k", fit.k, "Number of classes; 0 infers from the labels");
  fit_cmd->add_option("--estimator", fit.estimator, "Probability estimator")->check(CLI::IsMember(kEstimators));
  fit_cmd->add_option("--knn-k", fit.knn_k, "Neighbours for knn; 0 uses ceil(sqrt(n))");
  fit_cmd->add_option("--l2", fit.softmax.l2, "Softmax L2 penalty");
  fit_cmd->add_option("--iters", fit.softmax.iters, "Softmax gradient steps");
  fit_cmd->add_option("--step", fit.softmax.step, "Softmax step size");
  fit_cmd->add_option("--protocol", fit.protocol, "sse pipeline")->check(CLI::IsMember(kProtocols));
  fit_cmd->add_option("--noise-std", fit.noise_std, "Tie-breaking noise standard deviation")->default_str(format_double(kDefaultNoiseStd));
  fit_cmd->add_option("--mc-size", fit.mc_size, "Monte-Carlo size for the oracle rule");
  add_seed(fit_cmd, fit.seed);
  fit_cmd->add_option("-o,--out", fit.out, "Output JSON path, - for stdout");

  EvalOptions eval;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a fitted rule on a labeled CSV");
  eval_cmd->add_option("--rule", eval.rule, "Rule JSON")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--test", eval.test, "Labeled test CSV")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--spec", eval.spec, "Distribution spec JSON; adds excess and Hamming risk")->check(CLI::ExistingFile);
  eval_cmd->add_option("--mc-size", eval.mc_size, "Monte-Carlo size for the population threshold");
  add_seed(eval_cmd, eval.seed);
  eval_cmd->add_option("-o,--out", eval.out, "Output JSON path, - for stdout");

  BenchOptions bo;
  auto* bo_cmd = app.add_subcommand("bench-oracle", "Oracle and top-beta oracle tables on the Gaussian mixture");
  add_sizes(bo_cmd, bo.cfg, false);
  bo_cmd->add_option("--noise-std", bo.cfg.noise_std, "Tie-breaking noise standard deviation")->default_str(format_double(kDefaultNoiseStd));
  bo_cmd->add_option("--mc-size", bo.cfg.mc_oracle_size, "Monte-Carlo size for reference thresholds");
  add_seed(bo_cmd, bo.cfg.master_seed);
  bo_cmd->add_option("--threads", bo.cfg.threads, "Worker threads")->check(CLI::PositiveNumber);
  bo_cmd->add_option("--out", bo.out, "Output directory for CSV and JSON; stdout CSV if omitted");
  bo_cmd->add_flag("--full", bo.full, "Run K=10 and K=100");

  BenchOptions bp;
  auto* bp_cmd = app.add_subcommand("bench-plugin", "Plug-in and top-beta tables with a fitted estimator");
  add_sizes(bp_cmd, bp.cfg, true);
  bp_cmd->add_option("--estimator", bp.estimator, "Probability estimator")->check(CLI::IsMember(kEstimators));
  bp_cmd->add_option("--knn-k", bp.knn_k, "Neighbours for knn; 0 uses ceil(sqrt(n))");
  bp_cmd->add_option("--protocol", bp.protocol, "Fitting pipeline")->check(CLI::IsMember(kProtocols));
  bp_cmd->add_option("--noise-std", bp.cfg.noise_std, "Tie-breaking noise standard deviation")->default_str(format_double(kDefaultNoiseStd));
  add_seed(bp_cmd, bp.cfg.master_seed);
  bp_cmd->add_option("--threads", bp.cfg.threads, "Worker threads")->check(CLI::PositiveNumber);
  bp_cmd->add_option("--out", bp.out, "Output directory for CSV and JSON; stdout CSV if omitted");
  bp_cmd->add_flag("--full", bp.full, "Run K=10 (n=1000) and K=100 (n=10000), each at N=100 and N=10000");

  PathologyOptions po;
  po.cfg.distribution = {bench::DistKind::Pathology, 10, 2, 2};
  po.cfg.m = 100'000;
  auto* po_cmd = app.add_subcommand("pathology", "Top-beta inconsistency experiment on the pathological fixture");
  po_cmd->add_option("--beta", po.cfg.distribution.beta, "Target set size, at least 2");
  po_cmd->add_option("--k", po.cfg.distribution.k_classes, "Number of classes K");
  po_cmd->add_option("--d", po.cfg.distribution.dim, "Feature dimension")->check(CLI::PositiveNumber);
  po_cmd->add_option("--m", po.cfg.m, "Test sample size M");
  po_cmd->add_option("--mc-size", po.cfg.mc_oracle_size, "Monte-Carlo size for the thresholds");
  add_seed(po_cmd, po.cfg.master_seed);
  po_cmd->add_option("--out", po.out, "Output directory; stdout JSON if omitted");

  SweepOptions so;
  so.cfg.n_unlabeled = 0;
  so.cfg.m = 100'000;
  so.cfg.reps = 40;
  auto* so_cmd = app.add_subcommand("ratesweep", "Deviation |beta - info| against n or N, with log-log slopes");
  so_cmd->add_option("--axis", so.axis, "Swept size: N (unlabeled) or n (labeled)")->check(CLI::IsMember({"N", "n"}));
  so_cmd->add_option("--grid", so.grid, "Comma-separated sizes, at least 4 spanning two decades")->delimiter(',');
  so_cmd->add_option("--beta", so.beta, "Target set size");
  so_cmd->add_option("--k", so.cfg.distribution.k_classes, "Number of classes K")->check(CLI::Range(2, 1 << 20));
  so_cmd->add_option("--d", so.cfg.distribution.dim, "Feature dimension")->check(CLI::PositiveNumber);
  so_cmd->add_option("--n", so.cfg.n, "Labeled size when sweeping N");
  so_cmd->add_option("--n-unlabeled", so.cfg.n_unlabeled, "Unlabeled size when sweeping n");
  so_cmd->add_option("--m", so.cfg.m, "Test sample size M");
  so_cmd->add_option("--reps", so.cfg.reps, "Repetitions B");
  so_cmd->add_option("--estimator", so.estimator, "Probability estimator")->check(CLI::IsMember(kEstimators));
  so_cmd->add_option("--knn-k", so.knn_k, "Neighbours for knn; 0 uses ceil(sqrt(n))");
  so_cmd->add_option("--protocol", so.protocol, "Fitting pipeline")->check(CLI::IsMember(kProtocols));
  so_cmd->add_option("--noise-std", so.cfg.noise_std, "Tie-breaking noise standard deviation")->default_str(format_double(kDefaultNoiseStd));
  add_seed(so_cmd, so.cfg.master_seed);
  so_cmd->add_option("--threads", so.cfg.threads, "Worker threads")->check(CLI::PositiveNumber);
  so_cmd->add_option("--out", so.out, "Output directory; stdout JSON if omitted");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const CLI::App* sub = app.get_subcommands().front();
  Context ctx{out, err, quiet ? 0 : 1 + verbose, effective_config(*sub)};
  try {
    const std::string name = sub->get_name();
    if (name == "gen") run_gen(gen, ctx);
    else if (name == "fit") run_fit(fit, ctx);
    else if (name == "eval") run_eval(eval, ctx);
    else if (name == "bench-oracle") run_bench(bo, false, name, ctx);
    else if (name == "bench-plugin") run_bench(bp, true, name, ctx);
    else if (name == "pathology") run_pathology(po, ctx);
    else run_ratesweep(so, ctx);
  } catch (const std::invalid_argument& e) {
    err << "confset: " << e.what() << '\n';
    return kExitUsage;
  } catch (const json::exception& e) {
    err << "confset: malformed input: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "confset: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

int dispatch(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return dispatch(args, std::cout, std::cerr);
}

}  // namespace confset::cli
