#include "confset/serialize.hpp"

#include "confset/random.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace confset {

namespace {

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw std::invalid_argument("expected a non-empty nested array");
  const auto rows = static_cast<Index>(j.size());
  const auto cols = static_cast<Index>(j.at(0).size());
  Eigen::MatrixXd m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const auto& row = j.at(static_cast<std::size_t>(i));
    if (static_cast<Index>(row.size()) != cols) throw std::invalid_argument("ragged matrix in JSON");
    for (Index c = 0; c < cols; ++c) m(i, c) = row.at(static_cast<std::size_t>(c)).get<double>();
  }
  return m;
}

}  // namespace

json to_json(const MixtureSpec& spec) {
  return {{"kind", "mixture"},
          {"k_classes", spec.k_classes},
          {"dim", spec.dim},
          {"seed_of_means", spec.seed_of_means},
          {"means", matrix_to_json(spec.means)}};
}

json to_json(const PathologySpec& spec) {
  return {{"kind", "pathology"}, {"beta", spec.beta}, {"k_classes", spec.k_classes}, {"dim", spec.dim},
          {"r1", spec.r1},       {"r2", spec.r2},     {"r3", spec.r3},               {"c_l", spec.c_l}};
}

json to_json(const Distribution& dist) {
  if (const auto* m = std::get_if<MixtureSpec>(&dist.variant())) return to_json(*m);
  if (const auto* p = std::get_if<PathologySpec>(&dist.variant())) return to_json(*p);
  const auto& data = std::get<EmpiricalSource>(dist.variant()).data;
  return {{"kind", "empirical"},
          {"k_classes", data.k_classes()},
          {"features", matrix_to_json(data.features())},
          {"labels", data.labels()}};
}

Distribution distribution_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "mixture") {
    MixtureSpec spec;
    spec.k_classes = j.at("k_classes").get<int>();
    spec.dim = j.at("dim").get<int>();
    spec.seed_of_means = j.value("seed_of_means", std::uint64_t{0});
    spec.means = matrix_from_json(j.at("means"));
    return Distribution(std::move(spec));
  }
  if (kind == "pathology") {
    PathologySpec spec;
    spec.beta = j.at("beta").get<int>();
    spec.k_classes = j.at("k_classes").get<int>();
    spec.dim = j.value("dim", spec.dim);
    spec.r1 = j.value("r1", spec.r1);
    spec.r2 = j.value("r2", spec.r2);
    spec.r3 = j.value("r3", spec.r3);
    spec.c_l = j.value("c_l", spec.c_l);
    return Distribution(spec);
  }
  if (kind == "empirical")
    return Distribution(EmpiricalSource{LabeledDataset(matrix_from_json(j.at("features")),
                                                       j.at("labels").get<std::vector<int>>(),
                                                       j.at("k_classes").get<int>())});
  throw std::invalid_argument("unknown distribution kind '" + kind + "'");
}

json to_json(const ProbModel& model) {
  const auto& v = model.variant();
  if (const auto* o = std::get_if<OraclePosteriorModel>(&v))
    return {{"kind", "oracle"}, {"distribution", to_json(o->dist)}};
  if (const auto* knn = std::get_if<KnnModel>(&v))
    return {{"kind", "knn"},
            {"k_classes", knn->k_classes},
            {"k_neighbors", knn->k_neighbors},
            {"features", matrix_to_json(knn->features)},
            {"labels", knn->labels}};
  return {{"kind", "softmax"}, {"weights", matrix_to_json(std::get<SoftmaxModel>(v).weights)}};
}

ProbModel model_from_json(const json& j) {
  switch (model_kind_from_string(j.at("kind").get<std::string>())) {
    case ModelKind::OraclePosterior:
      return make_oracle_model(distribution_from_json(j.at("distribution")));
    case ModelKind::Knn:
      return ProbModel(KnnModel{matrix_from_json(j.at("features")), j.at("labels").get<std::vector<int>>(),
                                j.at("k_classes").get<int>(), j.at("k_neighbors").get<int>()});
    case ModelKind::Softmax:
      return ProbModel(SoftmaxModel{matrix_from_json(j.at("weights"))});
  }
  throw std::invalid_argument("bad model kind");
}

json to_json(const ConfidenceRule& rule) {
  json j = {{"mode", rule.mode() == RuleMode::TopBeta ? "top_beta" : "threshold"},
            {"beta", rule.beta()},
            {"threshold", rule.threshold() ? json(rule.threshold()->value()) : json(nullptr)},
            {"model", to_json(rule.model())}};
  if (rule.perturb_seed()) j["perturb_seed"] = *rule.perturb_seed();
  return j;
}

ConfidenceRule rule_from_json(const json& j) {
  const std::string mode = j.at("mode").get<std::string>();
  auto model = std::make_shared<const ProbModel>(model_from_json(j.at("model")));
  const int beta = j.at("beta").get<int>();
  if (mode == "top_beta") return ConfidenceRule::top_beta(std::move(model), beta);
  if (mode != "threshold") throw std::invalid_argument("unknown rule mode '" + mode + "'");
  std::optional<std::uint64_t> seed;
  if (j.contains("perturb_seed")) seed = j.at("perturb_seed").get<std::uint64_t>();
  return ConfidenceRule::thresholded(std::move(model), beta, Threshold(j.at("threshold").get<double>()), seed);
}

json to_json(const RiskSample& s) {
  return {{"error", s.error},     {"info", s.info},
          {"hamming", s.hamming}, {"excess", s.excess},
          {"discrepancy", s.discrepancy}, {"test_size", s.test_size}};
}

json to_json(const EvalReport& r) {
  return {{"error_mean", r.error_mean},
          {"error_std", r.error_std},
          {"info_mean", r.info_mean},
          {"info_std", r.info_std},
          {"hamming_mean", r.hamming_mean},
          {"hamming_std", r.hamming_std},
          {"excess_mean", r.excess_mean},
          {"excess_std", r.excess_std},
          {"discrepancy_mean", r.discrepancy_mean},
          {"discrepancy_std", r.discrepancy_std},
          {"repetitions", r.repetitions},
          {"config_digest", r.config_digest},
          {"single_repetition", r.single_repetition}};
}

std::string digest_of(const json& j) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(j.dump())));
  return buf;
}

std::string rule_digest(const ConfidenceRule& rule) { return digest_of(to_json(rule)); }

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("malformed JSON in '" + path + "': " + e.what());
  }
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace confset
