#pragma once

#include "confset/distgen.hpp"
#include "confset/metrics.hpp"
#include "confset/probest.hpp"
#include "confset/rules.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace confset {

using json = nlohmann::json;

// Doubles are written by nlohmann::json with round-trip precision (17 significant
// digits), so every to_json / from_json pair below reproduces the object exactly.

json to_json(const MixtureSpec& spec);
json to_json(const PathologySpec& spec);
json to_json(const Distribution& dist);
Distribution distribution_from_json(const json& j);

/// {"kind": "oracle" | "knn" | "softmax", ...}; kNN stores its training data inline.
json to_json(const ProbModel& model);
ProbModel model_from_json(const json& j);

/// {"mode", "beta", "threshold", "model"[, "perturb_seed"]}.
json to_json(const ConfidenceRule& rule);
ConfidenceRule rule_from_json(const json& j);

json to_json(const RiskSample& s);
json to_json(const EvalReport& r);

/// FNV-1a of the compact JSON dump, as 16 hex digits.
std::string digest_of(const json& j);
std::string rule_digest(const ConfidenceRule& rule);

json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);

}  // namespace confset
