#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "core/dataset.hpp"
#include "core/evaluation.hpp"
#include "core/recourse.hpp"
#include "core/risk_scoring.hpp"
#include "core/rule_models.hpp"
#include "core/rulelist_search.hpp"

namespace lucid {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Names needed to render and re-read models outside the training dataset.
struct ModelContext {
  std::vector<std::string> feature_names;
  std::string positive_label = "1";
  std::string negative_label = "0";

  static ModelContext of(const Dataset& ds);
  const std::string& label_name(int label) const { return label ? positive_label : negative_label; }
};

Json rational_json(const Rational& r);
Json objective_json(const ObjectiveValue& v);

// Rule lists, in the IF / ELSE IF / ELSE form.
std::string rulelist_text(const RuleList& model, const ModelContext& ctx);
Json rulelist_json(const RuleList& model, const ModelContext& ctx);
Json rulelist_json(const RuleList& model, const ModelContext& ctx, const ObjectiveValue& training);

Json dnf_json(const DnfModel& model, const ModelContext& ctx);
std::string dnf_text(const DnfModel& model, const ModelContext& ctx);

Json scoring_json(const ScoringSystem& model);

/// Reads any model document written above. Feature names in the document
/// must match `feature_names` when that list is non-empty.
AnyModel model_from_json(const Json& doc, const std::vector<std::string>& feature_names);
std::vector<std::string> feature_names_from_json(const Json& doc);

Json certificate_json(const Certificate& cert, const ModelContext& ctx, const SearchConfig& cfg);
std::string certificate_text(const Certificate& cert, const SearchConfig& cfg);
Json constrained_json(const ConstrainedCertificate& res, const ModelContext& ctx, const SearchConfig& cfg,
                      const FeatureConstraints& constraints);

Json rashomon_json(const RashomonSet& set, const ModelContext& ctx, const SearchConfig& cfg);
std::string rashomon_text(const RashomonSet& set, const ModelContext& ctx);

Json lattice_json(const LatticeCertificate& cert, const LatticeConfig& cfg);
std::string lattice_text(const LatticeCertificate& cert);

Json counterfactual_json(const Counterfactual& cf, const ModelContext& ctx);
Json confusion_json(const ConfusionReport& r);
Json comparison_json(const ComparisonReport& rep);

/// Drops every "wall_time_seconds" member, recursively.
Json without_timing(Json doc);

}  // namespace lucid
