#include "core/export.hpp"

#include <cstdio>
#include <sstream>

#include "core/error.hpp"

namespace lucid {

ModelContext ModelContext::of(const Dataset& ds) {
  ModelContext ctx;
  for (const auto& f : ds.features()) ctx.feature_names.push_back(f.name);
  ctx.positive_label = ds.label_name(1);
  ctx.negative_label = ds.label_name(0);
  return ctx;
}

Json rational_json(const Rational& r) {
  return Json{{"fraction", r.str()}, {"decimal", r.to_double()}};
}

Json objective_json(const ObjectiveValue& v) {
  return Json{{"value", rational_json(v.value())}, {"errors", v.errors}, {"size", v.size}, {"n", v.n},
              {"lambda", v.lambda.str()}};
}

namespace {

const std::string& feature_name(const ModelContext& ctx, std::uint32_t j) {
  if (j >= ctx.feature_names.size()) fail(ErrorKind::kArgument, "model references an unknown feature index");
  return ctx.feature_names[j];
}

std::string conjunction_text(const Conjunction& c, const ModelContext& ctx) {
  std::string out;
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (k) out += " and ";
    if (!c[k].value) out += "not ";
    out += feature_name(ctx, c[k].feature);
  }
  return out;
}

Json conditions_json(const Conjunction& c, const ModelContext& ctx) {
  Json arr = Json::array();
  for (const auto& cond : c) {
    arr.push_back(Json{{"feature", feature_name(ctx, cond.feature)}, {"index", cond.feature}, {"value", cond.value ? 1 : 0}});
  }
  return arr;
}

Json header(const char* kind) { return Json{{"schema_version", kSchemaVersion}, {"kind", kind}}; }

Json features_json(const ModelContext& ctx) { return Json(ctx.feature_names); }

Conjunction conditions_from_json(const Json& arr, const std::vector<std::string>& doc_names,
                                 const std::vector<std::string>& names) {
  Conjunction out;
  for (const auto& c : arr) {
    auto idx = c.at("index").get<std::uint32_t>();
    auto name = c.at("feature").get<std::string>();
    if (!names.empty() && (idx >= names.size() || names[idx] != name)) {
      fail(ErrorKind::kInput, "model feature '" + name + "' does not match the dataset features");
    }
    if (!doc_names.empty() && (idx >= doc_names.size() || doc_names[idx] != name)) {
      fail(ErrorKind::kInput, "model feature '" + name + "' does not match the model's feature list");
    }
    int v = c.at("value").get<int>();
    if (v != 0 && v != 1) fail(ErrorKind::kInput, "condition value must be 0 or 1");
    out.push_back({idx, v == 1});
  }
  return out;
}

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

}  // namespace

std::string rulelist_text(const RuleList& model, const ModelContext& ctx) {
  std::ostringstream os;
  auto rules = model.rules();
  for (std::size_t k = 0; k < rules.size(); ++k) {
    os << (k == 0 ? "IF " : "ELSE IF ") << conjunction_text(rules[k].conditions, ctx) << " THEN predict "
       << ctx.label_name(rules[k].prediction) << "\n";
  }
  os << (rules.empty() ? "predict " : "ELSE predict ") << ctx.label_name(model.default_prediction()) << "\n";
  return os.str();
}

Json rulelist_json(const RuleList& model, const ModelContext& ctx) {
  Json doc = header("rule_list");
  doc["features"] = features_json(ctx);
  doc["labels"] = Json{{"0", ctx.negative_label}, {"1", ctx.positive_label}};
  Json rules = Json::array();
  for (const auto& r : model.rules()) {
    rules.push_back(Json{{"conditions", conditions_json(r.conditions, ctx)}, {"prediction", r.prediction}});
  }
  doc["rules"] = rules;
  doc["default_prediction"] = model.default_prediction();
  doc["text"] = rulelist_text(model, ctx);
  return doc;
}

Json rulelist_json(const RuleList& model, const ModelContext& ctx, const ObjectiveValue& training) {
  Json doc = rulelist_json(model, ctx);
  doc["lambda"] = training.lambda.str();
  doc["training_objective"] = objective_json(training);
  return doc;
}

Json dnf_json(const DnfModel& model, const ModelContext& ctx) {
  Json doc = header("dnf");
  doc["features"] = features_json(ctx);
  Json conj = Json::array();
  for (const auto& c : model.conjunctions()) conj.push_back(conditions_json(c, ctx));
  doc["conjunctions"] = conj;
  doc["text"] = dnf_text(model, ctx);
  return doc;
}

std::string dnf_text(const DnfModel& model, const ModelContext& ctx) {
  auto conj = model.conjunctions();
  if (conj.empty()) return "predict " + ctx.label_name(0) + "\n";
  std::string out = "predict " + ctx.label_name(1) + " IF\n";
  for (std::size_t k = 0; k < conj.size(); ++k) {
    out += (k == 0 ? "     (" : "  OR (") + conjunction_text(conj[k], ctx) + ")\n";
  }
  out += "ELSE predict " + ctx.label_name(0) + "\n";
  return out;
}

Json scoring_json(const ScoringSystem& model) {
  Json doc = header("scoring_system");
  doc["features"] = model.feature_names;
  Json terms = Json::array();
  for (std::size_t j = 0; j < model.coefficients.size(); ++j) {
    if (model.coefficients[j] != 0) {
      terms.push_back(Json{{"feature", model.feature_names.at(j)}, {"index", j}, {"points", model.coefficients[j]}});
    }
  }
  doc["terms"] = terms;
  doc["coefficients"] = model.coefficients;
  doc["intercept"] = model.intercept;
  doc["lambda"] = model.lambda.str();
  doc["bounds"] = Json{{"coef_min", model.bounds.coef_min},
                       {"coef_max", model.bounds.coef_max},
                       {"intercept_min", model.bounds.intercept_min},
                       {"intercept_max", model.bounds.intercept_max}};
  doc["text"] = score_card(model);
  return doc;
}

std::vector<std::string> feature_names_from_json(const Json& doc) {
  if (!doc.contains("features")) return {};
  return doc.at("features").get<std::vector<std::string>>();
}

AnyModel model_from_json(const Json& doc, const std::vector<std::string>& names) {
  try {
    if (doc.at("schema_version").get<int>() != kSchemaVersion) fail(ErrorKind::kInput, "unsupported model schema version");
    auto kind = doc.at("kind").get<std::string>();
    auto doc_names = feature_names_from_json(doc);
    if (!names.empty() && !doc_names.empty() && doc_names != names) {
      fail(ErrorKind::kInput, "model features do not match the dataset features");
    }
    if (kind == "rule_list" || kind == "certificate") {
      const Json& m = kind == "certificate" ? doc.at("model") : doc;
      std::vector<Rule> rules;
      for (const auto& r : m.at("rules")) {
        rules.push_back({conditions_from_json(r.at("conditions"), doc_names, names), r.at("prediction").get<std::uint8_t>()});
      }
      return RuleList(std::move(rules), m.at("default_prediction").get<std::uint8_t>());
    }
    if (kind == "dnf") {
      std::vector<Conjunction> conj;
      for (const auto& c : doc.at("conjunctions")) conj.push_back(conditions_from_json(c, doc_names, names));
      return DnfModel(std::move(conj));
    }
    if (kind == "scoring_system" || kind == "scoring_certificate") {
      const Json& m = kind == "scoring_certificate" ? doc.at("model") : doc;
      ScoringSystem s;
      s.feature_names = feature_names_from_json(m);
      s.coefficients = m.at("coefficients").get<std::vector<int>>();
      s.intercept = m.at("intercept").get<int>();
      s.lambda = Rational::parse(m.value("lambda", std::string("0")));
      if (s.feature_names.size() != s.coefficients.size()) fail(ErrorKind::kInput, "scoring system feature and coefficient counts differ");
      if (!names.empty() && s.feature_names != names) fail(ErrorKind::kInput, "model features do not match the dataset features");
      return s;
    }
    fail(ErrorKind::kInput, "unknown model kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kInput, std::string("malformed model document: ") + e.what());
  }
}

Json certificate_json(const Certificate& cert, const ModelContext& ctx, const SearchConfig& cfg) {
  Json doc = header("certificate");
  doc["features"] = features_json(ctx);
  doc["lambda"] = cfg.lambda.str();
  doc["max_rules"] = cfg.max_length;
  doc["objective"] = objective_json(cert.objective);
  doc["optimal"] = cert.optimal;
  doc["lower_bound"] = rational_json(cert.lower_bound);
  doc["gap"] = rational_json(cert.gap);
  doc["antecedents"] = cert.antecedents;
  doc["universe_size"] = cert.universe_size;
  doc["nodes"] = Json{{"generated", cert.nodes_generated}, {"expanded", cert.nodes_expanded}, {"queue_peak", cert.queue_peak}};
  doc["pruned"] = Json{{"hierarchical", cert.pruned.hierarchical},
                       {"lookahead", cert.pruned.lookahead},
                       {"equivalent_points", cert.pruned.equivalent},
                       {"support", cert.pruned.support},
                       {"symmetry", cert.pruned.symmetry}};
  doc["search"] = Json{{"discipline", cfg.discipline == QueueDiscipline::kBestFirst ? "best_first" : "breadth_first"},
                       {"tie_break", "objective, length, antecedent indices"},
                       {"batch_size", cfg.batch_size},
                       {"symmetry_pruning", cfg.symmetry_pruning},
                       {"support_pruning", cfg.support_pruning}};
  Json model = rulelist_json(cert.model, ctx, cert.objective);
  model.erase("features");
  doc["model"] = model;
  doc["wall_time_seconds"] = cert.wall_time_seconds;
  return doc;
}

std::string certificate_text(const Certificate& cert, const SearchConfig& cfg) {
  std::ostringstream os;
  os << (cert.optimal ? "certified optimal" : "NOT certified (search budget exhausted)") << "\n";
  os << "objective        " << cert.objective.value().str() << " = " << fmt("%.6f", cert.objective.value().to_double())
     << "  (" << cert.objective.errors << " errors / " << cert.objective.n << " rows + " << cfg.lambda.str() << " x "
     << cert.objective.size << " rules)\n";
  os << "lower bound      " << cert.lower_bound.str() << "\n";
  os << "gap              " << cert.gap.str() << "\n";
  os << "antecedents      " << cert.universe_size << " in universe, max " << cfg.max_length << " rules\n";
  os << "nodes            " << cert.nodes_generated << " generated, " << cert.nodes_expanded << " expanded, queue peak "
     << cert.queue_peak << "\n";
  os << "pruned           hierarchical " << cert.pruned.hierarchical << ", lookahead " << cert.pruned.lookahead
     << ", equivalent points " << cert.pruned.equivalent << ", support " << cert.pruned.support << ", symmetry "
     << cert.pruned.symmetry << "\n";
  os << "wall time        " << fmt("%.3f", cert.wall_time_seconds) << " s\n";
  return os.str();
}

Json constrained_json(const ConstrainedCertificate& res, const ModelContext& ctx, const SearchConfig& cfg,
                      const FeatureConstraints& constraints) {
  Json doc = certificate_json(res.constrained, ctx, cfg);
  doc["constraints"] = Json{{"forbidden", constraints.forbidden}, {"required", constraints.required}};
  doc["unconstrained_objective"] = objective_json(res.unconstrained.objective);
  doc["unconstrained_optimal"] = res.unconstrained.optimal;
  doc["objective_gap_vs_unconstrained"] = rational_json(res.objective_gap);
  return doc;
}

Json rashomon_json(const RashomonSet& set, const ModelContext& ctx, const SearchConfig& cfg) {
  Json doc = header("rashomon_set");
  doc["features"] = features_json(ctx);
  doc["lambda"] = cfg.lambda.str();
  doc["max_rules"] = cfg.max_length;
  doc["epsilon"] = set.epsilon.str();
  doc["optimum"] = objective_json(set.optimum);
  doc["optimum_certified"] = set.optimum_certified;
  doc["threshold"] = rational_json(set.threshold);
  doc["truncated"] = set.truncated;
  doc["size"] = set.members.size();
  Json members = Json::array();
  for (const auto& m : set.members) {
    Json model = rulelist_json(m.model, ctx, m.objective);
    model.erase("features");
    members.push_back(Json{{"antecedents", m.antecedents}, {"objective", objective_json(m.objective)}, {"model", model}});
  }
  doc["members"] = members;
  doc["nodes_generated"] = set.nodes_generated;
  doc["wall_time_seconds"] = set.wall_time_seconds;
  return doc;
}

std::string rashomon_text(const RashomonSet& set, const ModelContext& ctx) {
  std::ostringstream os;
  os << set.members.size() << " rule lists with objective <= " << set.threshold.str() << " (optimum "
     << set.optimum.value().str() << " + epsilon " << set.epsilon.str() << ")"
     << (set.truncated ? ", TRUNCATED" : "") << "\n";
  for (std::size_t k = 0; k < set.members.size(); ++k) {
    const auto& m = set.members[k];
    os << "\n#" << k + 1 << "  objective " << m.objective.value().str() << " ("
       << fmt("%.6f", m.objective.value().to_double()) << ")\n"
       << rulelist_text(m.model, ctx);
  }
  return os.str();
}

Json lattice_json(const LatticeCertificate& cert, const LatticeConfig& cfg) {
  Json doc = header("scoring_certificate");
  doc["model"] = scoring_json(cert.model);
  doc["objective"] = cert.objective;
  doc["loss"] = cert.loss;
  doc["optimal"] = cert.optimal;
  doc["lower_bound"] = cert.lower_bound;
  doc["gap"] = cert.gap;
  doc["lambda"] = cfg.lambda.str();
  Json signs = Json::array();
  for (auto s : cfg.signs) signs.push_back(sign_name(s));
  doc["signs"] = signs;
  if (cfg.sparsity_cap != std::numeric_limits<std::size_t>::max()) {
    doc["sparsity_cap"] = cfg.sparsity_cap;
  } else {
    doc["sparsity_cap"] = nullptr;
  }
  doc["nodes"] = Json{{"expanded", cert.nodes_expanded}, {"pruned", cert.nodes_pruned}};
  doc["cuts"] = cert.cuts;
  doc["wall_time_seconds"] = cert.wall_time_seconds;
  return doc;
}

std::string lattice_text(const LatticeCertificate& cert) {
  std::ostringstream os;
  os << score_card(cert.model) << "\n";
  os << (cert.optimal ? "certified optimal" : "NOT certified (node budget exhausted)") << "\n";
  os << "objective  " << fmt("%.10f", cert.objective) << "  (loss " << fmt("%.10f", cert.loss) << " + "
     << cert.model.lambda.str() << " x " << cert.model.sparsity() << " terms)\n";
  os << "gap        " << fmt("%.3g", cert.gap) << "\n";
  os << "nodes      " << cert.nodes_expanded << " expanded, " << cert.nodes_pruned << " pruned, " << cert.cuts << " cuts\n";
  return os.str();
}

Json counterfactual_json(const Counterfactual& cf, const ModelContext& ctx) {
  Json flips = Json::array();
  for (const auto& f : cf.flips) {
    flips.push_back(Json{{"feature", feature_name(ctx, f.feature)}, {"index", f.feature}, {"new_value", f.value}});
  }
  return Json{{"flips", flips},
              {"cost", cf.cost},
              {"prediction", cf.prediction},
              {"prediction_label", ctx.label_name(cf.prediction)},
              {"warnings", cf.warnings}};
}

Json confusion_json(const ConfusionReport& r) {
  return Json{{"tp", r.tp},
              {"fp", r.fp},
              {"tn", r.tn},
              {"fn", r.fn},
              {"accuracy", rational_json(r.accuracy)},
              {"tpr", rational_json(r.tpr)},
              {"fpr", rational_json(r.fpr)},
              {"tnr", rational_json(r.tnr)},
              {"fnr", rational_json(r.fnr)}};
}

Json comparison_json(const ComparisonReport& rep) {
  Json doc = header("comparison");
  Json rows = Json::array();
  for (const auto& r : rep.rows) {
    rows.push_back(Json{{"name", r.name},
                        {"kind", r.kind},
                        {"role", r.role == ModelRole::kInterpretable ? "interpretable" : "baseline"},
                        {"size", r.size},
                        {"training_objective", r.objective},
                        {"train", r.train ? confusion_json(*r.train) : Json(nullptr)},
                        {"test", confusion_json(r.test)}});
  }
  doc["models"] = rows;
  Json dis = Json::array();
  for (std::size_t a = 0; a < rep.rows.size(); ++a) {
    for (std::size_t b = a + 1; b < rep.rows.size(); ++b) {
      dis.push_back(Json{{"a", rep.rows[a].name}, {"b", rep.rows[b].name}, {"fraction", rational_json(rep.disagreement[a][b])}});
    }
  }
  doc["disagreement"] = dis;
  doc["margin"] = rational_json(rep.margin);
  doc["best_interpretable"] = rep.best_interpretable ? Json(rep.rows[*rep.best_interpretable].name) : Json(nullptr);
  doc["best_baseline"] = rep.best_baseline ? Json(rep.rows[*rep.best_baseline].name) : Json(nullptr);
  doc["accuracy_gap"] = rational_json(rep.accuracy_gap);
  doc["flagged"] = rep.flagged;
  return doc;
}

Json without_timing(Json doc) {
  if (doc.is_object()) {
    doc.erase("wall_time_seconds");
    for (auto& [k, v] : doc.items()) v = without_timing(v);
  } else if (doc.is_array()) {
    for (auto& v : doc) v = without_timing(v);
  }
  return doc;
}

}  // namespace lucid
