#include "lucid/lucid.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <sstream>
#include <string>

#include "core/brute_force.hpp"
#include "core/dataset.hpp"
#include "core/error.hpp"
#include "core/evaluation.hpp"
#include "core/export.hpp"
#include "core/recourse.hpp"
#include "core/risk_scoring.hpp"
#include "core/rulelist_search.hpp"

struct lucid_dataset {
  lucid::Dataset ds;
};

struct lucid_antecedents {
  std::vector<lucid::Antecedent> ants;
};

namespace {

using lucid::ErrorKind;
using lucid::Json;
using lucid::fail;

thread_local std::string g_last_error;

lucid_status to_status(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInput: return LUCID_ERR_INPUT;
    case ErrorKind::kBudget: return LUCID_ERR_BUDGET;
    case ErrorKind::kInfeasible: return LUCID_ERR_INFEASIBLE;
    case ErrorKind::kArgument: return LUCID_ERR_ARGUMENT;
    case ErrorKind::kIo: return LUCID_ERR_IO;
    default: return LUCID_ERR_INTERNAL;
  }
}

/// Runs body, mapping exceptions to status codes and the thread's message.
template <typename F>
lucid_status guarded(F&& body) {
  try {
    g_last_error.clear();
    return body();
  } catch (const lucid::Error& e) {
    g_last_error = e.what();
    return to_status(e.kind());
  } catch (const Json::exception& e) {
    g_last_error = std::string("invalid JSON: ") + e.what();
    return LUCID_ERR_INPUT;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return LUCID_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return LUCID_ERR_INTERNAL;
  }
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void set_out(char** slot, const std::string& s) {
  if (slot) *slot = dup(s);
}

template <typename T>
void require(const T* p, const char* what) {
  if (!p) fail(ErrorKind::kArgument, std::string(what) + " must not be NULL");
}

lucid::Rational rational_or(const char* text, const lucid::Rational& fallback) {
  if (!text || !*text) return fallback;
  return lucid::Rational::parse(text);
}

lucid::SearchConfig search_config(const lucid_search_options* opts) {
  lucid_search_options defaults;
  lucid_search_options_init(&defaults);
  if (!opts) opts = &defaults;
  lucid::SearchConfig cfg;
  cfg.lambda = rational_or(opts->lambda, lucid::Rational(1, 100));
  cfg.epsilon = rational_or(opts->epsilon, lucid::Rational(0));
  if (cfg.lambda < lucid::Rational(0)) fail(ErrorKind::kArgument, "lambda must be nonnegative");
  if (cfg.epsilon < lucid::Rational(0)) fail(ErrorKind::kArgument, "epsilon must be nonnegative");
  cfg.max_length = opts->max_rules;
  cfg.threads = opts->threads ? opts->threads : 1;
  cfg.memory_budget_bytes = opts->memory_budget_bytes;
  cfg.max_expansions = opts->max_expansions;
  cfg.discipline = opts->breadth_first ? lucid::QueueDiscipline::kBreadthFirst : lucid::QueueDiscipline::kBestFirst;
  if (opts->max_rashomon_size) cfg.max_rashomon_size = opts->max_rashomon_size;
  return cfg;
}

lucid::FeatureConstraints constraints_of(const lucid_search_options* opts) {
  lucid::FeatureConstraints fc;
  if (!opts) return fc;
  for (std::size_t i = 0; i < opts->num_forbidden; ++i) fc.forbidden.emplace_back(opts->forbidden[i]);
  for (std::size_t i = 0; i < opts->num_required; ++i) fc.required.emplace_back(opts->required[i]);
  return fc;
}

lucid::LatticeConfig lattice_config(const lucid_scoring_options* opts, const lucid::Dataset& ds) {
  lucid_scoring_options defaults;
  lucid_scoring_options_init(&defaults);
  if (!opts) opts = &defaults;
  lucid::LatticeConfig cfg;
  cfg.lambda = rational_or(opts->lambda, lucid::Rational(1, 100));
  cfg.bounds = {opts->coef_min, opts->coef_max, opts->intercept_min, opts->intercept_max};
  cfg.bounds.validate();
  if (opts->sparsity_cap) cfg.sparsity_cap = opts->sparsity_cap;
  cfg.threads = opts->threads ? opts->threads : 1;
  cfg.max_nodes = opts->max_nodes;
  if (opts->signs && *opts->signs) {
    cfg.signs.assign(ds.p(), lucid::SignConstraint::kAny);
    std::stringstream ss(opts->signs);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      auto colon = item.rfind(':');
      if (colon == std::string::npos) fail(ErrorKind::kArgument, "sign entry '" + item + "' must be feature:sign");
      auto name = item.substr(0, colon);
      auto sign = lucid::parse_sign(item.substr(colon + 1));
      bool matched = false;
      for (std::size_t j = 0; j < ds.p(); ++j) {
        if (ds.feature(j).name == name || ds.feature(j).column == name) {
          cfg.signs[j] = sign;
          matched = true;
        }
      }
      if (!matched) fail(ErrorKind::kArgument, "sign constraint names unknown feature '" + name + "'");
    }
  }
  return cfg;
}

const char* kind_name(lucid::FeatureKind k) {
  switch (k) {
    case lucid::FeatureKind::kThreshold: return "threshold";
    case lucid::FeatureKind::kInterval: return "interval";
    case lucid::FeatureKind::kCategory: return "category";
    case lucid::FeatureKind::kMissing: return "missing";
    default: return "binary";
  }
}

std::vector<std::string> model_feature_names(const lucid::AnyModel& model, const Json& doc) {
  auto names = lucid::feature_names_from_json(doc);
  if (names.empty() && doc.contains("model")) names = lucid::feature_names_from_json(doc.at("model"));
  if (names.empty()) {
    if (const auto* s = std::get_if<lucid::ScoringSystem>(&model)) names = s->feature_names;
  }
  return names;
}

}  // namespace

extern "C" {

const char* lucid_version(void) { return LUCID_VERSION; }

const char* lucid_last_error(void) { return g_last_error.c_str(); }

void lucid_string_free(char* s) { std::free(s); }

lucid_status lucid_dataset_from_csv(const char* csv_path, const char* label_column, const char* positive_label,
                                    const char* config_path, lucid_dataset** out) {
  return guarded([&] {
    require(csv_path, "csv_path");
    require(label_column, "label_column");
    require(out, "out");
    auto raw = lucid::load_csv(csv_path, label_column, positive_label ? positive_label : "1");
    lucid::BinarizationConfig cfg;
    if (config_path && *config_path) cfg = lucid::BinarizationConfig::load(config_path);
    *out = new lucid_dataset{lucid::binarize(raw, cfg)};
    return LUCID_OK;
  });
}

lucid_status lucid_dataset_from_rows(size_t n, size_t p, const uint8_t* rows, const uint8_t* labels,
                                     const char* const* feature_names, lucid_dataset** out) {
  return guarded([&] {
    require(out, "out");
    if (n > 0) {
      require(labels, "labels");
      if (p > 0) require(rows, "rows");
    }
    std::vector<std::string> names;
    for (std::size_t j = 0; j < p; ++j) {
      names.push_back(feature_names && feature_names[j] ? feature_names[j] : "f" + std::to_string(j));
    }
    std::vector<std::vector<std::uint8_t>> matrix(n);
    for (std::size_t i = 0; i < n; ++i) matrix[i].assign(rows + i * p, rows + (i + 1) * p);
    std::vector<std::uint8_t> y(labels, labels + n);
    *out = new lucid_dataset{lucid::Dataset::from_rows(names, matrix, y)};
    return LUCID_OK;
  });
}

lucid_status lucid_dataset_load(const char* path, lucid_dataset** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new lucid_dataset{lucid::Dataset::load(path)};
    return LUCID_OK;
  });
}

lucid_status lucid_dataset_save(const lucid_dataset* ds, const char* path) {
  return guarded([&] {
    require(ds, "dataset");
    require(path, "path");
    ds->ds.save(path);
    return LUCID_OK;
  });
}

void lucid_dataset_free(lucid_dataset* ds) { delete ds; }

size_t lucid_dataset_rows(const lucid_dataset* ds) { return ds ? ds->ds.n() : 0; }

size_t lucid_dataset_features(const lucid_dataset* ds) { return ds ? ds->ds.p() : 0; }

lucid_status lucid_dataset_info(const lucid_dataset* ds, char** json) {
  return guarded([&] {
    require(ds, "dataset");
    const auto& d = ds->ds;
    Json features = Json::array();
    for (const auto& f : d.features()) {
      features.push_back(Json{{"name", f.name}, {"column", f.column}, {"kind", kind_name(f.kind)}, {"group", f.group}});
    }
    Json doc{{"schema_version", lucid::kSchemaVersion},
             {"kind", "dataset"},
             {"n", d.n()},
             {"p", d.p()},
             {"positives", d.labels().count()},
             {"labels", Json{{"0", d.label_name(0)}, {"1", d.label_name(1)}}},
             {"features", features}};
    set_out(json, doc.dump(2));
    return LUCID_OK;
  });
}

lucid_status lucid_dataset_split(const lucid_dataset* ds, double test_fraction, uint64_t seed, lucid_dataset** train,
                                 lucid_dataset** test) {
  return guarded([&] {
    require(ds, "dataset");
    require(train, "train");
    require(test, "test");
    auto s = lucid::split(ds->ds, test_fraction, seed);
    *train = new lucid_dataset{std::move(s.train)};
    *test = new lucid_dataset{std::move(s.test)};
    return LUCID_OK;
  });
}

lucid_status lucid_mine_antecedents(const lucid_dataset* ds, size_t max_cardinality, double min_support,
                                    int include_negations, lucid_antecedents** out) {
  return guarded([&] {
    require(ds, "dataset");
    require(out, "out");
    lucid::MiningOptions opts{max_cardinality, min_support, include_negations != 0};
    *out = new lucid_antecedents{lucid::mine_antecedents(ds->ds, opts)};
    return LUCID_OK;
  });
}

size_t lucid_antecedents_count(const lucid_antecedents* ants) { return ants ? ants->ants.size() : 0; }

lucid_status lucid_antecedents_describe(const lucid_antecedents* ants, const lucid_dataset* ds, char** json) {
  return guarded([&] {
    require(ants, "antecedents");
    require(ds, "dataset");
    Json arr = Json::array();
    for (const auto& a : ants->ants) arr.push_back(a.describe(ds->ds));
    set_out(json, arr.dump(2));
    return LUCID_OK;
  });
}

void lucid_antecedents_free(lucid_antecedents* ants) { delete ants; }

void lucid_search_options_init(lucid_search_options* opts) {
  if (!opts) return;
  *opts = lucid_search_options{};
  opts->lambda = "1/100";
  opts->epsilon = "0";
  opts->max_rules = 3;
  opts->threads = 1;
  opts->max_rashomon_size = 1'000'000;
}

lucid_status lucid_train_rulelist(const lucid_dataset* ds, const lucid_antecedents* ants,
                                  const lucid_search_options* opts, char** certificate_json, char** text) {
  return guarded([&] {
    require(ds, "dataset");
    require(ants, "antecedents");
    auto cfg = search_config(opts);
    auto fc = constraints_of(opts);
    auto ctx = lucid::ModelContext::of(ds->ds);
    lucid::Certificate cert;
    Json doc;
    if (fc.empty()) {
      cert = lucid::solve(ds->ds, ants->ants, cfg);
      doc = lucid::certificate_json(cert, ctx, cfg);
    } else {
      auto res = lucid::resolve_with_constraints(ds->ds, ants->ants, cfg, fc);
      cert = res.constrained;
      doc = lucid::constrained_json(res, ctx, cfg, fc);
    }
    set_out(certificate_json, doc.dump(2));
    set_out(text, lucid::rulelist_text(cert.model, ctx) + "\n" + lucid::certificate_text(cert, cfg));
    if (!cert.optimal) {
      g_last_error = "search budget exhausted; gap " + cert.gap.str();
      return LUCID_ERR_BUDGET;
    }
    return LUCID_OK;
  });
}

lucid_status lucid_rashomon(const lucid_dataset* ds, const lucid_antecedents* ants, const lucid_search_options* opts,
                            char** json, char** text) {
  return guarded([&] {
    require(ds, "dataset");
    require(ants, "antecedents");
    auto cfg = search_config(opts);
    if (!constraints_of(opts).empty()) fail(ErrorKind::kArgument, "Rashomon enumeration does not take feature constraints");
    auto set = lucid::enumerate_rashomon(ds->ds, ants->ants, cfg);
    auto ctx = lucid::ModelContext::of(ds->ds);
    set_out(json, lucid::rashomon_json(set, ctx, cfg).dump(2));
    set_out(text, lucid::rashomon_text(set, ctx));
    if (set.truncated || !set.optimum_certified) {
      g_last_error = "Rashomon set incomplete: budget exhausted";
      return LUCID_ERR_BUDGET;
    }
    return LUCID_OK;
  });
}

lucid_status lucid_bruteforce_rulelist(const lucid_dataset* ds, const lucid_antecedents* ants,
                                       const lucid_search_options* opts, char** json) {
  return guarded([&] {
    require(ds, "dataset");
    require(ants, "antecedents");
    auto cfg = search_config(opts);
    auto all = lucid::enumerate_rule_lists(ds->ds, ants->ants, cfg.lambda, cfg.max_length);
    auto best = lucid::brute_force_rulelist(ds->ds, ants->ants, cfg.lambda, cfg.max_length);
    std::vector<lucid::Conjunction> conj;
    for (auto r : best.antecedents) {
      auto c = ants->ants[r].conditions();
      conj.emplace_back(c.begin(), c.end());
    }
    auto model = lucid::fit_rule_labels(conj, ds->ds);
    auto ctx = lucid::ModelContext::of(ds->ds);
    auto value = lucid::objective(model, ds->ds, cfg.lambda);
    Json doc{{"schema_version", lucid::kSchemaVersion},
             {"kind", "brute_force_rule_list"},
             {"lambda", cfg.lambda.str()},
             {"max_rules", cfg.max_length},
             {"lists_evaluated", all.size()},
             {"objective", lucid::objective_json(value)},
             {"antecedents", best.antecedents},
             {"model", lucid::rulelist_json(model, ctx, value)}};
    set_out(json, doc.dump(2));
    return LUCID_OK;
  });
}

void lucid_scoring_options_init(lucid_scoring_options* opts) {
  if (!opts) return;
  *opts = lucid_scoring_options{};
  opts->lambda = "1/100";
  opts->coef_min = -10;
  opts->coef_max = 10;
  opts->intercept_min = -20;
  opts->intercept_max = 20;
  opts->threads = 1;
  opts->max_nodes = 500'000;
}

lucid_status lucid_train_scoring(const lucid_dataset* ds, const lucid_scoring_options* opts, char** certificate_json,
                                 char** text) {
  return guarded([&] {
    require(ds, "dataset");
    auto cfg = lattice_config(opts, ds->ds);
    auto cert = lucid::solve_lattice(ds->ds, cfg);
    set_out(certificate_json, lucid::lattice_json(cert, cfg).dump(2));
    set_out(text, lucid::lattice_text(cert));
    if (!cert.optimal) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.3g", cert.gap);
      g_last_error = std::string("node budget exhausted; gap ") + buf;
      return LUCID_ERR_BUDGET;
    }
    return LUCID_OK;
  });
}

lucid_status lucid_logreg_baseline(const lucid_dataset* ds, const lucid_scoring_options* opts, char** model_json,
                                   char** text) {
  return guarded([&] {
    require(ds, "dataset");
    auto cfg = lattice_config(opts, ds->ds);
    auto base = lucid::round_logreg_baseline(ds->ds, cfg.bounds, cfg.lambda, cfg.signs);
    Json doc = lucid::scoring_json(base.model);
    doc["training_objective"] = lucid::logistic_objective(base.model, ds->ds);
    doc["fit"] = Json{{"converged", base.fit.converged},
                      {"iterations", base.fit.iterations},
                      {"gradient_norm", base.fit.gradient_norm},
                      {"scale", base.scale},
                      {"weights", base.fit.weights}};
    set_out(model_json, doc.dump(2));
    set_out(text, lucid::score_card(base.model) + (base.fit.converged ? "" : "WARNING: logistic regression did not converge\n"));
    return LUCID_OK;
  });
}

lucid_status lucid_bruteforce_scoring(const lucid_dataset* ds, const lucid_scoring_options* opts, char** json) {
  return guarded([&] {
    require(ds, "dataset");
    auto cfg = lattice_config(opts, ds->ds);
    auto best = lucid::brute_force_lattice(ds->ds, cfg);
    lucid::ScoringSystem model;
    for (const auto& f : ds->ds.features()) model.feature_names.push_back(f.name);
    model.intercept = best.point.at(0);
    model.coefficients.assign(best.point.begin() + 1, best.point.end());
    model.lambda = cfg.lambda;
    model.bounds = cfg.bounds;
    Json doc{{"schema_version", lucid::kSchemaVersion},
             {"kind", "brute_force_scoring"},
             {"points_evaluated", best.evaluated},
             {"objective", best.objective},
             {"model", lucid::scoring_json(model)}};
    set_out(json, doc.dump(2));
    return LUCID_OK;
  });
}

lucid_status lucid_model_text(const char* model_json, char** text) {
  return guarded([&] {
    require(model_json, "model_json");
    Json doc = Json::parse(model_json);
    auto model = lucid::model_from_json(doc, {});
    lucid::ModelContext ctx;
    ctx.feature_names = model_feature_names(model, doc);
    if (doc.contains("labels")) {
      ctx.negative_label = doc["labels"].value("0", "0");
      ctx.positive_label = doc["labels"].value("1", "1");
    }
    std::string out;
    if (const auto* rl = std::get_if<lucid::RuleList>(&model)) out = lucid::rulelist_text(*rl, ctx);
    if (const auto* dnf = std::get_if<lucid::DnfModel>(&model)) out = lucid::dnf_text(*dnf, ctx);
    if (const auto* sc = std::get_if<lucid::ScoringSystem>(&model)) out = lucid::score_card(*sc);
    set_out(text, out);
    return LUCID_OK;
  });
}

lucid_status lucid_counterfactual(const char* model_json, const char* query_json, const lucid_dataset* ds,
                                  char** result_json) {
  return guarded([&] {
    require(model_json, "model_json");
    require(query_json, "query_json");
    Json mdoc = Json::parse(model_json);
    Json qdoc = Json::parse(query_json);
    std::vector<std::string> ds_names;
    if (ds) {
      for (const auto& f : ds->ds.features()) ds_names.push_back(f.name);
    }
    auto model = lucid::model_from_json(mdoc, ds_names);
    lucid::ModelContext ctx;
    ctx.feature_names = ds ? ds_names : model_feature_names(model, mdoc);
    if (ds) {
      ctx.positive_label = ds->ds.label_name(1);
      ctx.negative_label = ds->ds.label_name(0);
    }
    const std::size_t p = ctx.feature_names.size();
    if (p == 0) fail(ErrorKind::kInput, "cannot determine the model's features");
    std::vector<lucid::FeatureInfo> features;
    if (ds) features.assign(ds->ds.features().begin(), ds->ds.features().end());

    auto index_of = [&](const std::string& name) -> std::vector<std::size_t> {
      std::vector<std::size_t> hits;
      for (std::size_t j = 0; j < p; ++j) {
        if (ctx.feature_names[j] == name || (!features.empty() && features[j].column == name)) hits.push_back(j);
      }
      if (hits.empty()) fail(ErrorKind::kInput, "query names unknown feature '" + name + "'");
      return hits;
    };

    lucid::RecourseQuery q;
    if (qdoc.contains("row")) {
      if (!ds) fail(ErrorKind::kArgument, "a query by row needs the dataset");
      auto row = qdoc.at("row").get<std::size_t>();
      if (row >= ds->ds.n()) fail(ErrorKind::kInput, "query row out of range");
      q.instance = ds->ds.row(row);
    } else {
      const Json& inst = qdoc.at("instance");
      if (inst.is_array()) {
        q.instance = inst.get<std::vector<std::uint8_t>>();
        if (q.instance.size() != p) fail(ErrorKind::kInput, "instance length does not match the model features");
      } else {
        q.instance.assign(p, 0);
        std::vector<bool> given(p, false);
        for (const auto& [name, v] : inst.items()) {
          bool found = false;
          for (std::size_t j = 0; j < p; ++j) {
            if (ctx.feature_names[j] == name) {
              q.instance[j] = v.get<int>() ? 1 : 0;
              given[j] = found = true;
            }
          }
          if (!found) fail(ErrorKind::kInput, "query names unknown feature '" + name + "'");
        }
        for (std::size_t j = 0; j < p; ++j) {
          if (!given[j]) fail(ErrorKind::kInput, "query instance is missing feature '" + ctx.feature_names[j] + "'");
        }
      }
    }
    std::uint8_t current = lucid::predict(model, q.instance);
    q.target = qdoc.contains("target") ? qdoc.at("target").get<std::uint8_t>() : static_cast<std::uint8_t>(1 - current);
    q.budget = qdoc.value("budget", p);
    q.costs.flip_costs.assign(p, 1.0);
    q.costs.immutable.assign(p, false);
    if (qdoc.contains("costs")) {
      for (const auto& [name, v] : qdoc.at("costs").items()) {
        for (auto j : index_of(name)) q.costs.flip_costs[j] = v.get<double>();
      }
    }
    if (qdoc.contains("immutable")) {
      for (const auto& name : qdoc.at("immutable")) {
        for (auto j : index_of(name.get<std::string>())) q.costs.immutable[j] = true;
      }
    }
    std::size_t k = qdoc.value("k", std::size_t{1});
    auto list = lucid::enumerate_counterfactuals(model, features, q, k);

    // Without dataset metadata, narrate with the model's own names.
    std::vector<lucid::FeatureInfo> narration = features;
    if (narration.empty()) {
      for (const auto& n : ctx.feature_names) narration.push_back({n, n, lucid::FeatureKind::kBinary, -1});
    }
    Json out{{"schema_version", lucid::kSchemaVersion},
             {"kind", "counterfactuals"},
             {"prediction", current},
             {"prediction_label", ctx.label_name(current)},
             {"target", q.target},
             {"target_label", ctx.label_name(q.target)},
             {"budget", q.budget},
             {"feasible", !list.empty()}};
    Json arr = Json::array();
    for (const auto& cf : list) {
      Json j = lucid::counterfactual_json(cf, ctx);
      j["narrative"] = lucid::narrate(cf, narration, ctx.label_name(q.target));
      arr.push_back(std::move(j));
    }
    out["counterfactuals"] = arr;
    if (list.empty()) out["narrative"] = "No change within a budget of " + std::to_string(q.budget) + " flips reaches " + ctx.label_name(q.target) + ".";
    else out["narrative"] = arr[0]["narrative"];
    set_out(result_json, out.dump(2));
    if (list.empty()) {
      g_last_error = "no counterfactual within the flip budget";
      return LUCID_ERR_INFEASIBLE;
    }
    return LUCID_OK;
  });
}

lucid_status lucid_compare(const lucid_dataset* train, const lucid_dataset* test, const char* spec_json,
                           char** report_json, char** text) {
  return guarded([&] {
    require(train, "train");
    require(test, "test");
    require(spec_json, "spec_json");
    Json spec = Json::parse(spec_json);
    std::vector<std::string> names;
    for (const auto& f : train->ds.features()) names.push_back(f.name);
    std::vector<lucid::CompareInput> inputs;
    for (const auto& m : spec.at("models")) {
      lucid::CompareInput in;
      in.name = m.at("name").get<std::string>();
      auto role = m.value("role", std::string("interpretable"));
      if (role != "interpretable" && role != "baseline") fail(ErrorKind::kInput, "model role must be interpretable or baseline");
      in.role = role == "baseline" ? lucid::ModelRole::kBaseline : lucid::ModelRole::kInterpretable;
      if (m.contains("model")) {
        auto model = lucid::model_from_json(m.at("model"), names);
        if (const auto* rl = std::get_if<lucid::RuleList>(&model)) {
          in.kind = "rule_list";
          in.size = rl->size();
          in.objective = lucid::objective(*rl, train->ds, lucid::Rational::parse(m.at("model").value("lambda", std::string("0")))).value().str();
        } else if (const auto* sc = std::get_if<lucid::ScoringSystem>(&model)) {
          in.kind = "scoring_system";
          in.size = sc->sparsity();
          char buf[64];
          std::snprintf(buf, sizeof buf, "%.10f", lucid::logistic_objective(*sc, train->ds));
          in.objective = buf;
        } else {
          in.kind = "dnf";
          in.size = std::get<lucid::DnfModel>(model).conjunctions().size();
        }
        in.model = std::move(model);
      } else {
        in.kind = "external";
        in.test_predictions = lucid::load_predictions(m.at("predictions_csv").get<std::string>(), test->ds.n());
      }
      inputs.push_back(std::move(in));
    }
    auto margin = lucid::Rational::parse(spec.value("margin", std::string("1/100")));
    auto rep = lucid::compare(inputs, train->ds, test->ds, margin);
    set_out(report_json, lucid::comparison_json(rep).dump(2));
    set_out(text, lucid::render_comparison(rep));
    return LUCID_OK;
  });
}

}  // extern "C"
