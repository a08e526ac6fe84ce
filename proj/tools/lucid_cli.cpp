// Command-line front end. Talks to the solvers only through the C interface.
#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lucid/lucid.h"

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

enum Exit { kExitOk = 0, kExitInternal = 1, kExitInput = 2, kExitBudget = 3, kExitInfeasible = 4 };

int exit_code(lucid_status s) {
  switch (s) {
    case LUCID_OK: return kExitOk;
    case LUCID_ERR_BUDGET: return kExitBudget;
    case LUCID_ERR_INFEASIBLE: return kExitInfeasible;
    case LUCID_ERR_INTERNAL: return kExitInternal;
    default: return kExitInput;
  }
}

/// Thrown for failures that end the run; carries the exit code.
struct RunError : std::runtime_error {
  int code;
  RunError(int c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

/// Budget and infeasible results still produce outputs, so they are returned, not thrown.
lucid_status check(lucid_status s) {
  if (s == LUCID_OK || s == LUCID_ERR_BUDGET || s == LUCID_ERR_INFEASIBLE) return s;
  throw RunError(exit_code(s), lucid_last_error());
}

struct CString {
  char* p = nullptr;
  ~CString() { lucid_string_free(p); }
  char** out() { return &p; }
  std::string str() const { return p ? p : ""; }
};

struct DatasetDeleter {
  void operator()(lucid_dataset* d) const { lucid_dataset_free(d); }
};
struct AntecedentsDeleter {
  void operator()(lucid_antecedents* a) const { lucid_antecedents_free(a); }
};
using DatasetPtr = std::unique_ptr<lucid_dataset, DatasetDeleter>;
using AntecedentsPtr = std::unique_ptr<lucid_antecedents, AntecedentsDeleter>;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw RunError(kExitInput, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string sha256_file(const std::string& path) {
  std::string data = read_file(path);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr)) {
    throw RunError(kExitInternal, "SHA-256 failed for " + path);
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

/// "512", "64K", "512M", "2G" (binary multiples).
std::size_t parse_bytes(const std::string& text) {
  if (text.empty()) return 0;
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(text, &pos);
  } catch (const std::exception&) {
    throw RunError(kExitInput, "--mem-budget: '" + text + "' is not a byte count");
  }
  std::string suffix = text.substr(pos);
  if (suffix == "K" || suffix == "k") v <<= 10;
  else if (suffix == "M" || suffix == "m") v <<= 20;
  else if (suffix == "G" || suffix == "g") v <<= 30;
  else if (!suffix.empty() && suffix != "B") throw RunError(kExitInput, "--mem-budget: unknown suffix '" + suffix + "'");
  return static_cast<std::size_t>(v);
}

/// Splits "a,b" lists that CLI11 leaves joined when given as one token.
std::vector<std::string> split_list(const std::vector<std::string>& items) {
  std::vector<std::string> out;
  for (const auto& item : items) {
    std::stringstream ss(item);
    std::string part;
    while (std::getline(ss, part, ',')) {
      if (!part.empty()) out.push_back(part);
    }
  }
  return out;
}

/// `name=value` pairs. Feature names may contain '=' ("sex=Female", "age<=45")
/// but costs never do, so cost pairs split at the last '='.
std::pair<std::string, std::string> split_pair(const std::string& item, const char* flag, bool at_last = false) {
  auto eq = at_last ? item.rfind('=') : item.find('=');
  if (eq == std::string::npos || eq == 0) throw RunError(kExitInput, std::string(flag) + ": expected name=value, got '" + item + "'");
  return {item.substr(0, eq), item.substr(eq + 1)};
}

/// Inline JSON, or @path to read it from a file.
Json json_arg(const std::string& text, const char* flag) {
  std::string body = !text.empty() && text[0] == '@' ? read_file(text.substr(1)) : text;
  try {
    return Json::parse(body);
  } catch (const Json::exception& e) {
    throw RunError(kExitInput, std::string(flag) + ": invalid JSON: " + e.what());
  }
}

struct Options {
  std::string input, label_col, positive = "1", cutpoints, out_dir = ".";
  std::vector<std::string> lambdas{"1/100"};
  std::string epsilon = "0";
  std::size_t max_rules = 3;
  std::vector<std::string> forbid, require;
  int coef_min = -10, coef_max = 10, intercept_min = -20, intercept_max = 20;
  std::size_t sparsity_cap = 0;
  std::string signs;
  std::string costs, target, instance;
  std::vector<std::string> immutable;
  std::optional<std::size_t> row;
  std::optional<std::size_t> budget;
  std::size_t k = 1;
  double test_frac = 0.0;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  std::string mem_budget;
  std::size_t max_expansions = 0, max_nodes = 500000;
  double min_support = 0.05;
  std::size_t max_card = 2;
  bool no_negations = false;
  bool breadth_first = false;
  std::string model, test_input, margin = "1/100", kind = "rulelist";
  std::vector<std::string> models, baselines, predictions;
};

/// Collects outputs and writes the run manifest.
class Run {
 public:
  Run(std::string command, const Options& o) : command_(std::move(command)), opts_(o), start_(std::chrono::steady_clock::now()) {}

  void input(const std::string& path) {
    if (!path.empty()) inputs_.push_back(Json{{"path", path}, {"sha256", sha256_file(path)}});
  }

  std::string path(const std::string& name) const { return (fs::path(opts_.out_dir) / name).string(); }

  void write(const std::string& name, const std::string& content) {
    fs::create_directories(opts_.out_dir);
    auto p = path(name);
    std::ofstream out(p, std::ios::binary);
    if (!out) throw RunError(kExitInput, "cannot write " + p);
    out << content;
    if (!content.empty() && content.back() != '\n') out << '\n';
    if (!out) throw RunError(kExitInput, "write failed for " + p);
    outputs_.push_back(p);
  }

  void record(const std::string& name) { outputs_.push_back(path(name)); }

  void finish(const CLI::App& sub, int code, const std::string& error) {
    Json params = Json::object();
    for (const CLI::Option* opt : sub.get_options()) {
      if (opt->get_name() == "--help" || opt->get_name().empty()) continue;
      std::string key = opt->get_lnames().empty() ? opt->get_name() : opt->get_lnames().front();
      auto results = opt->results();
      if (opt->get_type_size() == 0) {
        params[key] = opt->count() > 0;
      } else if (results.empty()) {
        auto d = opt->get_default_str();
        params[key] = d.empty() ? Json(nullptr) : Json(d);
      } else if (opt->get_expected_max() > 1) {
        params[key] = results;
      } else {
        params[key] = results.back();
      }
    }
    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    Json m{{"schema_version", 1},
           {"kind", "run_manifest"},
           {"command", command_},
           {"params", params},
           {"inputs", inputs_},
           {"seed", opts_.seed},
           {"version", lucid_version()},
           {"exit_code", code},
           {"outputs", outputs_},
           {"wall_time_seconds", wall}};
    if (!error.empty()) m["error"] = error;
    try {
      fs::create_directories(opts_.out_dir);
      std::ofstream(path("manifest.json")) << m.dump(2) << "\n";
    } catch (const std::exception& e) {
      std::cerr << "lucid: warning: could not write manifest: " << e.what() << "\n";
    }
  }

 private:
  std::string command_;
  const Options& opts_;
  std::chrono::steady_clock::time_point start_;
  Json inputs_ = Json::array();
  std::vector<std::string> outputs_;
};

bool is_cache(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  char magic[8] = {};
  in.read(magic, 8);
  return in.gcount() == 8 && std::string(magic, 7) == "LUCIDDS";
}

/// A dataset cache, or a CSV binarized on the fly when --label-col is set.
DatasetPtr load_dataset(const Options& o, Run& run, const std::string& path) {
  if (path.empty()) throw RunError(kExitInput, "--input is required");
  if (!fs::exists(path)) throw RunError(kExitInput, "input file not found: " + path);
  run.input(path);
  lucid_dataset* ds = nullptr;
  if (is_cache(path)) {
    check(lucid_dataset_load(path.c_str(), &ds));
  } else {
    if (o.label_col.empty()) throw RunError(kExitInput, path + " is not a dataset cache; pass --label-col to read it as CSV");
    run.input(o.cutpoints);
    check(lucid_dataset_from_csv(path.c_str(), o.label_col.c_str(), o.positive.c_str(),
                                 o.cutpoints.empty() ? nullptr : o.cutpoints.c_str(), &ds));
  }
  return DatasetPtr(ds);
}

struct Split {
  DatasetPtr train, test;
};

/// Holds out a test fraction when --test-frac > 0; otherwise trains on everything.
Split split_dataset(const Options& o, DatasetPtr ds) {
  if (o.test_frac <= 0) return {std::move(ds), nullptr};
  if (o.test_frac >= 1) throw RunError(kExitInput, "--test-frac must lie in [0, 1)");
  lucid_dataset *train = nullptr, *test = nullptr;
  check(lucid_dataset_split(ds.get(), o.test_frac, o.seed, &train, &test));
  return {DatasetPtr(train), DatasetPtr(test)};
}

AntecedentsPtr mine(const Options& o, const lucid_dataset* ds, Run& run) {
  lucid_antecedents* ants = nullptr;
  check(lucid_mine_antecedents(ds, o.max_card, o.min_support, o.no_negations ? 0 : 1, &ants));
  CString desc;
  check(lucid_antecedents_describe(ants, ds, desc.out()));
  run.write("antecedents.json", desc.str());
  return AntecedentsPtr(ants);
}

struct SearchOptions {
  lucid_search_options raw;
  std::vector<const char*> forbid, require;
};

SearchOptions search_options(const Options& o, const std::string& lambda) {
  SearchOptions s;
  lucid_search_options_init(&s.raw);
  s.raw.lambda = lambda.c_str();
  s.raw.epsilon = o.epsilon.c_str();
  s.raw.max_rules = o.max_rules;
  s.raw.threads = o.threads;
  s.raw.memory_budget_bytes = parse_bytes(o.mem_budget);
  s.raw.max_expansions = o.max_expansions;
  s.raw.breadth_first = o.breadth_first ? 1 : 0;
  for (const auto& f : o.forbid) s.forbid.push_back(f.c_str());
  for (const auto& f : o.require) s.require.push_back(f.c_str());
  s.raw.forbidden = s.forbid.data();
  s.raw.num_forbidden = s.forbid.size();
  s.raw.required = s.require.data();
  s.raw.num_required = s.require.size();
  return s;
}

lucid_scoring_options scoring_options(const Options& o) {
  lucid_scoring_options s;
  lucid_scoring_options_init(&s);
  s.lambda = o.lambdas.front().c_str();
  s.coef_min = o.coef_min;
  s.coef_max = o.coef_max;
  s.intercept_min = o.intercept_min;
  s.intercept_max = o.intercept_max;
  s.sparsity_cap = o.sparsity_cap;
  s.signs = o.signs.empty() ? nullptr : o.signs.c_str();
  s.threads = o.threads;
  s.max_nodes = o.max_nodes;
  return s;
}

/// Test-set report for models trained on the training split.
void evaluate(const Options& o, Run& run, const Split& split, const Json& models, const std::string& stem) {
  if (!split.test) return;
  Json spec{{"margin", o.margin}, {"models", models}};
  CString report, text;
  check(lucid_compare(split.train.get(), split.test.get(), spec.dump().c_str(), report.out(), text.out()));
  run.write(stem + ".json", report.str());
  run.write(stem + ".txt", text.str());
}

// ---------------------------------------------------------------------------

int cmd_binarize(const Options& o, Run& run) {
  if (o.label_col.empty()) throw RunError(kExitInput, "--label-col is required");
  if (o.input.empty()) throw RunError(kExitInput, "--input is required");
  if (!fs::exists(o.input)) throw RunError(kExitInput, "input file not found: " + o.input);
  run.input(o.input);
  run.input(o.cutpoints);
  lucid_dataset* raw = nullptr;
  check(lucid_dataset_from_csv(o.input.c_str(), o.label_col.c_str(), o.positive.c_str(),
                               o.cutpoints.empty() ? nullptr : o.cutpoints.c_str(), &raw));
  DatasetPtr ds(raw);
  fs::create_directories(o.out_dir);
  check(lucid_dataset_save(ds.get(), run.path("dataset.lucid").c_str()));
  run.record("dataset.lucid");
  CString info;
  check(lucid_dataset_info(ds.get(), info.out()));
  run.write("dataset.json", info.str());
  Json j = Json::parse(info.str());
  std::ostringstream txt;
  txt << j["n"].get<std::size_t>() << " rows, " << j["p"].get<std::size_t>() << " binary features, "
      << j["positives"].get<std::size_t>() << " labelled " << j["labels"]["1"].get<std::string>() << "\n";
  for (const auto& f : j["features"]) txt << "  " << f["name"].get<std::string>() << "\n";
  run.write("dataset.txt", txt.str());
  if (o.test_frac > 0) {
    auto split = split_dataset(o, std::move(ds));
    check(lucid_dataset_save(split.train.get(), run.path("train.lucid").c_str()));
    run.record("train.lucid");
    check(lucid_dataset_save(split.test.get(), run.path("test.lucid").c_str()));
    run.record("test.lucid");
  }
  return kExitOk;
}

int cmd_train_rulelist(const Options& o, Run& run) {
  auto split = split_dataset(o, load_dataset(o, run, o.input));
  auto ants = mine(o, split.train.get(), run);
  const bool sweep = o.lambdas.size() > 1;
  int code = kExitOk;
  Json path = Json::array();
  std::ostringstream sweep_txt;
  for (std::size_t i = 0; i < o.lambdas.size(); ++i) {
    const std::string& lambda = o.lambdas[i];
    std::string suffix = sweep ? "-" + std::to_string(i + 1) : "";
    auto so = search_options(o, lambda);
    CString cert, text;
    auto s = check(lucid_train_rulelist(split.train.get(), ants.get(), &so.raw, cert.out(), text.out()));
    if (s == LUCID_ERR_BUDGET) {
      std::cerr << "lucid: " << lucid_last_error() << " (lambda " << lambda << ")\n";
      code = kExitBudget;
    }
    Json doc = Json::parse(cert.str());
    // Constrained runs wrap the certificate together with the unconstrained one.
    const Json& c = doc["kind"] == "constrained_certificate" ? doc["constrained"] : doc;
    Json model = c["model"];
    model["features"] = doc.contains("features") ? doc["features"] : c["features"];
    CString model_text;
    check(lucid_model_text(model.dump().c_str(), model_text.out()));
    run.write("model" + suffix + ".json", model.dump(2));
    run.write("model" + suffix + ".txt", model_text.str());
    run.write("certificate" + suffix + ".json", cert.str());
    run.write("certificate" + suffix + ".txt", text.str());
    evaluate(o, run, split, Json::array({Json{{"name", "rule_list"}, {"role", "interpretable"}, {"model", model}}}),
             "evaluation" + suffix);
    path.push_back(Json{{"lambda", lambda},
                        {"size", model["rules"].size()},
                        {"objective", c["objective"]["value"]},
                        {"optimal", c["optimal"]},
                        {"model", "model" + suffix + ".json"}});
    sweep_txt << "lambda " << lambda << ": " << model["rules"].size() << " rules, objective "
              << c["objective"]["value"]["fraction"].get<std::string>() << (c["optimal"].get<bool>() ? "" : " (not certified)")
              << "\n" << model_text.str() << "\n";
  }
  if (sweep) {
    run.write("sweep.json", Json{{"schema_version", 1}, {"kind", "lambda_sweep"}, {"path", path}}.dump(2));
    run.write("sweep.txt", sweep_txt.str());
  }
  return code;
}

int cmd_rashomon(const Options& o, Run& run) {
  if (o.lambdas.size() != 1) throw RunError(kExitInput, "rashomon takes a single --lambda");
  auto split = split_dataset(o, load_dataset(o, run, o.input));
  auto ants = mine(o, split.train.get(), run);
  auto so = search_options(o, o.lambdas.front());
  CString json, text;
  auto s = check(lucid_rashomon(split.train.get(), ants.get(), &so.raw, json.out(), text.out()));
  run.write("rashomon.json", json.str());
  run.write("rashomon.txt", text.str());
  if (s == LUCID_ERR_BUDGET) {
    std::cerr << "lucid: " << lucid_last_error() << "\n";
    return kExitBudget;
  }
  return kExitOk;
}

int cmd_train_riskslim(const Options& o, Run& run) {
  if (o.lambdas.size() != 1) throw RunError(kExitInput, "train-riskslim takes a single --lambda");
  auto split = split_dataset(o, load_dataset(o, run, o.input));
  auto so = scoring_options(o);
  CString cert, text;
  auto s = check(lucid_train_scoring(split.train.get(), &so, cert.out(), text.out()));
  const std::string budget_note = s == LUCID_ERR_BUDGET ? lucid_last_error() : "";
  Json doc = Json::parse(cert.str());
  Json model = doc["model"];
  run.write("model.json", model.dump(2));
  run.write("scorecard.txt", model["text"].get<std::string>());
  run.write("certificate.json", cert.str());
  run.write("certificate.txt", text.str());
  CString base, base_text;
  check(lucid_logreg_baseline(split.train.get(), &so, base.out(), base_text.out()));
  run.write("baseline.json", base.str());
  run.write("baseline.txt", base_text.str());
  Json base_model = Json::parse(base.str());
  evaluate(o, run, split,
           Json::array({Json{{"name", "scoring_system"}, {"role", "interpretable"}, {"model", model}},
                        Json{{"name", "rounded_logreg"}, {"role", "baseline"}, {"model", base_model}}}),
           "evaluation");
  if (s == LUCID_ERR_BUDGET) {
    std::cerr << "lucid: " << budget_note << "\n";
    return kExitBudget;
  }
  return kExitOk;
}

int cmd_counterfactual(const Options& o, Run& run) {
  if (o.model.empty()) throw RunError(kExitInput, "--model is required");
  run.input(o.model);
  std::string model = read_file(o.model);
  DatasetPtr ds;
  if (!o.input.empty()) ds = load_dataset(o, run, o.input);
  Json query = Json::object();
  if (o.row) {
    if (!ds) throw RunError(kExitInput, "--row needs --input");
    query["row"] = *o.row;
  } else if (!o.instance.empty()) {
    query["instance"] = json_arg(o.instance, "--instance");
  } else {
    throw RunError(kExitInput, "one of --row or --instance is required");
  }
  if (!o.target.empty()) {
    if (o.target != "0" && o.target != "1") throw RunError(kExitInput, "--target must be 0 or 1");
    query["target"] = o.target == "1" ? 1 : 0;
  }
  if (!o.costs.empty()) {
    if (o.costs[0] == '{' || o.costs[0] == '@') {
      query["costs"] = json_arg(o.costs, "--costs");
    } else {
      Json c = Json::object();
      for (const auto& item : split_list({o.costs})) {
        auto [name, value] = split_pair(item, "--costs", true);
        try {
          c[name] = std::stod(value);
        } catch (const std::exception&) {
          throw RunError(kExitInput, "--costs: '" + value + "' is not a number");
        }
      }
      query["costs"] = c;
    }
  }
  if (!o.immutable.empty()) query["immutable"] = split_list(o.immutable);
  if (o.budget) query["budget"] = *o.budget;
  query["k"] = o.k;
  CString result;
  auto s = check(lucid_counterfactual(model.c_str(), query.dump().c_str(), ds.get(), result.out()));
  run.write("counterfactuals.json", result.str());
  Json r = Json::parse(result.str());
  std::ostringstream txt;
  txt << "current prediction: " << r["prediction_label"].get<std::string>() << "\n";
  if (r["counterfactuals"].empty()) {
    txt << r["narrative"].get<std::string>() << "\n";
  }
  for (const auto& cf : r["counterfactuals"]) {
    txt << "cost " << cf["cost"].dump() << ": " << cf["narrative"].get<std::string>() << "\n";
    for (const auto& w : cf.value("warnings", Json::array())) txt << "  warning: " << w.get<std::string>() << "\n";
  }
  run.write("counterfactuals.txt", txt.str());
  return s == LUCID_ERR_INFEASIBLE ? kExitInfeasible : kExitOk;
}

int cmd_compare(const Options& o, Run& run) {
  auto ds = load_dataset(o, run, o.input);
  Split split;
  if (!o.test_input.empty()) {
    split.train = std::move(ds);
    split.test = load_dataset(o, run, o.test_input);
  } else {
    if (o.test_frac <= 0) throw RunError(kExitInput, "compare needs --test-frac or --test");
    split = split_dataset(o, std::move(ds));
  }
  Json models = Json::array();
  auto add_models = [&](const std::vector<std::string>& items, const char* role, const char* flag) {
    for (const auto& item : items) {
      auto [name, file] = split_pair(item, flag);
      run.input(file);
      models.push_back(Json{{"name", name}, {"role", role}, {"model", json_arg("@" + file, flag)}});
    }
  };
  add_models(o.models, "interpretable", "--model");
  add_models(o.baselines, "baseline", "--baseline");
  for (const auto& item : o.predictions) {
    auto [name, file] = split_pair(item, "--predictions");
    run.input(file);
    models.push_back(Json{{"name", name}, {"role", "baseline"}, {"predictions_csv", file}});
  }
  if (models.empty()) throw RunError(kExitInput, "compare needs at least one --model, --baseline or --predictions");
  evaluate(o, run, split, models, "comparison");
  return kExitOk;
}

int cmd_brute_force(const Options& o, Run& run) {
  auto split = split_dataset(o, load_dataset(o, run, o.input));
  CString json;
  std::ostringstream txt;
  if (o.kind == "rulelist") {
    if (o.lambdas.size() != 1) throw RunError(kExitInput, "brute-force takes a single --lambda");
    auto ants = mine(o, split.train.get(), run);
    auto so = search_options(o, o.lambdas.front());
    check(lucid_bruteforce_rulelist(split.train.get(), ants.get(), &so.raw, json.out()));
    Json j = Json::parse(json.str());
    txt << "exhaustive optimum over " << j["lists_evaluated"].get<std::size_t>() << " rule lists\nobjective "
        << j["objective"]["value"]["fraction"].get<std::string>() << "\n"
        << j["model"]["text"].get<std::string>();
  } else if (o.kind == "scoring") {
    auto so = scoring_options(o);
    check(lucid_bruteforce_scoring(split.train.get(), &so, json.out()));
    Json j = Json::parse(json.str());
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", j["objective"].get<double>());
    txt << "exhaustive optimum over " << j["points_evaluated"].get<std::size_t>() << " lattice points\nobjective "
        << buf << "\n" << j["model"]["text"].get<std::string>();
  } else {
    throw RunError(kExitInput, "--kind must be rulelist or scoring");
  }
  run.write("bruteforce.json", json.str());
  run.write("bruteforce.txt", txt.str());
  return kExitOk;
}

// ---------------------------------------------------------------------------

void add_input(CLI::App* sub, Options& o, bool csv) {
  sub->add_option("--input", o.input, csv ? "CSV file" : "Dataset cache, or CSV with --label-col");
  sub->add_option("--label-col", o.label_col, "Label column of a CSV input");
  sub->add_option("--positive", o.positive, "Label value mapped to 1")->capture_default_str();
  sub->add_option("--cutpoints", o.cutpoints, "Binarization config file");
  sub->add_option("--out-dir", o.out_dir, "Output directory")->capture_default_str();
  sub->add_option("--seed", o.seed, "Seed for the train/test split")->capture_default_str();
  sub->add_option("--test-frac", o.test_frac, "Held-out test fraction (0 trains on all rows)")->capture_default_str();
}

void add_mining(CLI::App* sub, Options& o) {
  sub->add_option("--min-support", o.min_support, "Minimum antecedent support fraction")->capture_default_str();
  sub->add_option("--max-card", o.max_card, "Maximum conditions per antecedent")->capture_default_str();
  sub->add_flag("--no-negations", o.no_negations, "Do not mine negated conditions");
}

void add_search(CLI::App* sub, Options& o) {
  sub->add_option("--max-rules", o.max_rules, "Maximum rule-list length")->capture_default_str();
  sub->add_option("--threads", o.threads, "Worker threads")->capture_default_str();
  sub->add_option("--mem-budget", o.mem_budget, "Queue memory budget, e.g. 512M");
  sub->add_option("--max-expansions", o.max_expansions, "Stop after this many expansions (0 = none)")->capture_default_str();
  sub->add_flag("--breadth-first", o.breadth_first, "Breadth-first instead of best-first");
}

void add_scoring(CLI::App* sub, Options& o) {
  sub->add_option("--coef-min", o.coef_min)->capture_default_str();
  sub->add_option("--coef-max", o.coef_max)->capture_default_str();
  sub->add_option("--intercept-min", o.intercept_min)->capture_default_str();
  sub->add_option("--intercept-max", o.intercept_max)->capture_default_str();
  sub->add_option("--sparsity-cap", o.sparsity_cap, "Maximum nonzero coefficients (0 = none)")->capture_default_str();
  sub->add_option("--signs", o.signs, "feature:>=0,feature:<=0,...");
  sub->add_option("--max-nodes", o.max_nodes, "Node budget (0 = none)")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lucid: certifiably optimal rule lists, scoring systems and recourse"};
  app.set_version_flag("--version", std::string(lucid_version()));
  app.require_subcommand(1);
  Options o;

  auto* binarize = app.add_subcommand("binarize", "Binarize a CSV into a dataset cache");
  add_input(binarize, o, true);

  auto* train = app.add_subcommand("train-rulelist", "Certifiably optimal rule list");
  add_input(train, o, false);
  add_mining(train, o);
  add_search(train, o);
  train->add_option("--lambda", o.lambdas, "Per-rule penalty; several values run a sweep")->delimiter(',')->capture_default_str();
  train->add_option("--forbid", o.forbid, "Features or columns no rule may use")->delimiter(',');
  train->add_option("--require", o.require, "Features or columns some rule must use")->delimiter(',');
  train->add_option("--epsilon", o.epsilon)->capture_default_str();
  train->add_option("--margin", o.margin, "Evaluation margin")->capture_default_str();

  auto* rashomon = app.add_subcommand("rashomon", "All rule lists within epsilon of optimal");
  add_input(rashomon, o, false);
  add_mining(rashomon, o);
  add_search(rashomon, o);
  rashomon->add_option("--lambda", o.lambdas)->delimiter(',')->capture_default_str();
  rashomon->add_option("--epsilon", o.epsilon, "Objective tolerance")->capture_default_str();

  auto* riskslim = app.add_subcommand("train-riskslim", "Certifiably optimal integer scoring system");
  add_input(riskslim, o, false);
  add_scoring(riskslim, o);
  riskslim->add_option("--lambda", o.lambdas)->delimiter(',')->capture_default_str();
  riskslim->add_option("--threads", o.threads)->capture_default_str();
  riskslim->add_option("--margin", o.margin, "Evaluation margin")->capture_default_str();

  auto* cf = app.add_subcommand("counterfactual", "Minimum-cost changes that flip a prediction");
  cf->add_option("--model", o.model, "Model or certificate JSON")->required();
  cf->add_option("--input", o.input, "Dataset cache (feature metadata, --row)");
  cf->add_option("--label-col", o.label_col);
  cf->add_option("--positive", o.positive)->capture_default_str();
  cf->add_option("--cutpoints", o.cutpoints);
  cf->add_option("--row", o.row, "Query row of --input");
  cf->add_option("--instance", o.instance, "Query instance as JSON, or @file");
  cf->add_option("--costs", o.costs, "feature=cost,... or JSON, or @file");
  cf->add_option("--immutable", o.immutable, "Features or columns that cannot change")->delimiter(',');
  cf->add_option("--budget", o.budget, "Maximum flips");
  cf->add_option("--target", o.target, "Desired prediction (0 or 1)");
  cf->add_option("--k", o.k, "Number of counterfactuals")->capture_default_str();
  cf->add_option("--seed", o.seed)->capture_default_str();
  cf->add_option("--out-dir", o.out_dir)->capture_default_str();

  auto* compare = app.add_subcommand("compare", "Test-set comparison of interpretable models and baselines");
  add_input(compare, o, false);
  compare->add_option("--test", o.test_input, "Separate test cache instead of --test-frac");
  compare->add_option("--model", o.models, "name=model.json (interpretable)");
  compare->add_option("--baseline", o.baselines, "name=model.json (baseline)");
  compare->add_option("--predictions", o.predictions, "name=predictions.csv (baseline, test rows)");
  compare->add_option("--margin", o.margin, "Flag when a baseline wins by more than this")->capture_default_str();

  auto* brute = app.add_subcommand("brute-force", "Exhaustive optimum for tiny instances");
  add_input(brute, o, false);
  add_mining(brute, o);
  add_scoring(brute, o);
  brute->add_option("--kind", o.kind, "rulelist or scoring")->capture_default_str();
  brute->add_option("--lambda", o.lambdas)->delimiter(',')->capture_default_str();
  brute->add_option("--max-rules", o.max_rules)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  CLI::App* sub = app.get_subcommands().front();
  Run run(sub->get_name(), o);
  int code = kExitOk;
  std::string error;
  try {
    const std::string& name = sub->get_name();
    if (name == "binarize") code = cmd_binarize(o, run);
    else if (name == "train-rulelist") code = cmd_train_rulelist(o, run);
    else if (name == "rashomon") code = cmd_rashomon(o, run);
    else if (name == "train-riskslim") code = cmd_train_riskslim(o, run);
    else if (name == "counterfactual") code = cmd_counterfactual(o, run);
    else if (name == "compare") code = cmd_compare(o, run);
    else code = cmd_brute_force(o, run);
  } catch (const RunError& e) {
    error = e.what();
    code = e.code;
  } catch (const std::exception& e) {
    error = e.what();
    code = kExitInput;
  }
  if (!error.empty()) std::cerr << "lucid: error: " << error << "\n";
  run.finish(*sub, code, error);
  return code;
}
