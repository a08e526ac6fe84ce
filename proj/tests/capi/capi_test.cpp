#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <string>

#include "lucid/lucid.h"

// Exercises liblucid strictly through the exported C surface.

namespace {

using Json = nlohmann::ordered_json;

struct Owned {
  char* s = nullptr;
  ~Owned() { lucid_string_free(s); }
  Json json() const { return Json::parse(s); }
};

// Label equals feature "a"; "b" and "c" are noise.
lucid_dataset* tiny_dataset() {
  const uint8_t rows[] = {1, 0, 0, 1, 1, 0, 1, 0, 1, 1, 1, 1, 0, 0, 0, 0, 1, 0, 0, 0, 1, 0, 1, 1};
  const uint8_t labels[] = {1, 1, 1, 1, 0, 0, 0, 0};
  const char* names[] = {"a", "b", "c"};
  lucid_dataset* ds = nullptr;
  REQUIRE(lucid_dataset_from_rows(8, 3, rows, labels, names, &ds) == LUCID_OK);
  return ds;
}

}  // namespace

TEST_CASE("datasets build from rows and report their shape") {
  lucid_dataset* ds = tiny_dataset();
  CHECK(lucid_dataset_rows(ds) == 8);
  CHECK(lucid_dataset_features(ds) == 3);
  Owned info;
  REQUIRE(lucid_dataset_info(ds, &info.s) == LUCID_OK);
  CHECK(info.json()["positives"] == 4);
  lucid_dataset_free(ds);
  CHECK(std::string(lucid_version()).size() > 0);
}

TEST_CASE("null and malformed arguments are argument errors") {
  lucid_dataset* out = nullptr;
  CHECK(lucid_dataset_from_rows(1, 1, nullptr, nullptr, nullptr, &out) == LUCID_ERR_ARGUMENT);
  CHECK(std::string(lucid_last_error()).size() > 0);
  CHECK(lucid_mine_antecedents(nullptr, 1, 0.0, 0, nullptr) == LUCID_ERR_ARGUMENT);

  lucid_dataset* ds = tiny_dataset();
  lucid_antecedents* ants = nullptr;
  REQUIRE(lucid_mine_antecedents(ds, 1, 0.01, 1, &ants) == LUCID_OK);
  lucid_search_options opts;
  lucid_search_options_init(&opts);
  opts.lambda = "one tenth";
  Owned cert, text;
  CHECK(lucid_train_rulelist(ds, ants, &opts, &cert.s, &text.s) == LUCID_ERR_ARGUMENT);
  CHECK(std::string(lucid_last_error()).find("one tenth") != std::string::npos);
  lucid_antecedents_free(ants);
  lucid_dataset_free(ds);
}

TEST_CASE("missing files are reported and leave the output untouched") {
  lucid_dataset* out = nullptr;
  auto st = lucid_dataset_from_csv("/nonexistent/lucid.csv", "y", nullptr, nullptr, &out);
  CHECK((st == LUCID_ERR_IO || st == LUCID_ERR_INPUT));
  CHECK(out == nullptr);
  CHECK(std::string(lucid_last_error()).find("/nonexistent/lucid.csv") != std::string::npos);
  CHECK(lucid_dataset_load("/nonexistent/cache.lucid", &out) != LUCID_OK);
  CHECK(out == nullptr);
}

TEST_CASE("training agrees with the exhaustive reference") {
  lucid_dataset* ds = tiny_dataset();
  lucid_antecedents* ants = nullptr;
  REQUIRE(lucid_mine_antecedents(ds, 1, 0.01, 1, &ants) == LUCID_OK);
  CHECK(lucid_antecedents_count(ants) == 6);
  lucid_search_options opts;
  lucid_search_options_init(&opts);
  opts.max_rules = 2;
  Owned cert, text, brute;
  REQUIRE(lucid_train_rulelist(ds, ants, &opts, &cert.s, &text.s) == LUCID_OK);
  REQUIRE(lucid_bruteforce_rulelist(ds, ants, &opts, &brute.s) == LUCID_OK);
  auto c = cert.json();
  CHECK(c["optimal"] == true);
  CHECK(c["objective"]["value"]["fraction"] == brute.json()["objective"]["value"]["fraction"]);
  CHECK(c["objective"]["errors"] == 0);
  CHECK(std::string(text.s).find("certified optimal") != std::string::npos);

  // A perfect separator meets the zero lower bound on the first expansion.
  opts.max_expansions = 1;
  opts.lambda = "0";
  opts.max_rules = 3;
  Owned cert2, text2;
  CHECK(lucid_train_rulelist(ds, ants, &opts, &cert2.s, &text2.s) == LUCID_OK);

  lucid_antecedents_free(ants);
  lucid_dataset_free(ds);
}

TEST_CASE("counterfactual queries") {
  lucid_dataset* ds = tiny_dataset();
  lucid_antecedents* ants = nullptr;
  REQUIRE(lucid_mine_antecedents(ds, 1, 0.01, 1, &ants) == LUCID_OK);
  lucid_search_options opts;
  lucid_search_options_init(&opts);
  Owned cert, text;
  REQUIRE(lucid_train_rulelist(ds, ants, &opts, &cert.s, &text.s) == LUCID_OK);

  SUBCASE("already at the target needs no change") {
    Owned res;
    REQUIRE(lucid_counterfactual(cert.s, R"({"instance": {"a": 1, "b": 0, "c": 0}, "target": 1})", ds, &res.s) ==
            LUCID_OK);
    auto r = res.json();
    CHECK(r["feasible"] == true);
    CHECK(r["counterfactuals"][0]["flips"].empty());
  }
  SUBCASE("the default target flips the prediction") {
    Owned res;
    REQUIRE(lucid_counterfactual(cert.s, R"({"row": 0})", ds, &res.s) == LUCID_OK);
    auto r = res.json();
    CHECK(r["target"] == 0);
    REQUIRE(r["counterfactuals"][0]["flips"].size() == 1);
    CHECK(r["counterfactuals"][0]["flips"][0]["feature"] == "a");
  }
  SUBCASE("immutable features make the query infeasible") {
    Owned res;
    CHECK(lucid_counterfactual(cert.s, R"({"row": 0, "immutable": ["a"]})", ds, &res.s) == LUCID_ERR_INFEASIBLE);
    REQUIRE(res.s != nullptr);
    CHECK(res.json()["feasible"] == false);
  }
  SUBCASE("unknown features are input errors") {
    Owned res;
    CHECK(lucid_counterfactual(cert.s, R"({"instance": {"zzz": 1}})", ds, &res.s) == LUCID_ERR_INPUT);
  }
  lucid_antecedents_free(ants);
  lucid_dataset_free(ds);
}

TEST_CASE("scoring systems through the C surface") {
  lucid_dataset* ds = tiny_dataset();
  lucid_scoring_options opts;
  lucid_scoring_options_init(&opts);
  opts.coef_min = -3;
  opts.coef_max = 3;
  opts.intercept_min = -3;
  opts.intercept_max = 3;
  Owned cert, text, brute;
  REQUIRE(lucid_train_scoring(ds, &opts, &cert.s, &text.s) == LUCID_OK);
  REQUIRE(lucid_bruteforce_scoring(ds, &opts, &brute.s) == LUCID_OK);
  CHECK(cert.json()["objective"].get<double>() ==
        doctest::Approx(brute.json()["objective"].get<double>()).epsilon(1e-9));
  Owned rendered;
  REQUIRE(lucid_model_text(cert.s, &rendered.s) == LUCID_OK);
  CHECK(std::string(rendered.s).size() > 0);
  lucid_dataset_free(ds);
}
