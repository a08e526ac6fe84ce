#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "core/error.hpp"
#include "core/rule_models.hpp"
#include "oracles.hpp"
#include "random_instances.hpp"

using namespace lucid;

namespace {

Conjunction random_conjunction(std::mt19937_64& rng, std::size_t p) {
  std::uniform_int_distribution<std::uint32_t> feat(0, static_cast<std::uint32_t>(p - 1));
  std::bernoulli_distribution coin(0.5);
  Conjunction c{{feat(rng), coin(rng)}};
  auto f = feat(rng);
  if (f != c[0].feature) c.push_back({f, coin(rng)});
  return c;
}

}  // namespace

TEST_CASE("rule list prediction matches first-match evaluation") {
  std::mt19937_64 rng(31);
  std::bernoulli_distribution coin(0.5);
  for (int trial = 0; trial < 50; ++trial) {
    auto ds = testing::random_dataset(rng, 40, 6);
    std::vector<Rule> rules;
    for (int k = 0; k < 3; ++k) {
      auto c = random_conjunction(rng, ds.p());
      std::sort(c.begin(), c.end());
      bool dup = std::any_of(rules.begin(), rules.end(), [&](const Rule& r) { return r.conditions == c; });
      if (!dup) rules.push_back({c, static_cast<std::uint8_t>(coin(rng))});
    }
    RuleList model(rules, coin(rng));
    auto all = predict_all(model, ds);
    std::int64_t errors = 0;
    for (std::size_t i = 0; i < ds.n(); ++i) {
      auto row = ds.row(i);
      std::uint8_t expect = model.default_prediction();
      for (const auto& r : rules) {
        bool holds = std::all_of(r.conditions.begin(), r.conditions.end(),
                                 [&](const Condition& c) { return (row[c.feature] != 0) == c.value; });
        if (holds) {
          expect = r.prediction;
          break;
        }
      }
      CHECK(model.predict(row) == expect);
      CHECK(all.test(i) == (expect == 1));
      errors += expect != ds.label(i);
    }
    auto obj = objective(model, ds, Rational(1, 100));
    CHECK(obj.errors == errors);
    CHECK(obj.value() == Rational(errors, static_cast<std::int64_t>(ds.n())) +
                             Rational(static_cast<std::int64_t>(model.size()), 100));
  }
}

TEST_CASE("DNF truth table and order independence") {
  // (a and not b) or c
  DnfModel m({{{0, true}, {1, false}}, {{2, true}}});
  DnfModel swapped({{{2, true}}, {{1, false}, {0, true}}});
  for (int bits = 0; bits < 8; ++bits) {
    std::vector<std::uint8_t> row{static_cast<std::uint8_t>(bits & 1), static_cast<std::uint8_t>(bits >> 1 & 1),
                                  static_cast<std::uint8_t>(bits >> 2 & 1)};
    bool expect = (row[0] && !row[1]) || row[2];
    CHECK(m.predict(row) == expect);
    CHECK(swapped.predict(row) == expect);
  }
  CHECK(DnfModel(std::vector<Conjunction>{}).predict(std::vector<std::uint8_t>{1, 1, 1}) == 0);
}

TEST_CASE("model construction rejects malformed input") {
  CHECK_THROWS_AS(RuleList({{{}, 1}}, 0), Error);
  CHECK_THROWS_AS(RuleList({{{{0, true}}, 1}, {{{0, true}}, 0}}, 0), Error);
  CHECK_THROWS_AS(DnfModel(std::vector<Conjunction>{Conjunction{}}), Error);
  RuleList m({{{{3, true}}, 1}}, 0);
  CHECK_THROWS_AS(m.predict(std::vector<std::uint8_t>{1, 0}, 2), Error);
}

TEST_CASE("objective is invariant under row permutation") {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 20; ++trial) {
    auto ds = testing::random_dataset(rng, 30, 5);
    std::vector<Conjunction> ants{random_conjunction(rng, ds.p())};
    auto model = fit_rule_labels(ants, ds);
    std::vector<std::size_t> order(ds.n());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    auto shuffled = ds.subset(order);
    CHECK(objective(model, ds, Rational(1, 50)).value() == objective(model, shuffled, Rational(1, 50)).value());
  }
}

TEST_CASE("fitted labels are the capture-set majority") {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 20; ++trial) {
    auto ds = testing::random_dataset(rng, 35, 5);
    std::vector<Conjunction> conj{random_conjunction(rng, ds.p()), random_conjunction(rng, ds.p())};
    std::sort(conj[0].begin(), conj[0].end());
    std::sort(conj[1].begin(), conj[1].end());
    if (conj[0] == conj[1]) continue;
    auto model = fit_rule_labels(conj, ds);
    std::vector<Antecedent> ants{Antecedent::make(ds, conj[0]), Antecedent::make(ds, conj[1])};
    CHECK(objective(model, ds, Rational(0)).value() == testing::naive_objective(ds, ants, {0, 1}, Rational(0)));
  }
}
