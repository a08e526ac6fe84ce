#include <doctest.h>

#include <algorithm>
#include <limits>
#include <random>

#include "core/error.hpp"
#include "core/recourse.hpp"
#include "oracles.hpp"

using namespace lucid;
using testing::random_model;
using testing::sufficient_subsets;

TEST_CASE("already at target gives the empty flip set") {
  ScoringSystem s;
  s.coefficients = {2, -1};
  s.intercept = 0;
  RecourseQuery q{{1, 0}, 1, {}, 2};
  auto cf = min_cost_counterfactual(AnyModel(s), {}, q);
  REQUIRE(cf);
  CHECK(cf->flips.empty());
  CHECK(cf->cost == 0);
}

TEST_CASE("single dominant flip is chosen for a scoring system") {
  ScoringSystem s;
  s.coefficients = {1, 4, 2};
  s.intercept = -3;
  RecourseQuery q{{0, 0, 0}, 1, {}, 3};
  auto cf = min_cost_counterfactual(AnyModel(s), {}, q);
  REQUIRE(cf);
  REQUIRE(cf->flips.size() == 1);
  CHECK(cf->flips[0].feature == 1);
  CHECK(cf->flips[0].value == 1);
}

TEST_CASE("minimum cost matches subset enumeration") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> unit(0.1, 3.0);
  int feasible = 0;
  for (int t = 0; t < 60; ++t) {
    std::size_t p = 4 + t % 9;
    AnyModel m = random_model(rng, p, t % 3);
    RecourseQuery q;
    std::bernoulli_distribution coin(0.5), rare(0.15);
    for (std::size_t j = 0; j < p; ++j) {
      q.instance.push_back(coin(rng));
      q.costs.flip_costs.push_back(t % 2 ? unit(rng) : 1.0);
      q.costs.immutable.push_back(rare(rng));
    }
    q.target = 1 - predict(m, q.instance);
    q.budget = p;
    auto subsets = sufficient_subsets(m, q);
    auto cf = min_cost_counterfactual(m, {}, q);
    if (subsets.empty()) {
      CHECK_FALSE(cf);
      continue;
    }
    ++feasible;
    REQUIRE(cf);
    double best = std::min_element(subsets.begin(), subsets.end())->first;
    CHECK(cf->cost == doctest::Approx(best).epsilon(1e-12));
    auto row = q.instance;
    for (auto& f : cf->flips) {
      CHECK_FALSE(q.costs.is_immutable(f.feature));
      row[f.feature] = f.value;
    }
    CHECK(predict(m, row) == q.target);
  }
  CHECK(feasible > 20);
}

TEST_CASE("enumeration returns cheapest minimal flip sets in order") {
  ScoringSystem s;
  s.coefficients = {3, 3, 1, 1};
  s.intercept = -1;
  RecourseQuery q{{0, 0, 0, 0}, 1, {{2, 5, 1, 1}, {}}, 4};
  auto list = enumerate_counterfactuals(AnyModel(s), {}, q, 10);
  // Sufficient and minimal: {0} cost 2, {2,3} cost 2, {1} cost 5.
  REQUIRE(list.size() == 3);
  CHECK(list[0].cost == 2);
  CHECK(list[0].flips.size() == 1);
  CHECK(list[1].cost == 2);
  CHECK(list[1].flips.size() == 2);
  CHECK(list[2].cost == 5);
  auto one = enumerate_counterfactuals(AnyModel(s), {}, q, 1);
  REQUIRE(one.size() == 1);
  CHECK(one[0].flips == min_cost_counterfactual(AnyModel(s), {}, q)->flips);
}

TEST_CASE("enumeration matches sorted minimal subsets") {
  std::mt19937_64 rng(22);
  std::uniform_int_distribution<int> costd(1, 4);
  for (int t = 0; t < 30; ++t) {
    std::size_t p = 4 + t % 6;
    AnyModel m = random_model(rng, p, t % 3);
    RecourseQuery q;
    std::bernoulli_distribution coin(0.5);
    for (std::size_t j = 0; j < p; ++j) {
      q.instance.push_back(coin(rng));
      q.costs.flip_costs.push_back(costd(rng));
    }
    q.target = 1 - predict(m, q.instance);
    q.budget = p;
    auto subsets = sufficient_subsets(m, q);
    std::vector<std::pair<double, std::uint32_t>> minimal;
    for (auto& [c, mask] : subsets) {
      bool has_smaller = std::any_of(subsets.begin(), subsets.end(), [&](auto& o) {
        return o.second != mask && (o.second & mask) == o.second;
      });
      if (!has_smaller) minimal.emplace_back(c, mask);
    }
    auto list = enumerate_counterfactuals(m, {}, q, 100);
    REQUIRE(list.size() == minimal.size());
    std::vector<double> got, want;
    for (auto& cf : list) got.push_back(cf.cost);
    for (auto& mc : minimal) want.push_back(mc.first);
    std::sort(want.begin(), want.end());
    CHECK(got == want);
  }
}

TEST_CASE("one-hot groups switch levels together") {
  std::vector<FeatureInfo> feats{{"race=a", "race", FeatureKind::kCategory, 0},
                                 {"race=b", "race", FeatureKind::kCategory, 0},
                                 {"age<=20", "age", FeatureKind::kThreshold, -1},
                                 {"age<=30", "age", FeatureKind::kThreshold, -1}};
  ScoringSystem s;
  s.coefficients = {0, 3, 2, 0};
  s.intercept = -1;
  RecourseQuery q{{1, 0, 0, 0}, 1, {}, 2};
  auto cf = min_cost_counterfactual(AnyModel(s), feats, q);
  REQUIRE(cf);
  // Flipping age<=20 alone costs 1; switching race costs 2.
  CHECK(cf->flips == std::vector<Flip>{{2, 1}});
  CHECK_FALSE(cf->warnings.empty());
  q.costs.immutable = {false, false, true, false};
  cf = min_cost_counterfactual(AnyModel(s), feats, q);
  REQUIRE(cf);
  CHECK(cf->flips == std::vector<Flip>{{0, 0}, {1, 1}});
  CHECK(cf->cost == 2);
  q.budget = 1;
  CHECK_FALSE(min_cost_counterfactual(AnyModel(s), feats, q));
  CHECK(narrate(Counterfactual{{{0, 0}, {1, 1}}, 2, 1, {}}, feats, "approve") ==
        "If you had not race=a and race=b, the prediction would change to approve.");
}

TEST_CASE("budget above p is rejected") {
  ScoringSystem s;
  s.coefficients = {1};
  RecourseQuery q{{0}, 1, {}, 2};
  CHECK_THROWS_AS(min_cost_counterfactual(AnyModel(s), {}, q), Error);
}

TEST_CASE("DNF local explanation picks the smallest satisfied conjunction") {
  // recent delinquency AND high delinquent share, OR at least 4 bad trades
  DnfModel m({{{0, true}, {1, true}}, {{2, true}}});
  std::vector<std::uint8_t> only_trades{0, 0, 1};
  auto e = local_explanation_dnf(m, only_trades);
  CHECK(e.prediction == 1);
  REQUIRE(e.conjunction);
  CHECK(*e.conjunction == 1);
  std::vector<std::uint8_t> both{1, 1, 1};
  CHECK(*local_explanation_dnf(m, both).conjunction == 1);
  std::vector<std::uint8_t> none{1, 0, 0};
  auto z = local_explanation_dnf(m, none);
  CHECK(z.prediction == 0);
  CHECK_FALSE(z.conjunction);
  REQUIRE(z.unmet.size() == 2);
  CHECK(z.unmet[0] == std::vector<Condition>{{1, true}});
}
