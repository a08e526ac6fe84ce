#include <doctest.h>

#include <algorithm>
#include <random>

#include "core/error.hpp"
#include "core/evaluation.hpp"
#include "random_instances.hpp"

using namespace lucid;

TEST_CASE("confusion of a perfect and a constant model") {
  auto ds = Dataset::from_rows({"y"}, {{1}, {0}, {1}, {0}, {0}}, {1, 0, 1, 0, 0});
  auto perfect = confusion(AnyModel(DnfModel({{{0, true}}})), ds);
  CHECK(perfect.tpr == Rational(1));
  CHECK(perfect.fpr == Rational(0));
  auto zero = confusion(AnyModel(DnfModel()), ds);
  CHECK(zero.tpr == Rational(0));
  CHECK(zero.fpr == Rational(0));
  CHECK(zero.accuracy == Rational(3, 5));
}

TEST_CASE("confusion counts match a manual tally") {
  // IF a THEN 1 ELSE IF b THEN 0 ELSE 1
  RuleList m({{{{0, true}}, 1}, {{{1, true}}, 0}}, 1);
  std::vector<std::vector<std::uint8_t>> rows{{1, 0}, {1, 1}, {0, 1}, {0, 1}, {0, 0}, {0, 0}, {1, 0}, {0, 1}};
  std::vector<std::uint8_t> labels{1, 0, 0, 1, 1, 0, 1, 0};
  auto ds = Dataset::from_rows({"a", "b"}, rows, labels);
  auto r = confusion(AnyModel(m), ds);
  // predictions: 1 1 0 0 1 1 1 0
  CHECK(r.tp == 3);
  CHECK(r.fp == 2);
  CHECK(r.tn == 2);
  CHECK(r.fn == 1);
  CHECK(r.accuracy == Rational(5, 8));
  CHECK(r.tpr == Rational(3, 4));
  CHECK(r.fnr == Rational(1, 4));
  CHECK(r.fpr == Rational(1, 2));
}

TEST_CASE("stratified split preserves class counts and is deterministic") {
  std::vector<std::vector<std::uint8_t>> rows;
  std::vector<std::uint8_t> labels;
  for (int i = 0; i < 100; ++i) {
    rows.push_back({static_cast<std::uint8_t>(i % 3 == 0)});
    labels.push_back(i < 30 ? 1 : 0);
  }
  auto ds = Dataset::from_rows({"x"}, rows, labels);
  auto s = split(ds, 0.5, 42);
  auto pos = s.test.labels().count();
  CHECK(pos >= 14);
  CHECK(pos <= 16);
  auto again = split(ds, 0.5, 42);
  CHECK(again.test_rows == s.test_rows);
  std::vector<std::size_t> all = s.train_rows;
  all.insert(all.end(), s.test_rows.begin(), s.test_rows.end());
  std::sort(all.begin(), all.end());
  for (std::size_t i = 0; i < all.size(); ++i) CHECK(all[i] == i);
  CHECK(split(ds, 0.5, 43).test_rows != s.test_rows);
}

TEST_CASE("split rejects a class with fewer than two rows") {
  auto ds = Dataset::from_rows({"x"}, {{1}, {0}, {1}}, {1, 0, 0});
  CHECK_THROWS_AS(split(ds, 0.5, 1), Error);
}

TEST_CASE("disagreement is symmetric and exact") {
  auto ds = Dataset::from_rows({"a", "b"}, {{1, 0}, {1, 1}, {0, 1}, {0, 0}, {1, 0}, {0, 1}, {1, 1}, {0, 0}, {1, 0}, {0, 1}},
                               {1, 0, 0, 1, 1, 0, 1, 0, 1, 0});
  AnyModel a = DnfModel({{{0, true}}});
  AnyModel b = DnfModel({{{1, true}}});
  AnyModel not_a = DnfModel({{{0, false}}});
  CHECK(disagreement(a, a, ds) == Rational(0));
  CHECK(disagreement(a, not_a, ds) == Rational(1));
  CHECK(disagreement(a, b, ds) == disagreement(b, a, ds));
  int differ = 0;
  for (std::size_t i = 0; i < ds.n(); ++i) differ += predict(a, ds.row(i)) != predict(b, ds.row(i));
  CHECK(disagreement(a, b, ds) == Rational(differ, 10));
}

TEST_CASE("compare flags a baseline beyond the margin") {
  std::mt19937_64 rng(5);
  auto ds = testing::random_dataset(rng, 200, 4);
  auto s = split(ds, 0.3, 9);
  AnyModel good = DnfModel({{{0, true}, {1, true}}, {{2, true}, {0, false}}});
  AnyModel weak = DnfModel();
  std::vector<CompareInput> in{{"same", "dnf", ModelRole::kInterpretable, 2, "", good, std::nullopt},
                               {"same-again", "dnf", ModelRole::kBaseline, 2, "", good, std::nullopt}};
  auto rep = compare(in, s.train, s.test);
  CHECK(rep.accuracy_gap == Rational(0));
  CHECK_FALSE(rep.flagged);
  CHECK(rep.disagreement[0][1] == Rational(0));

  in[0].model = weak;
  rep = compare(in, s.train, s.test);
  CHECK(rep.flagged);
  CHECK(rep.accuracy_gap == rep.rows[1].test.accuracy - rep.rows[0].test.accuracy);
  CHECK(render_comparison(rep).find("FLAGGED") != std::string::npos);
}

TEST_CASE("external predictions are parsed with row ids") {
  auto bv = parse_predictions("row_id,prediction\n1,1\n0,0\n2,1\n", 3);
  CHECK_FALSE(bv.test(0));
  CHECK(bv.test(1));
  CHECK(bv.test(2));
  CHECK_THROWS_AS(parse_predictions("0,1\n0,1\n1,0\n", 2), Error);
  CHECK_THROWS_AS(parse_predictions("0,1\n", 2), Error);
  CHECK_THROWS_AS(parse_predictions("0,2\n1,0\n", 2), Error);
}
