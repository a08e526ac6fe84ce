#include <doctest.h>

#include <algorithm>
#include <limits>
#include <random>

#include "core/brute_force.hpp"
#include "core/error.hpp"
#include "core/rulelist_search.hpp"
#include "oracles.hpp"
#include "random_instances.hpp"

using namespace lucid;
using testing::naive_objective;

namespace {

const Rational kLambdas[] = {Rational(0), Rational(1, 200), Rational(1, 100), Rational(1, 20)};

}  // namespace

TEST_CASE("all-zero labels give the empty list") {
  std::vector<std::vector<std::uint8_t>> rows{{1, 0}, {0, 1}, {1, 1}, {0, 0}};
  auto ds = Dataset::from_rows({"a", "b"}, rows, {0, 0, 0, 0});
  std::vector<Antecedent> ants{Antecedent::make(ds, {{0, true}}), Antecedent::make(ds, {{1, true}})};
  auto cert = solve(ds, ants, SearchConfig{});
  CHECK(cert.optimal);
  CHECK(cert.model.size() == 0);
  CHECK(cert.model.default_prediction() == 0);
  CHECK(cert.objective.value() == Rational(0));
}

TEST_CASE("lambda of one makes the empty list optimal") {
  std::mt19937_64 rng(7);
  auto ds = testing::random_dataset(rng, 40, 5);
  auto ants = testing::random_antecedents(rng, ds, 8);
  SearchConfig cfg;
  cfg.lambda = Rational(1);
  auto cert = solve(ds, ants, cfg);
  CHECK(cert.model.size() == 0);
}

TEST_CASE("solve matches exhaustive enumeration on random instances") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    auto ds = testing::random_dataset(rng, 20 + trial, 5);
    auto ants = testing::random_antecedents(rng, ds, 8);
    SearchConfig cfg;
    cfg.lambda = kLambdas[trial % 4];
    cfg.max_length = 3;
    auto cert = solve(ds, ants, cfg);
    auto oracle = brute_force_rulelist(ds, ants, cfg.lambda, 3);
    REQUIRE(cert.optimal);
    CHECK(cert.objective.value() == oracle.objective);
    CHECK(cert.antecedents == oracle.antecedents);
    CHECK(naive_objective(ds, ants, cert.antecedents, cfg.lambda) == cert.objective.value());
  }
}

TEST_CASE("every traced bound is below the best completion") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    auto ds = testing::random_dataset(rng, 30, 5);
    auto ants = testing::random_antecedents(rng, ds, 7);
    SearchConfig cfg;
    cfg.lambda = kLambdas[trial % 4];
    testing::CompletionTable table(ds, ants, cfg.lambda, cfg.max_length);
    std::size_t checked = 0, violations = 0;
    cfg.trace = [&](const PrefixTrace& t) {
      std::vector<AntecedentIndex> prefix(t.rules.begin(), t.rules.end());
      Rational best = *table.best(prefix, false);
      violations += t.bounds.hierarchical > best;
      violations += t.bounds.equivalent > best;
      // Lookahead bounds strict extensions only.
      if (auto ext = table.best(prefix, true)) violations += t.bounds.lookahead > *ext;
      ++checked;
    };
    solve(ds, ants, cfg);
    CHECK(checked > 0);
    CHECK(violations == 0);
  }
}

TEST_CASE("lower_bound of a prefix capturing all rows is the exact objective") {
  std::vector<std::vector<std::uint8_t>> rows{{1, 0}, {0, 1}, {1, 1}, {0, 0}, {1, 0}};
  auto ds = Dataset::from_rows({"a", "b"}, rows, {1, 0, 1, 0, 0});
  std::vector<Antecedent> ants{Antecedent::make(ds, {{0, true}}), Antecedent::make(ds, {{0, false}})};
  auto eq = EquivalenceClasses::from_features(ds);
  std::vector<AntecedentIndex> seq{0, 1};
  auto prefix = Prefix::build(ds, ants, seq, Rational(1, 100), eq);
  CHECK(prefix.lower_bound == naive_objective(ds, ants, seq, Rational(1, 100)));
  auto empty = Prefix::build(ds, ants, {}, Rational(1, 100), eq);
  CHECK(empty.lower_bound == Rational(static_cast<std::int64_t>(eq.minority.count()), 5));
}

TEST_CASE("prune_rules drops rules that capture nothing new or too little") {
  std::vector<std::vector<std::uint8_t>> rows{{1, 1, 0}, {1, 0, 0}, {0, 0, 1}, {0, 0, 0}};
  auto ds = Dataset::from_rows({"a", "b", "c"}, rows, {1, 1, 0, 0});
  std::vector<Antecedent> ants{Antecedent::make(ds, {{0, true}}), Antecedent::make(ds, {{1, true}}),
                               Antecedent::make(ds, {{2, true}})};
  auto eq = EquivalenceClasses::from_features(ds);
  std::vector<AntecedentIndex> seq{0};
  auto prefix = Prefix::build(ds, ants, seq, Rational(0), eq);
  CHECK(prune_rules(ants, prefix, Rational(0), ds) == std::vector<AntecedentIndex>{2});
  CHECK(prune_rules(ants, prefix, Rational(1, 2), ds).empty());
}

TEST_CASE("result is identical with pruning toggles and thread counts") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 15; ++trial) {
    auto ds = testing::random_dataset(rng, 50, 6);
    auto ants = testing::random_antecedents(rng, ds, 10);
    SearchConfig cfg;
    cfg.lambda = kLambdas[trial % 4];
    auto base = solve(ds, ants, cfg);
    SearchConfig off = cfg;
    off.symmetry_pruning = false;
    off.support_pruning = false;
    auto plain = solve(ds, ants, off);
    CHECK(plain.objective.value() == base.objective.value());
    CHECK(plain.antecedents == base.antecedents);
    SearchConfig many = cfg;
    many.threads = 4;
    auto par = solve(ds, ants, many);
    CHECK(par.antecedents == base.antecedents);
    CHECK(par.nodes_expanded == base.nodes_expanded);
    SearchConfig bfs = cfg;
    bfs.discipline = QueueDiscipline::kBreadthFirst;
    CHECK(solve(ds, ants, bfs).antecedents == base.antecedents);
  }
}

TEST_CASE("expansion budget yields an honest gap") {
  std::mt19937_64 rng(14);
  auto ds = testing::random_dataset(rng, 60, 6);
  auto ants = testing::random_antecedents(rng, ds, 10);
  SearchConfig cfg;
  cfg.lambda = Rational(0);
  cfg.max_expansions = 1;
  cfg.batch_size = 1;
  auto cert = solve(ds, ants, cfg);
  auto oracle = brute_force_rulelist(ds, ants, cfg.lambda, 3);
  CHECK_FALSE(cert.optimal);
  CHECK(cert.lower_bound <= oracle.objective);
  CHECK(cert.objective.value() >= oracle.objective);
  CHECK(cert.gap == cert.objective.value() - cert.lower_bound);
}

TEST_CASE("incumbent is non-increasing over the search") {
  std::mt19937_64 rng(15);
  auto ds = testing::random_dataset(rng, 50, 6);
  auto ants = testing::random_antecedents(rng, ds, 10);
  // Pruning decisions only ever compare against the incumbent, so a bound
  // pruned at one time must stay prunable: re-running with a tiny batch
  // exercises many incumbent updates and must reach the same optimum.
  SearchConfig cfg;
  cfg.batch_size = 1;
  auto small = solve(ds, ants, cfg);
  cfg.batch_size = 64;
  auto large = solve(ds, ants, cfg);
  CHECK(small.objective.value() == large.objective.value());
  CHECK(small.antecedents == large.antecedents);
}

TEST_CASE("Rashomon set matches exhaustive filtering") {
  std::mt19937_64 rng(16);
  const Rational eps[] = {Rational(0), Rational(1, 50), Rational(1, 20)};
  for (int trial = 0; trial < 12; ++trial) {
    auto ds = testing::random_dataset(rng, 25, 4);
    auto ants = testing::random_antecedents(rng, ds, 5);
    SearchConfig cfg;
    cfg.lambda = kLambdas[trial % 4];
    cfg.epsilon = eps[trial % 3];
    auto set = enumerate_rashomon(ds, ants, cfg);
    auto all = enumerate_rule_lists(ds, ants, cfg.lambda, cfg.max_length);
    Rational opt = std::min_element(all.begin(), all.end(), [](auto& a, auto& b) { return a.objective < b.objective; })->objective;
    std::vector<std::vector<AntecedentIndex>> expected, got;
    for (auto& e : all) {
      if (e.objective <= opt + cfg.epsilon) expected.push_back(e.antecedents);
    }
    for (auto& m : set.members) got.push_back(m.antecedents);
    std::sort(expected.begin(), expected.end());
    std::sort(got.begin(), got.end());
    CHECK(got == expected);
    CHECK_FALSE(set.truncated);
  }
}

TEST_CASE("large epsilon admits every list") {
  std::mt19937_64 rng(17);
  auto ds = testing::random_dataset(rng, 20, 4);
  auto ants = testing::random_antecedents(rng, ds, 4);
  SearchConfig cfg;
  cfg.epsilon = Rational(10);
  cfg.max_length = 3;
  auto set = enumerate_rashomon(ds, ants, cfg);
  // 1 + 4 + 4*3 + 4*3*2 lists of distinct antecedents.
  CHECK(set.members.size() == 41);
}

TEST_CASE("constraints restrict the feature set and report the gap") {
  std::mt19937_64 rng(18);
  auto ds = testing::random_dataset(rng, 60, 5);
  std::vector<Antecedent> ants;
  for (std::uint32_t j = 0; j < 5; ++j) ants.push_back(Antecedent::make(ds, {{j, true}}));
  SearchConfig cfg;
  FeatureConstraints fc;
  fc.forbidden = {"f0"};
  fc.required = {"f4"};
  auto res = resolve_with_constraints(ds, ants, cfg, fc);
  for (auto idx : res.constrained.antecedents) CHECK(idx != 0);
  CHECK(std::find(res.constrained.antecedents.begin(), res.constrained.antecedents.end(), 4u) !=
        res.constrained.antecedents.end());
  CHECK(res.objective_gap >= Rational(0));

  // Oracle: best list over the remaining antecedents that includes f4.
  Rational best(1000);
  for (auto& e : enumerate_rule_lists(ds, ants, cfg.lambda, cfg.max_length)) {
    bool uses0 = std::find(e.antecedents.begin(), e.antecedents.end(), 0u) != e.antecedents.end();
    bool uses4 = std::find(e.antecedents.begin(), e.antecedents.end(), 4u) != e.antecedents.end();
    if (!uses0 && uses4) best = std::min(best, e.objective);
  }
  CHECK(res.constrained.objective.value() == best);

  FeatureConstraints unknown;
  unknown.forbidden = {"nope"};
  CHECK_THROWS_AS(resolve_with_constraints(ds, ants, cfg, unknown), Error);
  FeatureConstraints impossible;
  impossible.forbidden = {"f4"};
  impossible.required = {"f4"};
  try {
    resolve_with_constraints(ds, ants, cfg, impossible);
    FAIL("expected infeasible");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kInfeasible);
  }
}
