#pragma once

// Independent reference computations shared by unit and acceptance tests.
// Everything here evaluates models row by row and never calls the solvers.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <vector>

#include "core/dataset.hpp"
#include "core/rational.hpp"
#include "core/recourse.hpp"
#include "core/rule_models.hpp"
#include "core/rulelist_search.hpp"

namespace lucid::testing {

/// Objective of an antecedent sequence with majority labels, computed row by row.
inline Rational naive_objective(const Dataset& ds, const std::vector<Antecedent>& ants,
                                const std::vector<AntecedentIndex>& seq, const Rational& lambda) {
  std::vector<std::int64_t> pos(seq.size() + 1), tot(seq.size() + 1);
  for (std::size_t i = 0; i < ds.n(); ++i) {
    auto row = ds.row(i);
    std::size_t k = 0;
    while (k < seq.size() && !ants[seq[k]].satisfied_by(row)) ++k;
    ++tot[k];
    pos[k] += ds.label(i);
  }
  std::int64_t err = 0;
  for (std::size_t k = 0; k <= seq.size(); ++k) err += std::min(pos[k], tot[k] - pos[k]);
  return Rational(err, static_cast<std::int64_t>(ds.n())) + lambda * Rational(static_cast<std::int64_t>(seq.size()));
}

/// Objectives of every ordered sequence of distinct antecedents up to max_len.
inline std::map<std::vector<AntecedentIndex>, Rational> all_sequences(const Dataset& ds,
                                                                      const std::vector<Antecedent>& ants,
                                                                      const Rational& lambda, std::size_t max_len) {
  std::map<std::vector<AntecedentIndex>, Rational> out;
  std::vector<AntecedentIndex> seq;
  auto rec = [&](auto&& self) -> void {
    out.emplace(seq, naive_objective(ds, ants, seq, lambda));
    if (seq.size() == max_len) return;
    for (AntecedentIndex r = 0; r < ants.size(); ++r) {
      if (std::find(seq.begin(), seq.end(), r) != seq.end()) continue;
      seq.push_back(r);
      self(self);
      seq.pop_back();
    }
  };
  rec(rec);
  return out;
}

/// Best objective over the prefix itself and all its extensions (within max_len).
/// `strict` excludes the prefix itself.
class CompletionTable {
 public:
  CompletionTable(const Dataset& ds, const std::vector<Antecedent>& ants, const Rational& lambda, std::size_t max_len)
      : objectives_(all_sequences(ds, ants, lambda, max_len)) {}

  const Rational& objective(const std::vector<AntecedentIndex>& seq) const { return objectives_.at(seq); }

  /// Empty optional when there is no strict extension.
  std::optional<Rational> best(const std::vector<AntecedentIndex>& prefix, bool strict) const {
    std::optional<Rational> best;
    for (auto it = objectives_.lower_bound(prefix); it != objectives_.end(); ++it) {
      const auto& seq = it->first;
      if (seq.size() < prefix.size() || !std::equal(prefix.begin(), prefix.end(), seq.begin())) break;
      if (strict && seq.size() == prefix.size()) continue;
      if (!best || it->second < *best) best = it->second;
    }
    return best;
  }

  const std::map<std::vector<AntecedentIndex>, Rational>& all() const { return objectives_; }

 private:
  std::map<std::vector<AntecedentIndex>, Rational> objectives_;
};

/// Every subset of mutable features within the budget whose flips reach the target.
inline std::vector<std::pair<double, std::uint32_t>> sufficient_subsets(const AnyModel& m, const RecourseQuery& q) {
  const std::size_t p = q.instance.size();
  std::vector<std::pair<double, std::uint32_t>> out;
  for (std::uint32_t mask = 0; mask < (1u << p); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) > q.budget) continue;
    auto row = q.instance;
    double cost = 0;
    bool ok = true;
    for (std::size_t j = 0; j < p; ++j) {
      if (!(mask >> j & 1)) continue;
      if (q.costs.is_immutable(j)) ok = false;
      row[j] ^= 1;
      cost += q.costs.cost(j);
    }
    if (ok && predict(m, row) == q.target) out.emplace_back(cost, mask);
  }
  return out;
}

/// kind 0: scoring system, 1: DNF, 2: rule list.
inline AnyModel random_model(std::mt19937_64& rng, std::size_t p, int kind) {
  std::uniform_int_distribution<std::uint32_t> feat(0, static_cast<std::uint32_t>(p - 1));
  std::bernoulli_distribution coin(0.5);
  if (kind == 0) {
    std::uniform_int_distribution<int> coef(-5, 5);
    ScoringSystem s;
    for (std::size_t j = 0; j < p; ++j) s.coefficients.push_back(coef(rng));
    s.intercept = coef(rng);
    return s;
  }
  std::vector<Conjunction> conj;
  for (int c = 0; c < 3; ++c) {
    Conjunction k{{feat(rng), coin(rng)}};
    auto f2 = feat(rng);
    if (f2 != k[0].feature) k.push_back({f2, coin(rng)});
    std::sort(k.begin(), k.end());
    if (std::find(conj.begin(), conj.end(), k) == conj.end()) conj.push_back(k);
  }
  if (kind == 1) return DnfModel(conj);
  std::vector<Rule> rules;
  for (auto& c : conj) rules.push_back({c, static_cast<std::uint8_t>(coin(rng))});
  return RuleList(rules, coin(rng) ? 1 : 0);
}

}  // namespace lucid::testing
