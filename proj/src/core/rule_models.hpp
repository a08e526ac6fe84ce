#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "core/bitvec.hpp"
#include "core/dataset.hpp"
#include "core/rational.hpp"

namespace lucid {

using Conjunction = std::vector<Condition>;

/// Rows of `ds` satisfying every condition.
BitVector conjunction_support(const Dataset& ds, std::span<const Condition> conds);
bool conjunction_holds(std::span<const Condition> conds, std::span<const std::uint8_t> row);

struct Rule {
  Conjunction conditions;
  std::uint8_t prediction = 0;

  bool operator==(const Rule&) const = default;
};

/// Ordered IF / ELSE IF / ELSE classifier. First satisfied rule wins.
class RuleList {
 public:
  RuleList() = default;
  RuleList(std::vector<Rule> rules, std::uint8_t default_prediction);

  std::span<const Rule> rules() const noexcept { return rules_; }
  std::uint8_t default_prediction() const noexcept { return default_; }
  std::size_t size() const noexcept { return rules_.size(); }

  /// `num_features` is the p the conditions index into.
  std::uint8_t predict(std::span<const std::uint8_t> row, std::size_t num_features) const;
  std::uint8_t predict(std::span<const std::uint8_t> row) const;

  bool operator==(const RuleList&) const = default;

 private:
  std::vector<Rule> rules_;
  std::uint8_t default_ = 0;
};

/// Disjunction of conjunctions: predicts 1 iff any conjunction holds.
class DnfModel {
 public:
  DnfModel() = default;
  explicit DnfModel(std::vector<Conjunction> conjunctions);

  std::span<const Conjunction> conjunctions() const noexcept { return conjunctions_; }
  std::uint8_t predict(std::span<const std::uint8_t> row, std::size_t num_features) const;
  std::uint8_t predict(std::span<const std::uint8_t> row) const;

 private:
  std::vector<Conjunction> conjunctions_;
};

/// errors / n + lambda * size, kept exact.
struct ObjectiveValue {
  std::int64_t errors = 0;
  std::int64_t size = 0;
  std::int64_t n = 1;
  Rational lambda;

  Rational value() const { return Rational(errors, n) + lambda * Rational(size); }
};

ObjectiveValue objective(const RuleList& model, const Dataset& ds, const Rational& lambda);

/// Labels each rule with the majority label of the rows it captures and the
/// default with the majority of rows no rule captures (ties go to 0).
RuleList fit_rule_labels(std::span<const Conjunction> antecedents, const Dataset& ds);

/// Per-row predictions as a bit vector (bit set = predicts 1).
BitVector predict_all(const RuleList& model, const Dataset& ds);
BitVector predict_all(const DnfModel& model, const Dataset& ds);

std::string describe_conjunction(std::span<const Condition> conds, const Dataset& ds);

}  // namespace lucid
