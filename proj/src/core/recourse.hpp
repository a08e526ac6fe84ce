#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "core/dataset.hpp"
#include "core/risk_scoring.hpp"
#include "core/rule_models.hpp"

namespace lucid {

using AnyModel = std::variant<RuleList, ScoringSystem, DnfModel>;

std::uint8_t predict(const AnyModel& model, std::span<const std::uint8_t> row);

/// Per-feature flip costs. Immutable features can never be flipped.
struct CostModel {
  std::vector<double> flip_costs;  // empty = 1 per feature
  std::vector<bool> immutable;     // empty = all mutable

  double cost(std::size_t feature) const;
  bool is_immutable(std::size_t feature) const;
};

struct Flip {
  std::uint32_t feature = 0;
  std::uint8_t value = 0;  // value after the flip
  bool operator==(const Flip&) const = default;
};

struct Counterfactual {
  std::vector<Flip> flips;  // sorted by feature
  double cost = 0;
  std::uint8_t prediction = 0;
  std::vector<std::string> warnings;
};

struct RecourseQuery {
  std::vector<std::uint8_t> instance;
  std::uint8_t target = 1;
  CostModel costs;
  std::size_t budget = 0;  // maximum number of flipped features
};

/// Cheapest flip set reaching the target (ties: fewer flips, then
/// lexicographic flipped features). Features sharing a one-hot group move
/// together: switching the active level flips two features. `features` may
/// be empty, in which case every feature is independent.
std::optional<Counterfactual> min_cost_counterfactual(const AnyModel& model, std::span<const FeatureInfo> features,
                                                      const RecourseQuery& query);

/// Up to k cheapest flip sets that reach the target and contain no smaller
/// flip set that already does, in the same order as above.
std::vector<Counterfactual> enumerate_counterfactuals(const AnyModel& model, std::span<const FeatureInfo> features,
                                                      const RecourseQuery& query, std::size_t k);

/// "If you had <flips>, the prediction would change to <target>".
std::string narrate(const Counterfactual& cf, std::span<const FeatureInfo> features, const std::string& target_name);

struct DnfExplanation {
  std::uint8_t prediction = 0;
  std::optional<std::size_t> conjunction;  // index into the model
  /// For a 0 prediction, the unmet conditions of every conjunction.
  std::vector<std::vector<Condition>> unmet;
};

/// For a positive prediction, the satisfied conjunction of least cardinality
/// (ties by conjunction order in the model).
DnfExplanation local_explanation_dnf(const DnfModel& model, std::span<const std::uint8_t> instance);

}  // namespace lucid
