#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "core/bitvec.hpp"
#include "core/dataset.hpp"
#include "core/rational.hpp"
#include "core/rule_models.hpp"

namespace lucid {

using AntecedentIndex = std::uint32_t;

/// Minority-label rows of each class of rows that no antecedent (or no
/// feature) can tell apart. Every class is either wholly captured by a prefix
/// or wholly uncaptured, so popcount(minority & ~captured) is the number of
/// uncaptured rows any completion must misclassify.
struct EquivalenceClasses {
  BitVector minority;
  std::size_t num_classes = 0;

  static EquivalenceClasses from_features(const Dataset& ds);
  static EquivalenceClasses from_antecedents(const Dataset& ds, std::span<const Antecedent> ants);
};

/// A partial rule list. Rule labels are the majority of newly captured rows.
struct Prefix {
  std::vector<AntecedentIndex> rules;
  BitVector captured;
  std::int64_t errors = 0;
  Rational lower_bound;

  static Prefix build(const Dataset& ds, std::span<const Antecedent> ants,
                      std::span<const AntecedentIndex> rules, const Rational& lambda,
                      const EquivalenceClasses& eq);
};

struct PrefixBounds {
  /// errors on captured rows / n + lambda * length. Bounds the prefix's own
  /// completion and every extension.
  Rational hierarchical;
  /// hierarchical + lambda. Bounds strict extensions only.
  Rational lookahead;
  /// hierarchical + equivalent-point minority mass among uncaptured rows.
  Rational equivalent;
};

PrefixBounds prefix_bounds(const Prefix& prefix, const Dataset& ds, const Rational& lambda,
                           const EquivalenceClasses& eq);

/// Strongest bound valid for every completion of the prefix (including the
/// prefix followed directly by its default rule).
Rational lower_bound(const Prefix& prefix, const Dataset& ds, const Rational& lambda,
                     const EquivalenceClasses& eq);

/// Candidate next rules (indices not already in the prefix) that capture at
/// least one uncaptured row and at least ceil(lambda * n) of them.
std::vector<AntecedentIndex> prune_rules(std::span<const Antecedent> ants, const Prefix& prefix,
                                         const Rational& lambda, const Dataset& ds);

enum class QueueDiscipline : std::uint8_t { kBestFirst, kBreadthFirst };

/// Reported once per prefix the search generates and once when it is popped.
struct PrefixTrace {
  enum class Event : std::uint8_t {
    kQueued,
    kLeaf,                // at max length, evaluated but not extended
    kPrunedHierarchical,  // neither the prefix nor extensions can improve
    kPrunedLookahead,
    kPrunedEquivalent,
    kPrunedSymmetry,
    kExpanded,
  };
  std::span<const AntecedentIndex> rules;
  PrefixBounds bounds;
  Event event;
};

struct SearchConfig {
  Rational lambda{1, 100};
  std::size_t max_length = 3;
  QueueDiscipline discipline = QueueDiscipline::kBestFirst;
  /// Rashomon tolerance; only read by enumerate_rashomon.
  Rational epsilon{0};
  std::size_t threads = 1;
  /// Nodes popped per synchronous round. Part of the search definition: the
  /// result depends on it, the thread count does not.
  std::size_t batch_size = 64;
  /// 0 = unlimited. Approximate bytes held by queue and symmetry map.
  std::size_t memory_budget_bytes = 0;
  /// 0 = unlimited. Stop after expanding this many prefixes.
  std::size_t max_expansions = 0;
  bool symmetry_pruning = true;
  bool support_pruning = true;
  std::size_t max_rashomon_size = 1'000'000;
  std::function<void(const PrefixTrace&)> trace;
};

struct PruneCounts {
  std::uint64_t hierarchical = 0;
  std::uint64_t lookahead = 0;
  std::uint64_t equivalent = 0;
  std::uint64_t support = 0;
  std::uint64_t symmetry = 0;
};

struct Certificate {
  RuleList model;
  std::vector<AntecedentIndex> antecedents;  // indices into the universe given to the solver
  ObjectiveValue objective;
  bool optimal = false;
  Rational lower_bound;  // proven bound on the optimum
  Rational gap;          // objective - lower_bound, 0 when optimal
  std::uint64_t nodes_generated = 0;
  std::uint64_t nodes_expanded = 0;
  std::uint64_t queue_peak = 0;
  PruneCounts pruned;
  std::size_t universe_size = 0;
  std::size_t max_length = 0;
  double wall_time_seconds = 0;
};

Certificate solve(const Dataset& ds, std::span<const Antecedent> ants, const SearchConfig& cfg);

struct RashomonMember {
  std::vector<AntecedentIndex> antecedents;
  RuleList model;
  ObjectiveValue objective;
};

struct RashomonSet {
  ObjectiveValue optimum;
  Rational epsilon;
  Rational threshold;  // optimum + epsilon
  std::vector<RashomonMember> members;  // sorted by (objective, length, indices)
  bool truncated = false;
  bool optimum_certified = true;
  std::uint64_t nodes_generated = 0;
  double wall_time_seconds = 0;
};

RashomonSet enumerate_rashomon(const Dataset& ds, std::span<const Antecedent> ants,
                               const SearchConfig& cfg);

struct FeatureConstraints {
  /// Feature names or source column names.
  std::vector<std::string> forbidden;
  std::vector<std::string> required;
  bool empty() const { return forbidden.empty() && required.empty(); }
};

struct ConstrainedCertificate {
  Certificate constrained;
  Certificate unconstrained;
  Rational objective_gap;  // constrained - unconstrained optimum
};

ConstrainedCertificate resolve_with_constraints(const Dataset& ds, std::span<const Antecedent> ants,
                                                const SearchConfig& cfg,
                                                const FeatureConstraints& constraints);

/// Lists ordered by (objective, length, lexicographic antecedent indices).
bool model_key_less(const Rational& obj_a, std::span<const AntecedentIndex> a,
                    const Rational& obj_b, std::span<const AntecedentIndex> b);

}  // namespace lucid
