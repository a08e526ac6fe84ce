#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "core/dataset.hpp"
#include "core/rational.hpp"
#include "core/risk_scoring.hpp"
#include "core/rulelist_search.hpp"

namespace lucid {

/// Exhaustive reference solvers for tiny instances. They evaluate every
/// candidate with plain row loops and share no search code with the solvers
/// they audit.

struct EnumeratedList {
  std::vector<AntecedentIndex> antecedents;
  std::int64_t errors = 0;
  Rational objective;
};

/// Every ordered list of distinct antecedents of length 0..max_length, with
/// majority-fitted labels.
std::vector<EnumeratedList> enumerate_rule_lists(const Dataset& ds, std::span<const Antecedent> ants,
                                                 const Rational& lambda, std::size_t max_length);

/// Minimum by (objective, length, lexicographic indices).
EnumeratedList brute_force_rulelist(const Dataset& ds, std::span<const Antecedent> ants,
                                    const Rational& lambda, std::size_t max_length);

struct LatticeOptimum {
  std::vector<int> point;  // intercept first
  double objective = 0;
  std::uint64_t evaluated = 0;
};

/// Scans every point of the constrained coefficient lattice.
LatticeOptimum brute_force_lattice(const Dataset& ds, const LatticeConfig& cfg);

}  // namespace lucid
