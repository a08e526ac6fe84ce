#include "core/rule_models.hpp"

#include <algorithm>

#include "core/error.hpp"

namespace lucid {
namespace {

void check_length(std::span<const std::uint8_t> row, std::size_t p) {
  if (row.size() != p) {
    fail(ErrorKind::kArgument, "feature vector has length " + std::to_string(row.size()) +
                                   ", expected " + std::to_string(p));
  }
}

std::size_t max_feature_plus_one(std::span<const Condition> conds) {
  std::size_t m = 0;
  for (const auto& c : conds) m = std::max<std::size_t>(m, c.feature + 1);
  return m;
}

}  // namespace

BitVector conjunction_support(const Dataset& ds, std::span<const Condition> conds) {
  BitVector s(ds.n(), true);
  for (const auto& c : conds) {
    if (c.feature >= ds.p()) fail(ErrorKind::kArgument, "condition references unknown feature");
    if (c.value) {
      s &= ds.column(c.feature);
    } else {
      s.and_not(ds.column(c.feature));
    }
  }
  return s;
}

bool conjunction_holds(std::span<const Condition> conds, std::span<const std::uint8_t> row) {
  for (const auto& c : conds) {
    if (c.feature >= row.size()) fail(ErrorKind::kArgument, "row shorter than condition feature index");
    if ((row[c.feature] != 0) != c.value) return false;
  }
  return true;
}

std::string describe_conjunction(std::span<const Condition> conds, const Dataset& ds) {
  std::string out;
  for (std::size_t k = 0; k < conds.size(); ++k) {
    if (k) out += " and ";
    if (!conds[k].value) out += "not ";
    out += ds.feature(conds[k].feature).name;
  }
  return out;
}

RuleList::RuleList(std::vector<Rule> rules, std::uint8_t default_prediction)
    : rules_(std::move(rules)), default_(default_prediction ? 1 : 0) {
  for (std::size_t a = 0; a < rules_.size(); ++a) {
    auto& conds = rules_[a].conditions;
    if (conds.empty()) fail(ErrorKind::kArgument, "rule with empty antecedent");
    std::sort(conds.begin(), conds.end());
    rules_[a].prediction = rules_[a].prediction ? 1 : 0;
    for (std::size_t b = 0; b < a; ++b) {
      if (rules_[b].conditions == conds) fail(ErrorKind::kArgument, "rule list repeats an antecedent");
    }
  }
}

std::uint8_t RuleList::predict(std::span<const std::uint8_t> row, std::size_t num_features) const {
  check_length(row, num_features);
  return predict(row);
}

std::uint8_t RuleList::predict(std::span<const std::uint8_t> row) const {
  for (const auto& r : rules_) {
    if (conjunction_holds(r.conditions, row)) return r.prediction;
  }
  return default_;
}

DnfModel::DnfModel(std::vector<Conjunction> conjunctions) : conjunctions_(std::move(conjunctions)) {
  for (std::size_t a = 0; a < conjunctions_.size(); ++a) {
    if (conjunctions_[a].empty()) fail(ErrorKind::kArgument, "DNF conjunction with no conditions");
    std::sort(conjunctions_[a].begin(), conjunctions_[a].end());
    for (std::size_t b = 0; b < a; ++b) {
      if (conjunctions_[b] == conjunctions_[a]) fail(ErrorKind::kArgument, "DNF repeats a conjunction");
    }
  }
}

std::uint8_t DnfModel::predict(std::span<const std::uint8_t> row, std::size_t num_features) const {
  check_length(row, num_features);
  return predict(row);
}

std::uint8_t DnfModel::predict(std::span<const std::uint8_t> row) const {
  for (const auto& c : conjunctions_) {
    if (max_feature_plus_one(c) > row.size()) fail(ErrorKind::kArgument, "row shorter than conjunction");
    if (conjunction_holds(c, row)) return 1;
  }
  return 0;
}

ObjectiveValue objective(const RuleList& model, const Dataset& ds, const Rational& lambda) {
  BitVector remaining(ds.n(), true);
  std::int64_t errors = 0;
  for (const auto& r : model.rules()) {
    BitVector cap = conjunction_support(ds, r.conditions) & remaining;
    auto total = static_cast<std::int64_t>(cap.count());
    auto pos = static_cast<std::int64_t>(BitVector::count_and(cap, ds.labels()));
    errors += r.prediction ? total - pos : pos;
    remaining.and_not(cap);
  }
  auto total = static_cast<std::int64_t>(remaining.count());
  auto pos = static_cast<std::int64_t>(BitVector::count_and(remaining, ds.labels()));
  errors += model.default_prediction() ? total - pos : pos;
  return ObjectiveValue{errors, static_cast<std::int64_t>(model.size()),
                        static_cast<std::int64_t>(ds.n()), lambda};
}

RuleList fit_rule_labels(std::span<const Conjunction> antecedents, const Dataset& ds) {
  BitVector remaining(ds.n(), true);
  std::vector<Rule> rules;
  for (const auto& conds : antecedents) {
    BitVector cap = conjunction_support(ds, conds) & remaining;
    std::size_t total = cap.count();
    std::size_t pos = BitVector::count_and(cap, ds.labels());
    rules.push_back(Rule{conds, static_cast<std::uint8_t>(pos * 2 > total ? 1 : 0)});
    remaining.and_not(cap);
  }
  std::size_t total = remaining.count();
  std::size_t pos = BitVector::count_and(remaining, ds.labels());
  return RuleList(std::move(rules), pos * 2 > total ? 1 : 0);
}

BitVector predict_all(const RuleList& model, const Dataset& ds) {
  BitVector remaining(ds.n(), true);
  BitVector out(ds.n());
  for (const auto& r : model.rules()) {
    BitVector cap = conjunction_support(ds, r.conditions) & remaining;
    if (r.prediction) out |= cap;
    remaining.and_not(cap);
  }
  if (model.default_prediction()) out |= remaining;
  return out;
}

BitVector predict_all(const DnfModel& model, const Dataset& ds) {
  BitVector out(ds.n());
  for (const auto& c : model.conjunctions()) out |= conjunction_support(ds, c);
  return out;
}

}  // namespace lucid
