#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "core/bitvec.hpp"
#include "core/dataset.hpp"
#include "core/rational.hpp"
#include "core/recourse.hpp"

namespace lucid {

struct ConfusionReport {
  std::int64_t tp = 0, fp = 0, tn = 0, fn = 0;
  Rational accuracy, tpr, fpr, tnr, fnr;  // 0 when the denominator is 0

  std::int64_t total() const { return tp + fp + tn + fn; }
};

ConfusionReport confusion_from(const BitVector& predictions, const BitVector& labels);
ConfusionReport confusion(const AnyModel& model, const Dataset& ds);

/// Per-row predictions (bit set = 1).
BitVector predictions(const AnyModel& model, const Dataset& ds);

struct Split {
  Dataset train;
  Dataset test;
  std::vector<std::size_t> train_rows;  // ascending
  std::vector<std::size_t> test_rows;   // ascending
};

/// Stratified split; each class sends round(fraction * class size) rows to
/// test, at least one to each side. Same seed, same split on every platform.
Split split(const Dataset& ds, double test_fraction, std::uint64_t seed);

Rational disagreement(const BitVector& a, const BitVector& b);
Rational disagreement(const AnyModel& a, const AnyModel& b, const Dataset& ds);

/// Reads "row_id,prediction" lines (header optional) covering rows 0..n-1.
BitVector load_predictions(const std::filesystem::path& path, std::size_t n);
BitVector parse_predictions(const std::string& content, std::size_t n, const std::string& source = "<memory>");

enum class ModelRole : std::uint8_t { kInterpretable, kBaseline };

struct CompareInput {
  std::string name;
  std::string kind;  // "rule_list", "scoring_system", "dnf", "external"
  ModelRole role = ModelRole::kInterpretable;
  std::size_t size = 0;
  std::string objective;  // training objective as text; empty if not applicable
  std::optional<AnyModel> model;
  std::optional<BitVector> test_predictions;  // for models given only as predictions
};

struct ComparisonRow {
  std::string name;
  std::string kind;
  ModelRole role = ModelRole::kInterpretable;
  std::size_t size = 0;
  std::string objective;
  std::optional<ConfusionReport> train;
  ConfusionReport test;
  BitVector test_predictions;
};

struct ComparisonReport {
  std::vector<ComparisonRow> rows;
  std::vector<std::vector<Rational>> disagreement;  // pairwise, on the test set
  Rational margin;
  std::optional<std::size_t> best_interpretable;
  std::optional<std::size_t> best_baseline;
  Rational accuracy_gap;  // best baseline - best interpretable test accuracy
  bool flagged = false;   // gap exceeds the margin
};

ComparisonReport compare(const std::vector<CompareInput>& models, const Dataset& train, const Dataset& test,
                         const Rational& margin = Rational(1, 100));

std::string render_comparison(const ComparisonReport& report);

}  // namespace lucid
