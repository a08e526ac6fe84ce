#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "core/bitvec.hpp"

namespace lucid {

// ---------------------------------------------------------------------------
// Raw tabular input
// ---------------------------------------------------------------------------

enum class ColumnKind : std::uint8_t { kNumeric, kCategorical };

struct RawColumn {
  std::string name;
  ColumnKind kind = ColumnKind::kCategorical;
  std::vector<std::string> text;  // trimmed cell contents
  std::vector<double> numeric;    // valid where !missing and kind == kNumeric
  std::vector<bool> missing;
};

/// Feature columns plus a separate {0,1} label vector. The label column is
/// not part of `columns`.
struct RawTable {
  std::vector<RawColumn> columns;
  std::vector<std::uint8_t> labels;
  std::string label_column;
  std::string positive_label;
  std::string negative_label;

  std::size_t rows() const noexcept { return labels.size(); }
  const RawColumn* find(const std::string& name) const;
};

/// Cells that count as missing: "", "NA", "NaN", "?".
bool is_missing_token(const std::string& cell);

/// RFC 4180 reader. Each record keeps the 1-based line number it starts on.
struct CsvRecord {
  std::size_t line = 0;
  std::vector<std::string> fields;
};
std::vector<CsvRecord> parse_csv(const std::string& content);

RawTable load_csv(const std::filesystem::path& path, const std::string& label_column,
                  const std::string& positive_label);
RawTable table_from_csv_text(const std::string& content, const std::string& label_column,
                             const std::string& positive_label,
                             const std::string& source_name = "<memory>");

// ---------------------------------------------------------------------------
// Binarization
// ---------------------------------------------------------------------------

struct ColumnRule {
  std::optional<std::vector<double>> quantiles;   // overrides the default
  std::vector<double> thresholds;                 // explicit "x<=t" cutpoints
  std::vector<double> intervals;                  // flat lo,hi pairs
  bool force_categorical = false;
  bool ignore = false;
};

struct BinarizationConfig {
  std::vector<double> default_quantiles{0.25, 0.5, 0.75};
  std::map<std::string, ColumnRule> columns;

  /// Key/value text: `<column>.<key> = v1, v2, ...` with keys quantiles,
  /// thresholds, intervals, categorical, ignore; `default.quantiles` sets the
  /// global default. '#' starts a comment.
  static BinarizationConfig parse(const std::string& text);
  static BinarizationConfig load(const std::filesystem::path& path);
};

/// Type-7 (linear interpolation) sample quantile of sorted values.
double sorted_quantile(std::span<const double> sorted, double q);

/// Shortest round-trip decimal rendering used in feature names.
std::string format_number(double v);

// ---------------------------------------------------------------------------
// Binary dataset
// ---------------------------------------------------------------------------

enum class FeatureKind : std::uint8_t {
  kThreshold = 0,
  kInterval = 1,
  kCategory = 2,
  kMissing = 3,
  kBinary = 4,
};

struct FeatureInfo {
  std::string name;
  std::string column;  // source column in the raw table
  FeatureKind kind = FeatureKind::kBinary;
  std::int32_t group = -1;  // one-hot group id, -1 when ungrouped

  bool operator==(const FeatureInfo&) const = default;
};

/// Immutable column-major binary training matrix with a label vector.
class Dataset {
 public:
  Dataset(std::vector<FeatureInfo> features, std::vector<BitVector> columns,
          BitVector labels, std::string positive_label = "1",
          std::string negative_label = "0");

  /// Row-major convenience constructor, mostly for tests and small inputs.
  static Dataset from_rows(std::vector<std::string> names,
                           const std::vector<std::vector<std::uint8_t>>& rows,
                           const std::vector<std::uint8_t>& labels);

  std::size_t n() const noexcept { return labels_.size(); }
  std::size_t p() const noexcept { return features_.size(); }

  const BitVector& column(std::size_t j) const { return columns_.at(j); }
  const BitVector& labels() const noexcept { return labels_; }
  std::uint8_t label(std::size_t i) const { return labels_.test(i) ? 1 : 0; }
  const FeatureInfo& feature(std::size_t j) const { return features_.at(j); }
  std::span<const FeatureInfo> features() const noexcept { return features_; }
  const std::string& label_name(int label) const {
    return label ? positive_label_ : negative_label_;
  }

  std::optional<std::size_t> find_feature(const std::string& name) const;
  std::vector<std::uint8_t> row(std::size_t i) const;
  /// Feature indices belonging to each one-hot group, ordered by group id.
  std::vector<std::vector<std::size_t>> onehot_groups() const;

  Dataset subset(std::span<const std::size_t> rows) const;

  /// Binary cache: magic "LUCIDDS\0", version byte, little-endian payload.
  std::vector<std::uint8_t> serialize() const;
  static Dataset deserialize(std::span<const std::uint8_t> bytes);
  void save(const std::filesystem::path& path) const;
  static Dataset load(const std::filesystem::path& path);

  bool operator==(const Dataset& o) const;

 private:
  std::vector<FeatureInfo> features_;
  std::vector<BitVector> columns_;
  BitVector labels_;
  std::string positive_label_;
  std::string negative_label_;
};

inline constexpr std::uint8_t kDatasetCacheVersion = 1;

Dataset binarize(const RawTable& raw, const BinarizationConfig& config = {});

// ---------------------------------------------------------------------------
// Antecedents
// ---------------------------------------------------------------------------

struct Condition {
  std::uint32_t feature = 0;
  bool value = true;

  bool operator==(const Condition&) const = default;
  /// Feature ascending, positive condition before its negation.
  bool operator<(const Condition& o) const noexcept {
    if (feature != o.feature) return feature < o.feature;
    return value && !o.value;
  }
};

/// A conjunction of binary conditions together with its support over a
/// dataset. Conditions are kept sorted and reference distinct features.
class Antecedent {
 public:
  Antecedent() = default;
  static Antecedent make(const Dataset& ds, std::vector<Condition> conditions);

  std::span<const Condition> conditions() const noexcept { return conditions_; }
  std::size_t cardinality() const noexcept { return conditions_.size(); }
  const BitVector& support() const noexcept { return support_; }

  bool satisfied_by(std::span<const std::uint8_t> row) const;
  bool uses_feature(std::size_t feature) const;
  std::string describe(const Dataset& ds) const;

  /// Cardinality first, then conditions lexicographically.
  bool operator<(const Antecedent& o) const;
  bool operator==(const Antecedent& o) const { return conditions_ == o.conditions_; }

 private:
  std::vector<Condition> conditions_;
  BitVector support_;
};

struct MiningOptions {
  std::size_t max_cardinality = 2;
  double min_support = 0.05;
  bool include_negations = true;
};

/// All conjunctions up to `max_cardinality` whose support fraction and
/// complement fraction are both >= min_support, with equal-support duplicates
/// removed (first in antecedent order wins), returned in antecedent order.
std::vector<Antecedent> mine_antecedents(const Dataset& ds, const MiningOptions& options);

}  // namespace lucid
