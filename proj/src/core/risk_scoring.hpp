#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "core/dataset.hpp"
#include "core/rational.hpp"

namespace lucid {

enum class SignConstraint : std::uint8_t { kAny, kNonNegative, kNonPositive, kZero };

/// Parses "any", ">=0", "<=0", "=0" (also "+", "-", "0").
SignConstraint parse_sign(const std::string& text);
const char* sign_name(SignConstraint s);

struct LatticeBounds {
  int coef_min = -10;
  int coef_max = 10;
  int intercept_min = -20;
  int intercept_max = 20;

  void validate() const;
  bool operator==(const LatticeBounds&) const = default;
};

/// Integer-point linear classifier over binary features. Predicts 1 iff the
/// score is positive, i.e. iff the modelled risk exceeds one half.
struct ScoringSystem {
  std::vector<std::string> feature_names;
  std::vector<int> coefficients;
  int intercept = 0;
  Rational lambda{0};
  LatticeBounds bounds;

  std::size_t sparsity() const;
  std::int64_t score(std::span<const std::uint8_t> row) const;
  double risk(std::span<const std::uint8_t> row) const;
  std::uint8_t predict(std::span<const std::uint8_t> row) const { return score(row) > 0 ? 1 : 0; }
  bool operator==(const ScoringSystem&) const = default;
};

/// log(1 + exp(z)) without overflow.
double log1p_exp(double z);
/// 1 / (1 + exp(-z)) without overflow.
double sigmoid(double z);

/// Average logistic loss over a dataset, with rows grouped by distinct
/// (feature pattern, label). Weight vectors carry the intercept at index 0.
class LogisticLoss {
 public:
  explicit LogisticLoss(const Dataset& ds);

  std::size_t dim() const noexcept { return p_ + 1; }
  std::size_t num_patterns() const noexcept { return patterns_.size(); }

  double value(std::span<const double> w) const;
  /// Writes the gradient into `grad` (size dim()) and returns the value.
  double value_and_gradient(std::span<const double> w, std::span<double> grad) const;

 private:
  struct Pattern {
    std::vector<std::uint32_t> active;
    double pos_weight = 0;  // positives / n
    double neg_weight = 0;  // negatives / n
  };
  double score(const Pattern& pat, std::span<const double> w) const;

  std::size_t p_ = 0;
  std::vector<Pattern> patterns_;
};

/// Average logistic loss + lambda * sparsity.
double logistic_objective(const ScoringSystem& model, const Dataset& ds);

/// Affine minorant of the loss: value + gradient . (b - anchor).
struct Cut {
  double value = 0;
  std::vector<double> gradient;
  std::vector<int> anchor;  // intercept first

  double evaluate(std::span<const double> b) const;
};

class CutPool {
 public:
  std::span<const Cut> cuts() const noexcept { return cuts_; }
  std::size_t size() const noexcept { return cuts_.size(); }
  void append(Cut cut) { cuts_.push_back(std::move(cut)); }
  /// Max over cuts; -inf when empty.
  double envelope(std::span<const double> b) const;

 private:
  std::vector<Cut> cuts_;
};

Cut make_cut(const LogisticLoss& loss, std::span<const int> anchor);
void add_cut(CutPool& pool, std::span<const int> anchor, const LogisticLoss& loss);

struct LatticeConfig {
  Rational lambda{1, 100};
  LatticeBounds bounds;
  std::vector<SignConstraint> signs;  // empty or one per feature
  std::size_t sparsity_cap = std::numeric_limits<std::size_t>::max();
  std::size_t threads = 1;
  std::size_t batch_size = 16;
  /// 0 = unlimited.
  std::size_t max_nodes = 500'000;
  /// Further models the certified optimum must not exceed.
  std::vector<ScoringSystem> reference_models;
};

struct LatticeCertificate {
  ScoringSystem model;
  double objective = 0;
  double loss = 0;
  bool optimal = false;
  double lower_bound = 0;
  double gap = 0;
  std::uint64_t nodes_expanded = 0;
  std::uint64_t nodes_pruned = 0;
  std::uint64_t cuts = 0;
  double wall_time_seconds = 0;
};

/// Absolute slack used when pruning nodes and comparing objectives.
inline constexpr double kLatticeTolerance = 1e-10;

LatticeCertificate solve_lattice(const Dataset& ds, const LatticeConfig& cfg);

struct LogisticFit {
  std::vector<double> weights;  // intercept first
  std::size_t iterations = 0;
  double gradient_norm = 0;
  bool converged = false;
};

/// Unpenalized logistic regression by gradient descent with Armijo
/// backtracking, stopping at gradient norm <= tolerance.
LogisticFit fit_logistic_regression(const Dataset& ds, double tolerance = 1e-8,
                                    std::size_t max_iterations = 20'000);

struct RoundedBaseline {
  ScoringSystem model;
  LogisticFit fit;
  double scale = 1;
};

/// Scales the fitted coefficients so the largest one meets the coefficient
/// range, rounds to integers, clamps the intercept and zeroes coefficients
/// that violate a sign constraint.
RoundedBaseline round_logreg_baseline(const Dataset& ds, const LatticeBounds& bounds,
                                      const Rational& lambda,
                                      std::span<const SignConstraint> signs = {});

std::string score_card(const ScoringSystem& model);

}  // namespace lucid
