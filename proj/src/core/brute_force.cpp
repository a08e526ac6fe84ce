#include "core/brute_force.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/error.hpp"

namespace lucid {

namespace {

bool row_matches(const Antecedent& a, const std::vector<std::uint8_t>& row) {
  for (const auto& c : a.conditions()) {
    if ((row[c.feature] != 0) != c.value) return false;
  }
  return true;
}

struct RowCache {
  std::vector<std::vector<std::uint8_t>> rows;
  std::vector<std::uint8_t> labels;
  // matches[r][i]: antecedent r holds on row i
  std::vector<std::vector<std::uint8_t>> matches;
};

RowCache build_cache(const Dataset& ds, std::span<const Antecedent> ants) {
  RowCache cache;
  for (std::size_t i = 0; i < ds.n(); ++i) {
    cache.rows.push_back(ds.row(i));
    cache.labels.push_back(ds.label(i));
  }
  for (const auto& a : ants) {
    std::vector<std::uint8_t> m(ds.n());
    for (std::size_t i = 0; i < ds.n(); ++i) m[i] = row_matches(a, cache.rows[i]) ? 1 : 0;
    cache.matches.push_back(std::move(m));
  }
  return cache;
}

std::int64_t list_errors(const RowCache& cache, const std::vector<AntecedentIndex>& seq) {
  const std::size_t n = cache.labels.size();
  // Assign every row to the first matching rule (seq.size() = default).
  std::vector<std::size_t> slot(n, seq.size());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < seq.size(); ++k) {
      if (cache.matches[seq[k]][i]) {
        slot[i] = k;
        break;
      }
    }
  }
  std::vector<std::int64_t> pos(seq.size() + 1, 0), tot(seq.size() + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    ++tot[slot[i]];
    pos[slot[i]] += cache.labels[i];
  }
  std::int64_t errors = 0;
  for (std::size_t k = 0; k <= seq.size(); ++k) {
    // Majority label with ties to 0 misclassifies exactly the minority count.
    std::uint8_t label = pos[k] * 2 > tot[k] ? 1 : 0;
    errors += label ? tot[k] - pos[k] : pos[k];
  }
  return errors;
}

void extend(const RowCache& cache, std::size_t universe, std::size_t max_length, const Rational& lambda,
            std::int64_t n, std::vector<AntecedentIndex>& seq, std::vector<bool>& used,
            std::vector<EnumeratedList>& out) {
  EnumeratedList e;
  e.antecedents = seq;
  e.errors = list_errors(cache, seq);
  e.objective = Rational(e.errors, n) + lambda * Rational(static_cast<std::int64_t>(seq.size()));
  out.push_back(std::move(e));
  if (seq.size() == max_length) return;
  for (AntecedentIndex r = 0; r < universe; ++r) {
    if (used[r]) continue;
    used[r] = true;
    seq.push_back(r);
    extend(cache, universe, max_length, lambda, n, seq, used, out);
    seq.pop_back();
    used[r] = false;
  }
}

}  // namespace

std::vector<EnumeratedList> enumerate_rule_lists(const Dataset& ds, std::span<const Antecedent> ants,
                                                 const Rational& lambda, std::size_t max_length) {
  if (ds.n() == 0) fail(ErrorKind::kInput, "dataset has no rows");
  // Refuse instances whose list count explodes.
  double count = 1, term = 1;
  for (std::size_t k = 0; k < max_length; ++k) {
    term *= static_cast<double>(ants.size() > k ? ants.size() - k : 0);
    count += term;
  }
  if (count > 5e7) fail(ErrorKind::kArgument, "instance too large for exhaustive enumeration");
  RowCache cache = build_cache(ds, ants);
  std::vector<EnumeratedList> out;
  std::vector<AntecedentIndex> seq;
  std::vector<bool> used(ants.size(), false);
  extend(cache, ants.size(), max_length, lambda, static_cast<std::int64_t>(ds.n()), seq, used, out);
  return out;
}

EnumeratedList brute_force_rulelist(const Dataset& ds, std::span<const Antecedent> ants, const Rational& lambda,
                                    std::size_t max_length) {
  auto all = enumerate_rule_lists(ds, ants, lambda, max_length);
  auto best = std::min_element(all.begin(), all.end(), [](const EnumeratedList& a, const EnumeratedList& b) {
    return model_key_less(a.objective, a.antecedents, b.objective, b.antecedents);
  });
  return *best;
}

LatticeOptimum brute_force_lattice(const Dataset& ds, const LatticeConfig& cfg) {
  cfg.bounds.validate();
  const std::size_t p = ds.p();
  if (!cfg.signs.empty() && cfg.signs.size() != p) fail(ErrorKind::kArgument, "sign constraints must list one entry per feature");
  std::vector<int> lo(p + 1, cfg.bounds.coef_min), hi(p + 1, cfg.bounds.coef_max);
  lo[0] = cfg.bounds.intercept_min;
  hi[0] = cfg.bounds.intercept_max;
  double points = 1;
  for (std::size_t j = 0; j <= p; ++j) {
    if (j > 0 && !cfg.signs.empty()) {
      switch (cfg.signs[j - 1]) {
        case SignConstraint::kNonNegative: lo[j] = std::max(lo[j], 0); break;
        case SignConstraint::kNonPositive: hi[j] = std::min(hi[j], 0); break;
        case SignConstraint::kZero: lo[j] = hi[j] = 0; break;
        default: break;
      }
    }
    points *= hi[j] - lo[j] + 1;
  }
  if (points * static_cast<double>(ds.n()) > 5e9) fail(ErrorKind::kArgument, "instance too large for exhaustive lattice scan");

  std::vector<std::vector<std::uint8_t>> rows;
  for (std::size_t i = 0; i < ds.n(); ++i) rows.push_back(ds.row(i));
  const double lambda = cfg.lambda.to_double();
  const double n = static_cast<double>(ds.n());

  LatticeOptimum best;
  best.objective = std::numeric_limits<double>::infinity();
  std::vector<int> b = lo;
  while (true) {
    std::size_t nnz = static_cast<std::size_t>(std::count_if(b.begin() + 1, b.end(), [](int v) { return v != 0; }));
    if (nnz <= cfg.sparsity_cap) {
      double loss = 0;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        double s = b[0];
        for (std::size_t j = 0; j < p; ++j) {
          if (rows[i][j]) s += b[j + 1];
        }
        double margin = ds.label(i) ? s : -s;
        // log(1 + exp(-margin)), split to avoid overflow.
        loss += margin >= 0 ? std::log1p(std::exp(-margin)) : -margin + std::log1p(std::exp(margin));
      }
      double value = loss / n + lambda * static_cast<double>(nnz);
      ++best.evaluated;
      if (value < best.objective) {
        best.objective = value;
        best.point = b;
      }
    }
    std::size_t j = 0;
    while (j <= p && b[j] == hi[j]) {
      b[j] = lo[j];
      ++j;
    }
    if (j > p) break;
    ++b[j];
  }
  return best;
}

}  // namespace lucid
