#include "core/evaluation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "core/error.hpp"

namespace lucid {

namespace {

Rational ratio(std::int64_t num, std::int64_t den) { return den == 0 ? Rational(0) : Rational(num, den); }

}  // namespace

ConfusionReport confusion_from(const BitVector& pred, const BitVector& labels) {
  if (pred.size() != labels.size()) fail(ErrorKind::kArgument, "prediction and label counts differ");
  ConfusionReport r;
  r.tp = static_cast<std::int64_t>(BitVector::count_and(pred, labels));
  r.fp = static_cast<std::int64_t>(BitVector::count_and_not(pred, labels));
  r.fn = static_cast<std::int64_t>(BitVector::count_and_not(labels, pred));
  r.tn = static_cast<std::int64_t>(labels.size()) - r.tp - r.fp - r.fn;
  r.accuracy = ratio(r.tp + r.tn, r.total());
  r.tpr = ratio(r.tp, r.tp + r.fn);
  r.fnr = ratio(r.fn, r.tp + r.fn);
  r.fpr = ratio(r.fp, r.fp + r.tn);
  r.tnr = ratio(r.tn, r.fp + r.tn);
  return r;
}

BitVector predictions(const AnyModel& model, const Dataset& ds) {
  if (const auto* rl = std::get_if<RuleList>(&model)) return predict_all(*rl, ds);
  if (const auto* dnf = std::get_if<DnfModel>(&model)) return predict_all(*dnf, ds);
  const auto& sc = std::get<ScoringSystem>(model);
  if (sc.coefficients.size() != ds.p()) fail(ErrorKind::kArgument, "scoring system and dataset feature counts differ");
  BitVector out(ds.n());
  for (std::size_t i = 0; i < ds.n(); ++i) {
    if (sc.predict(ds.row(i))) out.set(i);
  }
  return out;
}

ConfusionReport confusion(const AnyModel& model, const Dataset& ds) {
  return confusion_from(predictions(model, ds), ds.labels());
}

Split split(const Dataset& ds, double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0 && test_fraction < 1)) fail(ErrorKind::kArgument, "test fraction must lie strictly between 0 and 1");
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> train_rows, test_rows;
  for (int cls = 0; cls <= 1; ++cls) {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < ds.n(); ++i) {
      if (ds.label(i) == cls) rows.push_back(i);
    }
    if (rows.size() < 2) {
      fail(ErrorKind::kInput, "class " + ds.label_name(cls) + " has fewer than 2 rows; cannot stratify");
    }
    // Fisher-Yates with plain modulo keeps the permutation identical across
    // standard library implementations.
    for (std::size_t i = rows.size() - 1; i > 0; --i) {
      std::swap(rows[i], rows[rng() % (i + 1)]);
    }
    auto take = static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(rows.size())));
    take = std::clamp<std::size_t>(take, 1, rows.size() - 1);
    test_rows.insert(test_rows.end(), rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(take));
    train_rows.insert(train_rows.end(), rows.begin() + static_cast<std::ptrdiff_t>(take), rows.end());
  }
  std::sort(train_rows.begin(), train_rows.end());
  std::sort(test_rows.begin(), test_rows.end());
  return Split{ds.subset(train_rows), ds.subset(test_rows), std::move(train_rows), std::move(test_rows)};
}

Rational disagreement(const BitVector& a, const BitVector& b) {
  if (a.size() != b.size()) fail(ErrorKind::kArgument, "prediction vectors differ in length");
  return ratio(static_cast<std::int64_t>((a ^ b).count()), static_cast<std::int64_t>(a.size()));
}

Rational disagreement(const AnyModel& a, const AnyModel& b, const Dataset& ds) {
  return disagreement(predictions(a, ds), predictions(b, ds));
}

BitVector parse_predictions(const std::string& content, std::size_t n, const std::string& source) {
  auto records = parse_csv(content);
  BitVector out(n);
  std::vector<bool> seen(n, false);
  for (std::size_t r = 0; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.fields.size() == 1 && rec.fields[0].empty()) continue;
    auto where = source + ":" + std::to_string(rec.line);
    if (rec.fields.size() != 2) fail(ErrorKind::kInput, where + ": expected 2 fields (row id, prediction)");
    std::size_t id = 0;
    int pred = 0;
    const auto& a = rec.fields[0];
    const auto& b = rec.fields[1];
    auto ra = std::from_chars(a.data(), a.data() + a.size(), id);
    auto rb = std::from_chars(b.data(), b.data() + b.size(), pred);
    bool parsed = ra.ec == std::errc{} && ra.ptr == a.data() + a.size() && rb.ec == std::errc{} &&
                  rb.ptr == b.data() + b.size();
    if (!parsed) {
      if (r == 0) continue;  // header
      fail(ErrorKind::kInput, where + ": row id and prediction must be integers");
    }
    if (id >= n) fail(ErrorKind::kInput, where + ": row id " + a + " out of range");
    if (pred != 0 && pred != 1) fail(ErrorKind::kInput, where + ": prediction must be 0 or 1");
    if (seen[id]) fail(ErrorKind::kInput, where + ": duplicate row id " + a);
    seen[id] = true;
    if (pred) out.set(id);
  }
  auto missing = std::find(seen.begin(), seen.end(), false);
  if (missing != seen.end()) {
    fail(ErrorKind::kInput, source + ": no prediction for row " + std::to_string(missing - seen.begin()));
  }
  return out;
}

BitVector load_predictions(const std::filesystem::path& path, std::size_t n) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kIo, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_predictions(ss.str(), n, path.string());
}

ComparisonReport compare(const std::vector<CompareInput>& models, const Dataset& train, const Dataset& test,
                         const Rational& margin) {
  if (models.empty()) fail(ErrorKind::kArgument, "comparison needs at least one model");
  if (margin < Rational(0)) fail(ErrorKind::kArgument, "margin must be nonnegative");
  ComparisonReport rep;
  rep.margin = margin;
  for (const auto& m : models) {
    ComparisonRow row;
    row.name = m.name;
    row.kind = m.kind;
    row.role = m.role;
    row.size = m.size;
    row.objective = m.objective;
    if (m.model) {
      row.train = confusion(*m.model, train);
      row.test_predictions = predictions(*m.model, test);
    } else if (m.test_predictions) {
      row.test_predictions = *m.test_predictions;
    } else {
      fail(ErrorKind::kArgument, "model '" + m.name + "' has neither a model nor predictions");
    }
    row.test = confusion_from(row.test_predictions, test.labels());
    rep.rows.push_back(std::move(row));
  }
  const std::size_t k = rep.rows.size();
  rep.disagreement.assign(k, std::vector<Rational>(k, Rational(0)));
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a + 1; b < k; ++b) {
      rep.disagreement[a][b] = rep.disagreement[b][a] =
          disagreement(rep.rows[a].test_predictions, rep.rows[b].test_predictions);
    }
  }
  for (std::size_t i = 0; i < k; ++i) {
    auto& best = rep.rows[i].role == ModelRole::kInterpretable ? rep.best_interpretable : rep.best_baseline;
    if (!best || rep.rows[i].test.accuracy > rep.rows[*best].test.accuracy) best = i;
  }
  if (rep.best_interpretable && rep.best_baseline) {
    rep.accuracy_gap = rep.rows[*rep.best_baseline].test.accuracy - rep.rows[*rep.best_interpretable].test.accuracy;
    rep.flagged = rep.accuracy_gap > margin;
  }
  return rep;
}

std::string render_comparison(const ComparisonReport& rep) {
  std::ostringstream os;
  char line[512];
  std::size_t width = 5;
  for (const auto& r : rep.rows) width = std::max(width, r.name.size());
  std::snprintf(line, sizeof line, "%-*s  %-14s  %-13s %5s  %9s  %9s  %6s  %6s  %6s  %6s\n", static_cast<int>(width),
                "model", "kind", "role", "size", "train acc", "test acc", "TPR", "FPR", "TNR", "FNR");
  os << line;
  for (const auto& r : rep.rows) {
    std::string train_acc = r.train ? std::to_string(r.train->accuracy.to_double()).substr(0, 6) : "-";
    std::snprintf(line, sizeof line, "%-*s  %-14s  %-13s %5zu  %9s  %9.4f  %6.4f  %6.4f  %6.4f  %6.4f\n",
                  static_cast<int>(width), r.name.c_str(), r.kind.c_str(),
                  r.role == ModelRole::kInterpretable ? "interpretable" : "baseline", r.size, train_acc.c_str(),
                  r.test.accuracy.to_double(), r.test.tpr.to_double(), r.test.fpr.to_double(),
                  r.test.tnr.to_double(), r.test.fnr.to_double());
    os << line;
  }
  os << "\ntest-set disagreement\n";
  for (std::size_t a = 0; a < rep.rows.size(); ++a) {
    for (std::size_t b = a + 1; b < rep.rows.size(); ++b) {
      std::snprintf(line, sizeof line, "  %s vs %s: %.4f (%s)\n", rep.rows[a].name.c_str(), rep.rows[b].name.c_str(),
                    rep.disagreement[a][b].to_double(), rep.disagreement[a][b].str().c_str());
      os << line;
    }
  }
  os << "\n";
  if (rep.best_interpretable && rep.best_baseline) {
    std::snprintf(line, sizeof line, "best baseline %s minus best interpretable %s test accuracy: %+.4f (margin %.4f)\n",
                  rep.rows[*rep.best_baseline].name.c_str(), rep.rows[*rep.best_interpretable].name.c_str(),
                  rep.accuracy_gap.to_double(), rep.margin.to_double());
    os << line;
    os << (rep.flagged ? "FLAGGED: the baseline beats every interpretable model by more than the margin\n"
                       : "within margin: an interpretable model performs comparably to the baselines\n");
  } else {
    os << "no interpretable/baseline pair to compare\n";
  }
  return os.str();
}

}  // namespace lucid
