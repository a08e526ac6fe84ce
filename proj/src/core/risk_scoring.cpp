#include "core/risk_scoring.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>

#include "core/error.hpp"
#include "core/log.hpp"
#include "core/parallel.hpp"

namespace lucid {

SignConstraint parse_sign(const std::string& text) {
  if (text == "any" || text == "*") return SignConstraint::kAny;
  if (text == ">=0" || text == "+" || text == "nonneg") return SignConstraint::kNonNegative;
  if (text == "<=0" || text == "-" || text == "nonpos") return SignConstraint::kNonPositive;
  if (text == "=0" || text == "0" || text == "zero") return SignConstraint::kZero;
  fail(ErrorKind::kArgument, "unknown sign constraint '" + text + "' (expected any, >=0, <=0 or =0)");
}

const char* sign_name(SignConstraint s) {
  switch (s) {
    case SignConstraint::kNonNegative: return ">=0";
    case SignConstraint::kNonPositive: return "<=0";
    case SignConstraint::kZero: return "=0";
    default: return "any";
  }
}

void LatticeBounds::validate() const {
  if (coef_min > coef_max) fail(ErrorKind::kArgument, "coefficient minimum exceeds maximum");
  if (coef_min > 0 || coef_max < 0) fail(ErrorKind::kArgument, "coefficient range must contain 0");
  if (intercept_min > intercept_max) fail(ErrorKind::kArgument, "intercept minimum exceeds maximum");
}

std::size_t ScoringSystem::sparsity() const {
  return static_cast<std::size_t>(std::count_if(coefficients.begin(), coefficients.end(), [](int c) { return c != 0; }));
}

std::int64_t ScoringSystem::score(std::span<const std::uint8_t> row) const {
  if (row.size() != coefficients.size()) fail(ErrorKind::kArgument, "feature vector length does not match the model");
  std::int64_t s = intercept;
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (row[j]) s += coefficients[j];
  }
  return s;
}

double ScoringSystem::risk(std::span<const std::uint8_t> row) const {
  return sigmoid(static_cast<double>(score(row)));
}

double log1p_exp(double z) {
  return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  double e = std::exp(z);
  return e / (1.0 + e);
}

// ---------------------------------------------------------------------------
// Loss
// ---------------------------------------------------------------------------

LogisticLoss::LogisticLoss(const Dataset& ds) : p_(ds.p()) {
  std::map<std::vector<std::uint8_t>, std::pair<std::size_t, std::size_t>> groups;
  for (std::size_t i = 0; i < ds.n(); ++i) {
    auto& g = groups[ds.row(i)];
    (ds.label(i) ? g.first : g.second) += 1;
  }
  const double n = static_cast<double>(ds.n());
  for (const auto& [row, counts] : groups) {
    Pattern pat;
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (row[j]) pat.active.push_back(static_cast<std::uint32_t>(j));
    }
    pat.pos_weight = static_cast<double>(counts.first) / n;
    pat.neg_weight = static_cast<double>(counts.second) / n;
    patterns_.push_back(std::move(pat));
  }
}

double LogisticLoss::score(const Pattern& pat, std::span<const double> w) const {
  double s = w[0];
  for (auto j : pat.active) s += w[j + 1];
  return s;
}

double LogisticLoss::value(std::span<const double> w) const {
  if (w.size() != dim()) fail(ErrorKind::kArgument, "weight vector has the wrong dimension");
  double total = 0;
  for (const auto& pat : patterns_) {
    double s = score(pat, w);
    if (pat.pos_weight > 0) total += pat.pos_weight * log1p_exp(-s);
    if (pat.neg_weight > 0) total += pat.neg_weight * log1p_exp(s);
  }
  return total;
}

double LogisticLoss::value_and_gradient(std::span<const double> w, std::span<double> grad) const {
  if (w.size() != dim() || grad.size() != dim()) fail(ErrorKind::kArgument, "weight vector has the wrong dimension");
  std::fill(grad.begin(), grad.end(), 0.0);
  double total = 0;
  for (const auto& pat : patterns_) {
    double s = score(pat, w);
    double d = 0;  // derivative of this pattern's loss in its score
    if (pat.pos_weight > 0) {
      total += pat.pos_weight * log1p_exp(-s);
      d -= pat.pos_weight * sigmoid(-s);
    }
    if (pat.neg_weight > 0) {
      total += pat.neg_weight * log1p_exp(s);
      d += pat.neg_weight * sigmoid(s);
    }
    grad[0] += d;
    for (auto j : pat.active) grad[j + 1] += d;
  }
  return total;
}

namespace {

std::vector<double> to_weights(const ScoringSystem& model) {
  std::vector<double> w(model.coefficients.size() + 1);
  w[0] = model.intercept;
  for (std::size_t j = 0; j < model.coefficients.size(); ++j) w[j + 1] = model.coefficients[j];
  return w;
}

std::vector<double> to_double(std::span<const int> b) { return {b.begin(), b.end()}; }

std::size_t nonzeros(std::span<const int> b) {
  return static_cast<std::size_t>(std::count_if(b.begin() + 1, b.end(), [](int v) { return v != 0; }));
}

}  // namespace

double logistic_objective(const ScoringSystem& model, const Dataset& ds) {
  if (model.coefficients.size() != ds.p()) fail(ErrorKind::kArgument, "model and dataset feature counts differ");
  LogisticLoss loss(ds);
  return loss.value(to_weights(model)) + model.lambda.to_double() * static_cast<double>(model.sparsity());
}

// ---------------------------------------------------------------------------
// Cuts
// ---------------------------------------------------------------------------

double Cut::evaluate(std::span<const double> b) const {
  double v = value;
  for (std::size_t j = 0; j < gradient.size(); ++j) v += gradient[j] * (b[j] - anchor[j]);
  return v;
}

double CutPool::envelope(std::span<const double> b) const {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& c : cuts_) best = std::max(best, c.evaluate(b));
  return best;
}

Cut make_cut(const LogisticLoss& loss, std::span<const int> anchor) {
  if (anchor.size() != loss.dim()) fail(ErrorKind::kArgument, "cut anchor has the wrong dimension");
  Cut cut;
  cut.anchor.assign(anchor.begin(), anchor.end());
  cut.gradient.assign(loss.dim(), 0.0);
  cut.value = loss.value_and_gradient(to_double(anchor), cut.gradient);
  return cut;
}

void add_cut(CutPool& pool, std::span<const int> anchor, const LogisticLoss& loss) {
  pool.append(make_cut(loss, anchor));
}

// ---------------------------------------------------------------------------
// Lattice branch and bound
// ---------------------------------------------------------------------------

namespace {

using Clock = std::chrono::steady_clock;
constexpr std::size_t kExactBoxPoints = 4096;
constexpr int kCutRounds = 3;
constexpr int kDualIterations = 40;
constexpr std::size_t kMaxCuts = 4000;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Box {
  std::vector<int> lo, hi;  // intercept first

  std::size_t points() const {
    std::size_t total = 1;
    for (std::size_t j = 0; j < lo.size(); ++j) {
      auto w = static_cast<std::size_t>(hi[j] - lo[j] + 1);
      if (total > kExactBoxPoints * 64 / w + 1) return kExactBoxPoints * 64;
      total *= w;
    }
    return total;
  }
};

/// Cuts as c + g.b, so every bound evaluation is one dot product.
struct AffineSet {
  std::vector<double> offset;
  std::vector<double> slope;  // row-major, dim entries per cut
  std::size_t dim = 0;

  explicit AffineSet(std::size_t d) : dim(d) {}
  std::size_t size() const { return offset.size(); }
  void add(const Cut& cut) {
    std::vector<double> anchor(cut.anchor.begin(), cut.anchor.end());
    add_tangent(cut.value, cut.gradient, anchor);
  }
  // Any tangent of the convex loss is a global minorant, so the anchor need not be a lattice point.
  void add_tangent(double value, std::span<const double> gradient, std::span<const double> anchor) {
    double c = value;
    for (std::size_t j = 0; j < dim; ++j) c -= gradient[j] * anchor[j];
    offset.push_back(c);
    slope.insert(slope.end(), gradient.begin(), gradient.end());
  }
  double eval(std::size_t k, std::span<const int> b) const {
    double v = offset[k];
    const double* g = &slope[k * dim];
    for (std::size_t j = 0; j < dim; ++j) v += g[j] * b[j];
    return v;
  }
  double envelope(std::span<const int> b) const {
    double best = -kInf;
    for (std::size_t k = 0; k < size(); ++k) best = std::max(best, eval(k, b));
    return best;
  }
};

struct BoundResult {
  double bound = kInf;
  std::vector<int> argmin;  // empty when the box holds no feasible point
  bool exact = false;       // bound is the exact envelope minimum over the box
};

class LatticeSolver {
 public:
  LatticeSolver(const Dataset& ds, const LatticeConfig& cfg)
      : ds_(ds), loss_(ds), cfg_(cfg), lambda_(cfg.lambda.to_double()), dim_(ds.p() + 1) {}

  double penalty(std::span<const int> b) const { return lambda_ * static_cast<double>(nonzeros(b)); }
  double true_objective(std::span<const int> b) const { return loss_.value(to_double(b)) + penalty(b); }
  bool within_cap(std::span<const int> b) const { return nonzeros(b) <= cfg_.sparsity_cap; }

  /// Exact minimum of envelope + penalty over every feasible lattice point.
  BoundResult exact_bound(const Box& box, const AffineSet& cuts) const {
    BoundResult r;
    r.exact = true;
    std::vector<int> b = box.lo;
    while (true) {
      if (within_cap(b)) {
        double v = cuts.envelope(b) + penalty(b);
        if (v < r.bound) {
          r.bound = v;
          r.argmin = b;
        }
      }
      std::size_t j = 0;
      while (j < dim_ && b[j] == box.hi[j]) {
        b[j] = box.lo[j];
        ++j;
      }
      if (j == dim_) break;
      ++b[j];
    }
    return r;
  }

  /// min over lattice points of the box (respecting the cap) of G.b + penalty.
  double separable_min(const Box& box, std::span<const double> g, std::vector<int>& arg) const {
    arg.assign(dim_, 0);
    double total = 0;
    arg[0] = g[0] >= 0 ? box.lo[0] : box.hi[0];
    total += g[0] * arg[0];
    std::size_t forced = 0;
    std::vector<std::pair<double, std::size_t>> optional;  // (gain of going nonzero, coordinate)
    std::vector<int> best_nonzero(dim_, 0);
    for (std::size_t j = 1; j < dim_; ++j) {
      double nz = kInf;
      for (int v : {box.lo[j], box.hi[j], box.lo[j] == 0 ? 1 : 0, box.hi[j] == 0 ? -1 : 0}) {
        if (v == 0 || v < box.lo[j] || v > box.hi[j]) continue;
        double val = g[j] * v + lambda_;
        if (val < nz) {
          nz = val;
          best_nonzero[j] = v;
        }
      }
      bool zero_ok = box.lo[j] <= 0 && box.hi[j] >= 0;
      if (!zero_ok) {
        ++forced;
        total += nz;
        arg[j] = best_nonzero[j];
      } else if (nz < 0) {
        optional.emplace_back(nz, j);
      }
    }
    if (forced > cfg_.sparsity_cap) return kInf;
    std::sort(optional.begin(), optional.end());
    std::size_t room = cfg_.sparsity_cap - forced;
    for (std::size_t k = 0; k < optional.size() && k < room; ++k) {
      total += optional[k].first;
      arg[optional[k].second] = best_nonzero[optional[k].second];
    }
    return total;
  }

  /// Weak duality: for any convex weights mu over the cuts,
  /// sum_k mu_k c_k + min_b (sum_k mu_k g_k).b + penalty(b) bounds the node.
  BoundResult dual_bound(const Box& box, const AffineSet& cuts, double target) const {
    BoundResult r;
    const std::size_t m = cuts.size();
    std::vector<double> g(dim_);
    std::vector<int> arg;
    auto evaluate = [&](const std::vector<double>& mu) {
      std::fill(g.begin(), g.end(), 0.0);
      double c = 0;
      for (std::size_t k = 0; k < m; ++k) {
        if (mu[k] == 0) continue;
        c += mu[k] * cuts.offset[k];
        for (std::size_t j = 0; j < dim_; ++j) g[j] += mu[k] * cuts.slope[k * dim_ + j];
      }
      return c + separable_min(box, g, arg);
    };

    std::vector<double> mu(m, 0.0);
    std::size_t start = 0;
    double start_val = -kInf;
    for (std::size_t k = 0; k < m; ++k) {
      std::span<const double> slope(cuts.slope.data() + k * dim_, dim_);
      double v = cuts.offset[k] + separable_min(box, slope, arg);
      if (v > start_val) {
        start_val = v;
        start = k;
      }
    }
    mu[start] = 1;
    double value = evaluate(mu);
    r.bound = value;
    r.argmin = arg;
    if (value == kInf) {
      r.argmin.clear();
      return r;
    }

    std::vector<double> s(m);
    for (int it = 0; it < kDualIterations; ++it) {
      for (std::size_t k = 0; k < m; ++k) s[k] = cuts.eval(k, arg);
      double mean = std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(m);
      double norm2 = 0;
      for (auto& v : s) {
        v -= mean;
        norm2 += v * v;
      }
      if (norm2 < 1e-30) break;
      double room = std::isfinite(target) ? target - r.bound : 1.0;
      double step = std::max(room, 1e-6) / norm2;
      for (std::size_t k = 0; k < m; ++k) mu[k] += step * s[k];
      project_simplex(mu);
      value = evaluate(mu);
      if (value > r.bound) {
        r.bound = value;
        r.argmin = arg;
      }
    }
    return r;
  }

  static void project_simplex(std::vector<double>& v) {
    std::vector<double> u(v);
    std::sort(u.begin(), u.end(), std::greater<>());
    double cumulative = 0, theta = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      cumulative += u[i];
      double t = (cumulative - 1.0) / static_cast<double>(i + 1);
      if (u[i] - t > 0) theta = t;
    }
    for (auto& x : v) x = std::max(0.0, x - theta);
  }

  struct NodeOutcome {
    double bound = kInf;
    bool resolved = false;  // the node's optimum is among `candidates`
    std::vector<std::pair<double, std::vector<int>>> candidates;
    std::vector<Cut> new_cuts;
  };

  NodeOutcome process(const Box& box, double inherited, const AffineSet& pool, double incumbent) const {
    NodeOutcome out;
    AffineSet cuts = pool;
    const bool small = box.points() <= kExactBoxPoints;
    for (int round = 0; round < kCutRounds; ++round) {
      BoundResult br = small ? exact_bound(box, cuts) : dual_bound(box, cuts, incumbent);
      out.bound = std::max(inherited, br.bound);
      if (br.argmin.empty()) {
        out.resolved = true;  // no feasible point in the box
        return out;
      }
      double actual = true_objective(br.argmin);
      out.candidates.emplace_back(actual, br.argmin);
      double env = cuts.envelope(br.argmin) + penalty(br.argmin);
      if (small && actual - env <= 1e-12) {
        out.resolved = true;
        return out;
      }
      if (out.bound >= std::min(incumbent, actual) - kLatticeTolerance) return out;
      if (actual - env <= 1e-12) return out;  // no cut would tighten at this point
      Cut cut = make_cut(loss_, br.argmin);
      cuts.add(cut);
      out.new_cuts.push_back(std::move(cut));
    }
    if (box.points() == 1) out.resolved = true;
    return out;
  }

  /// Discrete coordinate descent on the true objective inside `box`: move one
  /// coordinate at a time to its best value until no single move helps.
  double polish(const Box& box, std::vector<int>& b, double value) const {
    bool improved = true;
    while (improved) {
      improved = false;
      for (std::size_t j = 0; j < dim_; ++j) {
        const int keep = b[j];
        int best_v = keep;
        for (int v = box.lo[j]; v <= box.hi[j]; ++v) {
          if (v == keep) continue;
          b[j] = v;
          if (!within_cap(b)) continue;
          double val = true_objective(b);
          if (val < value - 1e-12) {
            value = val;
            best_v = v;
            improved = true;
          }
        }
        b[j] = best_v;
      }
    }
    return value;
  }

  LatticeCertificate run();

 private:
  /// Starting incumbents: the zero model and the continuous logistic fit
  /// rounded at several scales, each clamped into the box and polished.
  std::pair<double, std::vector<int>> initial_incumbent(const Box& root, const LogisticFit& fit) const;

  const Dataset& ds_;
  LogisticLoss loss_;
  const LatticeConfig& cfg_;
  double lambda_;
  std::size_t dim_;
};

struct QueuedBox {
  double bound;
  std::uint64_t order;
  Box box;
};

struct QueuedBoxOrder {
  bool operator()(const QueuedBox& a, const QueuedBox& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.order > b.order;
  }
};

bool point_less(double va, const std::vector<int>& a, double vb, const std::vector<int>& b) {
  if (va < vb - 1e-12) return true;
  if (vb < va - 1e-12) return false;
  return a < b;
}

std::pair<double, std::vector<int>> LatticeSolver::initial_incumbent(const Box& root, const LogisticFit& fit) const {
  std::vector<int> best(dim_, 0);
  best[0] = std::clamp(0, root.lo[0], root.hi[0]);
  double best_val = polish(root, best, true_objective(best));

  double largest = 0;
  for (double w : fit.weights) largest = std::max(largest, std::abs(w));
  if (largest == 0 || !std::isfinite(largest)) return {best_val, best};
  int reach = 1;
  for (std::size_t j = 0; j < dim_; ++j) reach = std::max({reach, std::abs(root.lo[j]), std::abs(root.hi[j])});
  for (int target = 1; target <= reach; target *= 2) {
    const double scale = target / largest;
    std::vector<int> b(dim_);
    for (std::size_t j = 0; j < dim_; ++j) {
      b[j] = std::clamp(static_cast<int>(std::lround(scale * fit.weights[j])), root.lo[j], root.hi[j]);
    }
    // Over the cap: keep the intercept and the largest magnitudes.
    if (!within_cap(b)) {
      std::vector<std::size_t> order(dim_ - 1);
      std::iota(order.begin(), order.end(), 1);
      std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return std::abs(fit.weights[x]) > std::abs(fit.weights[y]);
      });
      for (std::size_t k = cfg_.sparsity_cap; k < order.size(); ++k) {
        b[order[k]] = std::clamp(0, root.lo[order[k]], root.hi[order[k]]);
      }
      if (!within_cap(b)) continue;
    }
    double v = polish(root, b, true_objective(b));
    if (point_less(v, b, best_val, best)) {
      best_val = v;
      best = b;
    }
  }
  return {best_val, best};
}

LatticeCertificate LatticeSolver::run() {
  auto started = Clock::now();
  const std::size_t p = dim_ - 1;
  cfg_.bounds.validate();
  if (cfg_.lambda < Rational(0)) fail(ErrorKind::kArgument, "lambda must be nonnegative");
  if (!cfg_.signs.empty() && cfg_.signs.size() != p) {
    fail(ErrorKind::kArgument, "sign constraints must list one entry per feature");
  }

  Box root;
  root.lo.assign(dim_, cfg_.bounds.coef_min);
  root.hi.assign(dim_, cfg_.bounds.coef_max);
  root.lo[0] = cfg_.bounds.intercept_min;
  root.hi[0] = cfg_.bounds.intercept_max;
  for (std::size_t j = 0; j < cfg_.signs.size(); ++j) {
    switch (cfg_.signs[j]) {
      case SignConstraint::kNonNegative: root.lo[j + 1] = std::max(root.lo[j + 1], 0); break;
      case SignConstraint::kNonPositive: root.hi[j + 1] = std::min(root.hi[j + 1], 0); break;
      case SignConstraint::kZero: root.lo[j + 1] = root.hi[j + 1] = 0; break;
      default: break;
    }
  }

  const auto fit = fit_logistic_regression(ds_, 1e-6, 2000);
  auto [best_val, best] = initial_incumbent(root, fit);

  AffineSet pool(dim_);
  std::set<std::vector<int>> anchors;
  auto add_to_pool = [&](const Cut& cut) {
    if (pool.size() >= kMaxCuts || !anchors.insert(cut.anchor).second) return;
    pool.add(cut);
  };
  add_to_pool(make_cut(loss_, best));
  // The tangent at the continuous optimum is nearly flat, so it lifts every
  // node's bound to about the unconstrained minimum loss.
  if (std::all_of(fit.weights.begin(), fit.weights.end(), [](double w) { return std::isfinite(w); })) {
    std::vector<double> grad(dim_);
    double value = loss_.value_and_gradient(fit.weights, grad);
    pool.add_tangent(value, grad, fit.weights);
  }

  std::priority_queue<QueuedBox, std::vector<QueuedBox>, QueuedBoxOrder> queue;
  std::uint64_t order = 0;
  queue.push({-kInf, order++, root});

  LatticeCertificate cert;
  bool stopped = false;
  while (!queue.empty()) {
    if (cfg_.max_nodes && cert.nodes_expanded >= cfg_.max_nodes) {
      stopped = true;
      break;
    }
    std::vector<QueuedBox> batch;
    while (!queue.empty() && batch.size() < std::max<std::size_t>(1, cfg_.batch_size)) {
      QueuedBox q = queue.top();
      queue.pop();
      if (q.bound >= best_val - kLatticeTolerance) {
        ++cert.nodes_pruned;
        continue;
      }
      batch.push_back(std::move(q));
    }
    if (batch.empty()) continue;
    cert.nodes_expanded += batch.size();

    std::vector<NodeOutcome> outcomes(batch.size());
    const double incumbent = best_val;
    parallel_for(batch.size(), cfg_.threads, [&](std::size_t k) {
      outcomes[k] = process(batch[k].box, batch[k].bound, pool, incumbent);
    });

    for (auto& out : outcomes) {
      for (auto& cut : out.new_cuts) add_to_pool(cut);
      for (auto& [value, point] : out.candidates) {
        if (point_less(value, point, best_val, best)) {
          best_val = polish(root, point, value);
          best = point;
        }
      }
    }
    for (std::size_t k = 0; k < batch.size(); ++k) {
      auto& out = outcomes[k];
      if (out.resolved || out.bound >= best_val - kLatticeTolerance) {
        ++cert.nodes_pruned;
        continue;
      }
      const Box& box = batch[k].box;
      std::size_t widest = 0;
      for (std::size_t j = 1; j < dim_; ++j) {
        if (box.hi[j] - box.lo[j] > box.hi[widest] - box.lo[widest]) widest = j;
      }
      int mid = box.lo[widest] + (box.hi[widest] - box.lo[widest]) / 2;
      Box left = box, right = box;
      left.hi[widest] = mid;
      right.lo[widest] = mid + 1;
      queue.push({out.bound, order++, std::move(left)});
      queue.push({out.bound, order++, std::move(right)});
    }
  }

  double lb = best_val;
  if (stopped) {
    while (!queue.empty()) {
      lb = std::min(lb, queue.top().bound);
      queue.pop();
    }
  }

  cert.model.coefficients.assign(best.begin() + 1, best.end());
  cert.model.intercept = best[0];
  cert.model.lambda = cfg_.lambda;
  cert.model.bounds = cfg_.bounds;
  cert.objective = best_val;
  cert.loss = best_val - penalty(best);
  cert.optimal = !stopped;
  cert.lower_bound = stopped ? lb : best_val;
  cert.gap = cert.objective - cert.lower_bound;
  cert.cuts = pool.size();
  cert.wall_time_seconds = std::chrono::duration<double>(Clock::now() - started).count();
  return cert;
}

}  // namespace

LatticeCertificate solve_lattice(const Dataset& ds, const LatticeConfig& cfg) {
  LatticeSolver solver(ds, cfg);
  auto cert = solver.run();
  cert.model.feature_names.clear();
  for (const auto& f : ds.features()) cert.model.feature_names.push_back(f.name);

  if (cert.optimal) {
    // The certified optimum may not lose to any feasible comparison model.
    std::vector<ScoringSystem> refs = cfg.reference_models;
    ScoringSystem zero = cert.model;
    std::fill(zero.coefficients.begin(), zero.coefficients.end(), 0);
    zero.intercept = std::clamp(0, cfg.bounds.intercept_min, cfg.bounds.intercept_max);
    refs.push_back(zero);
    refs.push_back(round_logreg_baseline(ds, cfg.bounds, cfg.lambda, cfg.signs).model);
    for (auto& ref : refs) {
      if (ref.coefficients.size() != ds.p() || ref.sparsity() > cfg.sparsity_cap) continue;
      ref.lambda = cfg.lambda;
      double v = logistic_objective(ref, ds);
      if (cert.objective > v + 1e-9) {
        fail(ErrorKind::kInternal, "certified scoring system is worse than a feasible comparison model");
      }
    }
  }
  log::info("lattice search: objective ", cert.objective, cert.optimal ? " (optimal)" : " (budget)", ", ",
            cert.nodes_expanded, " nodes, ", cert.cuts, " cuts");
  return cert;
}

// ---------------------------------------------------------------------------
// Rounded logistic regression
// ---------------------------------------------------------------------------

LogisticFit fit_logistic_regression(const Dataset& ds, double tolerance, std::size_t max_iterations) {
  LogisticLoss loss(ds);
  const std::size_t d = loss.dim();
  LogisticFit fit;
  fit.weights.assign(d, 0.0);
  std::vector<double> grad(d), next(d), next_grad(d);
  double value = loss.value_and_gradient(fit.weights, grad);
  double step = 1.0;
  auto norm = [](const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
  };
  for (fit.iterations = 0; fit.iterations < max_iterations; ++fit.iterations) {
    fit.gradient_norm = norm(grad);
    if (fit.gradient_norm <= tolerance) {
      fit.converged = true;
      break;
    }
    double g2 = fit.gradient_norm * fit.gradient_norm;
    double t = step;
    double next_value = 0;
    for (int backtrack = 0; backtrack < 60; ++backtrack) {
      for (std::size_t j = 0; j < d; ++j) next[j] = fit.weights[j] - t * grad[j];
      next_value = loss.value_and_gradient(next, next_grad);
      if (next_value <= value - 1e-4 * t * g2) break;
      t *= 0.5;
    }
    // Barzilai-Borwein guess for the next trial step.
    double sy = 0, yy = 0;
    for (std::size_t j = 0; j < d; ++j) {
      double s = next[j] - fit.weights[j];
      double y = next_grad[j] - grad[j];
      sy += s * y;
      yy += y * y;
    }
    step = (sy > 0 && yy > 0) ? std::min(sy / yy, 1e6) : std::max(t * 2, 1e-8);
    if (next_value > value) break;  // no descent possible at working precision
    fit.weights.swap(next);
    grad.swap(next_grad);
    value = next_value;
  }
  fit.gradient_norm = norm(grad);
  fit.converged = fit.gradient_norm <= tolerance;
  if (!fit.converged) {
    log::info("logistic regression stopped at gradient norm ", fit.gradient_norm, " after ", fit.iterations,
              " iterations");
  }
  return fit;
}

RoundedBaseline round_logreg_baseline(const Dataset& ds, const LatticeBounds& bounds, const Rational& lambda,
                                      std::span<const SignConstraint> signs) {
  bounds.validate();
  if (!signs.empty() && signs.size() != ds.p()) fail(ErrorKind::kArgument, "sign constraints must list one entry per feature");
  RoundedBaseline out;
  out.fit = fit_logistic_regression(ds);
  const auto& w = out.fit.weights;

  double scale = kInf;
  for (std::size_t j = 1; j < w.size(); ++j) {
    if (w[j] > 0 && bounds.coef_max > 0) scale = std::min(scale, bounds.coef_max / w[j]);
    if (w[j] < 0 && bounds.coef_min < 0) scale = std::min(scale, bounds.coef_min / w[j]);
  }
  if (!std::isfinite(scale)) scale = 1;
  out.scale = scale;

  ScoringSystem& m = out.model;
  for (const auto& f : ds.features()) m.feature_names.push_back(f.name);
  m.lambda = lambda;
  m.bounds = bounds;
  m.coefficients.resize(ds.p());
  for (std::size_t j = 0; j < ds.p(); ++j) {
    int c = static_cast<int>(std::lround(scale * w[j + 1]));
    c = std::clamp(c, bounds.coef_min, bounds.coef_max);
    SignConstraint s = signs.empty() ? SignConstraint::kAny : signs[j];
    if ((s == SignConstraint::kNonNegative && c < 0) || (s == SignConstraint::kNonPositive && c > 0) ||
        s == SignConstraint::kZero) {
      c = 0;
    }
    m.coefficients[j] = c;
  }
  double b0 = std::clamp(scale * w[0], -1e9, 1e9);
  m.intercept = std::clamp(static_cast<int>(std::lround(b0)), bounds.intercept_min, bounds.intercept_max);
  return out;
}

// ---------------------------------------------------------------------------
// Score card
// ---------------------------------------------------------------------------

std::string score_card(const ScoringSystem& model) {
  std::ostringstream os;
  std::size_t width = 8;
  for (std::size_t j = 0; j < model.coefficients.size(); ++j) {
    if (model.coefficients[j] != 0) width = std::max(width, model.feature_names[j].size());
  }
  char line[512];
  std::size_t row = 0;
  std::int64_t lo = model.intercept, hi = model.intercept;
  for (std::size_t j = 0; j < model.coefficients.size(); ++j) {
    int c = model.coefficients[j];
    if (c == 0) continue;
    ++row;
    std::snprintf(line, sizeof line, "%2zu. %-*s %+4d points\n", row, static_cast<int>(width),
                  model.feature_names[j].c_str(), c);
    os << line;
    (c > 0 ? hi : lo) += c;
  }
  if (row == 0) os << "(no features)\n";
  std::snprintf(line, sizeof line, "    %-*s %+4d points\n", static_cast<int>(width), "intercept", model.intercept);
  os << line;
  os << "    SCORE = intercept + sum of points for each true feature\n\n";
  os << "SCORE  RISK\n";
  for (std::int64_t s = lo; s <= hi; ++s) {
    std::snprintf(line, sizeof line, "%5lld  %5.1f%%\n", static_cast<long long>(s), 100.0 * sigmoid(static_cast<double>(s)));
    os << line;
  }
  os << "predict 1 when SCORE > 0\n";
  return os.str();
}

}  // namespace lucid
