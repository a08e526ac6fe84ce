#include "core/rulelist_search.hpp"

#include <algorithm>
#include <chrono>
#include <memory>
#include <queue>
#include <unordered_map>

#include "core/error.hpp"
#include "core/log.hpp"
#include "core/parallel.hpp"

namespace lucid {

bool model_key_less(const Rational& obj_a, std::span<const AntecedentIndex> a,
                    const Rational& obj_b, std::span<const AntecedentIndex> b) {
  if (obj_a != obj_b) return obj_a < obj_b;
  if (a.size() != b.size()) return a.size() < b.size();
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// ---------------------------------------------------------------------------
// Equivalence classes and prefix bounds (reference path, used by tests and
// by the public helpers; the search uses the scaled integer path below)
// ---------------------------------------------------------------------------

namespace {

EquivalenceClasses classes_from_columns(const Dataset& ds, const std::vector<const BitVector*>& cols) {
  const std::size_t n = ds.n();
  const std::size_t words = (cols.size() + 63) / 64;
  std::vector<std::vector<std::uint64_t>> sig(n, std::vector<std::uint64_t>(words, 0));
  for (std::size_t c = 0; c < cols.size(); ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      if (cols[c]->test(i)) sig[i][c / 64] |= std::uint64_t{1} << (c % 64);
    }
  }
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return sig[a] < sig[b]; });

  EquivalenceClasses eq;
  eq.minority = BitVector(n);
  std::size_t start = 0;
  while (start < n) {
    std::size_t end = start;
    std::size_t pos = 0;
    while (end < n && sig[order[end]] == sig[order[start]]) {
      pos += ds.label(order[end]);
      ++end;
    }
    std::size_t total = end - start;
    // Minority label rows; on a tie either half is a valid witness set.
    std::uint8_t minority_label = pos * 2 < total ? 1 : 0;
    for (std::size_t k = start; k < end; ++k) {
      if (ds.label(order[k]) == minority_label) eq.minority.set(order[k]);
    }
    ++eq.num_classes;
    start = end;
  }
  return eq;
}

}  // namespace

EquivalenceClasses EquivalenceClasses::from_features(const Dataset& ds) {
  std::vector<const BitVector*> cols;
  for (std::size_t j = 0; j < ds.p(); ++j) cols.push_back(&ds.column(j));
  return classes_from_columns(ds, cols);
}

EquivalenceClasses EquivalenceClasses::from_antecedents(const Dataset& ds, std::span<const Antecedent> ants) {
  std::vector<const BitVector*> cols;
  for (const auto& a : ants) cols.push_back(&a.support());
  return classes_from_columns(ds, cols);
}

Prefix Prefix::build(const Dataset& ds, std::span<const Antecedent> ants,
                     std::span<const AntecedentIndex> rules, const Rational& lambda,
                     const EquivalenceClasses& eq) {
  Prefix p;
  p.rules.assign(rules.begin(), rules.end());
  p.captured = BitVector(ds.n());
  for (AntecedentIndex r : rules) {
    if (r >= ants.size()) fail(ErrorKind::kArgument, "prefix references unknown antecedent");
    BitVector fresh = ants[r].support();
    fresh.and_not(p.captured);
    std::size_t total = fresh.count();
    std::size_t pos = BitVector::count_and(fresh, ds.labels());
    p.errors += static_cast<std::int64_t>(std::min(pos, total - pos));
    p.captured |= fresh;
  }
  p.lower_bound = ::lucid::lower_bound(p, ds, lambda, eq);
  return p;
}

PrefixBounds prefix_bounds(const Prefix& prefix, const Dataset& ds, const Rational& lambda,
                           const EquivalenceClasses& eq) {
  const auto n = static_cast<std::int64_t>(ds.n());
  PrefixBounds b;
  b.hierarchical = Rational(prefix.errors, n) + lambda * Rational(static_cast<std::int64_t>(prefix.rules.size()));
  b.lookahead = b.hierarchical + lambda;
  auto mass = static_cast<std::int64_t>(BitVector::count_and_not(eq.minority, prefix.captured));
  b.equivalent = b.hierarchical + Rational(mass, n);
  return b;
}

Rational lower_bound(const Prefix& prefix, const Dataset& ds, const Rational& lambda,
                     const EquivalenceClasses& eq) {
  auto b = prefix_bounds(prefix, ds, lambda, eq);
  return std::max(b.hierarchical, b.equivalent);
}

std::vector<AntecedentIndex> prune_rules(std::span<const Antecedent> ants, const Prefix& prefix,
                                         const Rational& lambda, const Dataset& ds) {
  const std::int64_t min_capture = (lambda * Rational(static_cast<std::int64_t>(ds.n()))).ceil();
  std::vector<AntecedentIndex> keep;
  for (AntecedentIndex r = 0; r < ants.size(); ++r) {
    if (std::find(prefix.rules.begin(), prefix.rules.end(), r) != prefix.rules.end()) continue;
    auto fresh = static_cast<std::int64_t>(BitVector::count_and_not(ants[r].support(), prefix.captured));
    if (fresh == 0 || fresh < min_capture) continue;
    keep.push_back(r);
  }
  return keep;
}

// ---------------------------------------------------------------------------
// Search engine
// ---------------------------------------------------------------------------

namespace {

using Clock = std::chrono::steady_clock;

/// Objectives and bounds are integers over the common denominator
/// n * lambda.den: errors weigh lambda.den each, a rule weighs lambda.num * n.
struct Scale {
  std::int64_t n = 1;
  std::int64_t error_weight = 1;
  std::int64_t rule_cost = 0;

  Scale(std::size_t rows, const Rational& lambda) : n(static_cast<std::int64_t>(rows)) {
    if (lambda < Rational(0)) fail(ErrorKind::kArgument, "lambda must be nonnegative");
    if (rows == 0) fail(ErrorKind::kInput, "dataset has no rows");
    if (lambda.den() > (std::int64_t{1} << 40) / n || lambda.num() > (std::int64_t{1} << 20)) {
      fail(ErrorKind::kArgument, "lambda " + lambda.str() + " is too finely specified for exact search");
    }
    error_weight = lambda.den();
    rule_cost = lambda.num() * n;
  }
  Rational to_rational(std::int64_t v) const { return Rational(v, n * error_weight); }
  std::int64_t value(std::int64_t errors, std::size_t len) const {
    return errors * error_weight + static_cast<std::int64_t>(len) * rule_cost;
  }
  /// Largest scaled integer not exceeding r.
  std::int64_t floor_of(const Rational& r) const {
    __int128 num = static_cast<__int128>(r.num()) * n * error_weight;
    __int128 q = num / r.den();
    if (num % r.den() != 0 && num < 0) --q;
    return static_cast<std::int64_t>(q);
  }
};

struct Node {
  std::vector<AntecedentIndex> seq;
  BitVector captured;
  std::int64_t errors = 0;
  std::int64_t num_captured = 0;
  std::int64_t pos_captured = 0;
  std::int64_t hier = 0;   // scaled
  std::int64_t equiv = 0;  // scaled
  std::uint64_t req_mask = 0;
  bool dead = false;
};
using NodePtr = std::shared_ptr<Node>;

struct Incumbent {
  bool valid = false;
  std::int64_t obj = 0;
  std::vector<AntecedentIndex> seq;
};

bool key_less(std::int64_t oa, std::span<const AntecedentIndex> a, std::int64_t ob,
              std::span<const AntecedentIndex> b) {
  if (oa != ob) return oa < ob;
  if (a.size() != b.size()) return a.size() < b.size();
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

struct Child {
  AntecedentIndex rule = 0;
  bool support_pruned = false;
  BitVector captured;
  std::int64_t errors = 0;
  std::int64_t num_captured = 0;
  std::int64_t pos_captured = 0;
  std::int64_t hier = 0;
  std::int64_t equiv = 0;
  std::int64_t completion = 0;
  std::uint64_t req_mask = 0;
};

enum class Mode { kOptimize, kEnumerate };

struct EngineInput {
  const Dataset& ds;
  std::span<const Antecedent> ants;
  std::vector<std::uint64_t> req_masks;  // per antecedent; empty when unconstrained
  std::uint64_t full_mask = 0;
};

struct EngineResult {
  Incumbent best;
  bool complete = false;
  std::int64_t lower_bound = 0;
  std::uint64_t generated = 0;
  std::uint64_t expanded = 0;
  std::uint64_t queue_peak = 0;
  PruneCounts pruned;
  std::vector<std::pair<std::int64_t, std::vector<AntecedentIndex>>> members;
  bool truncated = false;
};

struct SymmetryEntry {
  std::int64_t errors;
  std::size_t len;
  std::vector<AntecedentIndex> seq;
  std::uint64_t req_mask;
  std::weak_ptr<Node> node;
};

class Engine {
 public:
  Engine(const EngineInput& in, const SearchConfig& cfg, Mode mode, std::int64_t threshold)
      : in_(in),
        cfg_(cfg),
        mode_(mode),
        threshold_(threshold),
        scale_(in.ds.n(), cfg.lambda),
        eq_(EquivalenceClasses::from_antecedents(in.ds, in.ants)),
        total_pos_(static_cast<std::int64_t>(in.ds.labels().count())),
        min_capture_((cfg.lambda * Rational(static_cast<std::int64_t>(in.ds.n()))).ceil()),
        queue_(NodeOrder{cfg.discipline}) {}

  EngineResult run();

 private:
  struct NodeOrder {
    QueueDiscipline discipline;
    // priority_queue keeps the largest on top; "larger" = explored later.
    bool operator()(const NodePtr& a, const NodePtr& b) const {
      if (discipline == QueueDiscipline::kBreadthFirst && a->seq.size() != b->seq.size()) {
        return a->seq.size() > b->seq.size();
      }
      if (a->equiv != b->equiv) return a->equiv > b->equiv;
      if (a->seq.size() != b->seq.size()) return a->seq.size() > b->seq.size();
      return std::lexicographical_compare(b->seq.begin(), b->seq.end(), a->seq.begin(), a->seq.end());
    }
  };

  bool constrained() const { return !in_.req_masks.empty(); }
  bool feasible(std::uint64_t mask) const { return mask == in_.full_mask; }

  std::int64_t completion_value(std::int64_t errors, std::int64_t num_captured, std::int64_t pos_captured,
                                std::size_t len) const {
    std::int64_t upos = total_pos_ - pos_captured;
    std::int64_t utot = scale_.n - num_captured;
    return scale_.value(errors + std::min(upos, utot - upos), len);
  }

  /// Can a list of length >= min_len that starts with `seq` and has objective
  /// >= bound still precede the incumbent (or fall within the threshold)?
  bool can_improve(std::int64_t bound, std::span<const AntecedentIndex> seq, std::size_t min_len) const {
    if (mode_ == Mode::kEnumerate) return bound <= threshold_;
    if (!best_.valid || bound < best_.obj) return true;
    if (bound > best_.obj) return false;
    if (min_len != best_.seq.size()) return min_len < best_.seq.size();
    std::size_t k = std::min(seq.size(), best_.seq.size());
    auto cmp = std::lexicographical_compare_three_way(seq.begin(), seq.begin() + static_cast<std::ptrdiff_t>(k),
                                                      best_.seq.begin(), best_.seq.begin() + static_cast<std::ptrdiff_t>(k));
    if (cmp != 0) return cmp < 0;
    return min_len > seq.size();
  }

  void consider(std::int64_t value, std::span<const AntecedentIndex> seq, std::uint64_t mask) {
    if (!feasible(mask)) return;
    if (mode_ == Mode::kEnumerate) {
      if (value <= threshold_) {
        if (result_.members.size() >= cfg_.max_rashomon_size) {
          result_.truncated = true;
          return;
        }
        result_.members.emplace_back(value, std::vector<AntecedentIndex>(seq.begin(), seq.end()));
      }
      return;
    }
    if (!best_.valid || key_less(value, seq, best_.obj, best_.seq)) {
      best_.valid = true;
      best_.obj = value;
      best_.seq.assign(seq.begin(), seq.end());
      log::debug("incumbent ", scale_.to_rational(value).str(), " length ", seq.size());
    }
  }

  void trace(std::span<const AntecedentIndex> seq, std::int64_t hier, std::int64_t equiv,
             PrefixTrace::Event event) const {
    if (!cfg_.trace) return;
    PrefixBounds b{scale_.to_rational(hier), scale_.to_rational(hier + scale_.rule_cost),
                   scale_.to_rational(equiv)};
    cfg_.trace(PrefixTrace{seq, b, event});
  }

  /// Classifies why extensions of a prefix cannot help, or returns kQueued.
  PrefixTrace::Event extension_verdict(std::int64_t hier, std::int64_t equiv,
                                       std::span<const AntecedentIndex> seq) const {
    const std::size_t next = seq.size() + 1;
    if (!can_improve(hier, seq, next)) return PrefixTrace::Event::kPrunedHierarchical;
    if (!can_improve(hier + scale_.rule_cost, seq, next)) return PrefixTrace::Event::kPrunedLookahead;
    if (!can_improve(equiv + scale_.rule_cost, seq, next)) return PrefixTrace::Event::kPrunedEquivalent;
    return PrefixTrace::Event::kQueued;
  }

  void count(PrefixTrace::Event e) {
    switch (e) {
      case PrefixTrace::Event::kPrunedHierarchical: ++result_.pruned.hierarchical; break;
      case PrefixTrace::Event::kPrunedLookahead: ++result_.pruned.lookahead; break;
      case PrefixTrace::Event::kPrunedEquivalent: ++result_.pruned.equivalent; break;
      case PrefixTrace::Event::kPrunedSymmetry: ++result_.pruned.symmetry; break;
      default: break;
    }
  }

  /// True when an existing prefix with the same captured rows dominates the
  /// candidate; otherwise records it and retires any prefixes it dominates.
  bool symmetry_dominated(const NodePtr& node);

  std::vector<Child> expand(const Node& node) const;
  void push(NodePtr node);
  std::size_t node_bytes(const Node& node) const {
    return sizeof(Node) + node.captured.num_words() * 8 + node.seq.capacity() * 4 + 64;
  }
  bool over_budget() const {
    if (cfg_.max_expansions && result_.expanded >= cfg_.max_expansions) return true;
    if (cfg_.memory_budget_bytes && live_bytes_ > cfg_.memory_budget_bytes) return true;
    return false;
  }

  const EngineInput& in_;
  const SearchConfig& cfg_;
  Mode mode_;
  std::int64_t threshold_;
  Scale scale_;
  EquivalenceClasses eq_;
  std::int64_t total_pos_;
  std::int64_t min_capture_;
  std::priority_queue<NodePtr, std::vector<NodePtr>, NodeOrder> queue_;
  std::unordered_map<BitVector, std::vector<SymmetryEntry>, BitVectorHash> symmetry_;
  std::size_t live_bytes_ = 0;
  Incumbent best_;
  EngineResult result_;
};

std::vector<Child> Engine::expand(const Node& node) const {
  const auto& ds = in_.ds;
  std::vector<bool> used(in_.ants.size(), false);
  for (auto r : node.seq) used[r] = true;
  const bool prune_support = mode_ == Mode::kOptimize && cfg_.support_pruning;
  const std::size_t len = node.seq.size() + 1;

  std::vector<Child> out;
  for (AntecedentIndex r = 0; r < in_.ants.size(); ++r) {
    if (used[r]) continue;
    Child c;
    c.rule = r;
    c.req_mask = node.req_mask | (constrained() ? in_.req_masks[r] : 0);
    BitVector fresh = in_.ants[r].support();
    fresh.and_not(node.captured);
    auto total = static_cast<std::int64_t>(fresh.count());
    // A rule that adds a required feature may be needed regardless of support.
    bool adds_requirement = c.req_mask != node.req_mask;
    if (prune_support && !adds_requirement && (total == 0 || total < min_capture_)) {
      c.support_pruned = true;
      out.push_back(std::move(c));
      continue;
    }
    auto pos = static_cast<std::int64_t>(BitVector::count_and(fresh, ds.labels()));
    c.captured = node.captured | fresh;
    c.errors = node.errors + std::min(pos, total - pos);
    c.num_captured = node.num_captured + total;
    c.pos_captured = node.pos_captured + pos;
    c.hier = scale_.value(c.errors, len);
    auto mass = static_cast<std::int64_t>(BitVector::count_and_not(eq_.minority, c.captured));
    c.equiv = c.hier + mass * scale_.error_weight;
    c.completion = completion_value(c.errors, c.num_captured, c.pos_captured, len);
    out.push_back(std::move(c));
  }
  return out;
}

bool Engine::symmetry_dominated(const NodePtr& node) {
  auto& entries = symmetry_[node->captured];
  if (entries.empty()) live_bytes_ += node->captured.num_words() * 8 + 96;
  const std::size_t len = node->seq.size();
  for (const auto& e : entries) {
    bool covers = (e.req_mask & node->req_mask) == node->req_mask;
    if (covers && e.len <= len && e.errors <= node->errors &&
        (e.len < len || e.errors < node->errors ||
         std::lexicographical_compare(e.seq.begin(), e.seq.end(), node->seq.begin(), node->seq.end()))) {
      return true;
    }
  }
  // The candidate survives; retire entries it dominates.
  std::erase_if(entries, [&](const SymmetryEntry& e) {
    bool covers = (node->req_mask & e.req_mask) == e.req_mask;
    bool dominated = covers && len <= e.len && node->errors <= e.errors;
    if (dominated) {
      if (auto live = e.node.lock(); live && !live->dead) {
        live->dead = true;
        ++result_.pruned.symmetry;
      }
      live_bytes_ -= std::min(live_bytes_, e.seq.capacity() * 4 + 48);
    }
    return dominated;
  });
  entries.push_back(SymmetryEntry{node->errors, len, node->seq, node->req_mask, node});
  live_bytes_ += node->seq.capacity() * 4 + 48;
  return false;
}

void Engine::push(NodePtr node) {
  live_bytes_ += node_bytes(*node);
  queue_.push(std::move(node));
  result_.queue_peak = std::max<std::uint64_t>(result_.queue_peak, queue_.size());
}

EngineResult Engine::run() {
  const auto& ds = in_.ds;
  auto root = std::make_shared<Node>();
  root->captured = BitVector(ds.n());
  root->hier = 0;
  root->equiv = static_cast<std::int64_t>(eq_.minority.count()) * scale_.error_weight;
  ++result_.generated;
  consider(completion_value(0, 0, 0, 0), root->seq, 0);
  if (cfg_.max_length == 0) {
    trace(root->seq, root->hier, root->equiv, PrefixTrace::Event::kLeaf);
  } else {
    auto verdict = extension_verdict(root->hier, root->equiv, root->seq);
    trace(root->seq, root->hier, root->equiv, verdict);
    if (verdict == PrefixTrace::Event::kQueued) {
      push(root);
    } else {
      count(verdict);
    }
  }

  const bool use_symmetry = mode_ == Mode::kOptimize && cfg_.symmetry_pruning;
  const std::size_t batch_size = std::max<std::size_t>(1, cfg_.batch_size);
  bool stopped = false;

  while (!queue_.empty()) {
    if (over_budget()) {
      stopped = true;
      break;
    }
    std::vector<NodePtr> batch;
    while (!queue_.empty() && batch.size() < batch_size) {
      NodePtr node = queue_.top();
      queue_.pop();
      live_bytes_ -= std::min(live_bytes_, node_bytes(*node));
      if (node->dead) continue;
      auto verdict = extension_verdict(node->hier, node->equiv, node->seq);
      if (verdict != PrefixTrace::Event::kQueued) {
        count(verdict);
        trace(node->seq, node->hier, node->equiv, verdict);
        continue;
      }
      trace(node->seq, node->hier, node->equiv, PrefixTrace::Event::kExpanded);
      batch.push_back(std::move(node));
    }
    if (batch.empty()) continue;
    result_.expanded += batch.size();

    std::vector<std::vector<Child>> children(batch.size());
    parallel_for(batch.size(), cfg_.threads, [&](std::size_t k) { children[k] = expand(*batch[k]); });

    // Merge in batch order: first all completions, then extension decisions.
    std::vector<AntecedentIndex> seq;
    for (std::size_t k = 0; k < batch.size(); ++k) {
      for (const auto& c : children[k]) {
        if (c.support_pruned) continue;
        seq = batch[k]->seq;
        seq.push_back(c.rule);
        consider(c.completion, seq, c.req_mask);
      }
    }
    for (std::size_t k = 0; k < batch.size(); ++k) {
      const Node& parent = *batch[k];
      for (auto& c : children[k]) {
        ++result_.generated;
        if (c.support_pruned) {
          ++result_.pruned.support;
          continue;
        }
        seq = parent.seq;
        seq.push_back(c.rule);
        if (seq.size() >= cfg_.max_length) {
          trace(seq, c.hier, c.equiv, PrefixTrace::Event::kLeaf);
          continue;
        }
        auto verdict = extension_verdict(c.hier, c.equiv, seq);
        if (verdict != PrefixTrace::Event::kQueued) {
          count(verdict);
          trace(seq, c.hier, c.equiv, verdict);
          continue;
        }
        auto node = std::make_shared<Node>();
        node->seq = seq;
        node->captured = std::move(c.captured);
        node->errors = c.errors;
        node->num_captured = c.num_captured;
        node->pos_captured = c.pos_captured;
        node->hier = c.hier;
        node->equiv = c.equiv;
        node->req_mask = c.req_mask;
        if (use_symmetry && symmetry_dominated(node)) {
          ++result_.pruned.symmetry;
          trace(seq, c.hier, c.equiv, PrefixTrace::Event::kPrunedSymmetry);
          continue;
        }
        trace(seq, c.hier, c.equiv, PrefixTrace::Event::kQueued);
        push(std::move(node));
      }
    }
    if (result_.truncated) {
      stopped = true;
      break;
    }
  }

  result_.best = best_;
  result_.complete = !stopped;
  if (mode_ == Mode::kOptimize) {
    std::int64_t lb = best_.valid ? best_.obj : INT64_MAX;
    if (stopped) {
      // Every unevaluated list strictly extends a live queued prefix.
      while (!queue_.empty()) {
        const auto& node = queue_.top();
        if (!node->dead) lb = std::min(lb, node->equiv + scale_.rule_cost);
        queue_.pop();
      }
    }
    result_.lower_bound = lb;
  }
  return result_;
}

std::vector<Conjunction> conjunctions_for(std::span<const Antecedent> ants, std::span<const AntecedentIndex> seq) {
  std::vector<Conjunction> out;
  for (auto r : seq) {
    auto c = ants[r].conditions();
    out.emplace_back(c.begin(), c.end());
  }
  return out;
}

Certificate make_certificate(const Dataset& ds, std::span<const Antecedent> ants, const SearchConfig& cfg,
                             const EngineResult& r, Clock::time_point started) {
  Scale scale(ds.n(), cfg.lambda);
  Certificate cert;
  cert.universe_size = ants.size();
  cert.max_length = cfg.max_length;
  cert.antecedents = r.best.seq;
  cert.model = fit_rule_labels(conjunctions_for(ants, r.best.seq), ds);
  cert.objective = objective(cert.model, ds, cfg.lambda);
  if (cert.objective.value() != scale.to_rational(r.best.obj)) {
    fail(ErrorKind::kInternal, "search objective disagrees with direct evaluation");
  }
  cert.optimal = r.complete;
  cert.lower_bound = r.complete ? cert.objective.value() : scale.to_rational(r.lower_bound);
  cert.gap = cert.objective.value() - cert.lower_bound;
  cert.nodes_generated = r.generated;
  cert.nodes_expanded = r.expanded;
  cert.queue_peak = r.queue_peak;
  cert.pruned = r.pruned;
  cert.wall_time_seconds = std::chrono::duration<double>(Clock::now() - started).count();
  return cert;
}

void check_inputs(std::span<const Antecedent> ants, const SearchConfig& cfg) {
  if (ants.empty()) fail(ErrorKind::kArgument, "antecedent list is empty");
  if (cfg.lambda < Rational(0)) fail(ErrorKind::kArgument, "lambda must be nonnegative");
  if (cfg.epsilon < Rational(0)) fail(ErrorKind::kArgument, "epsilon must be nonnegative");
}

}  // namespace

Certificate solve(const Dataset& ds, std::span<const Antecedent> ants, const SearchConfig& cfg) {
  check_inputs(ants, cfg);
  auto started = Clock::now();
  EngineInput in{ds, ants, {}, 0};
  auto r = Engine(in, cfg, Mode::kOptimize, 0).run();
  auto cert = make_certificate(ds, ants, cfg, r, started);
  log::info("rule list search: objective ", cert.objective.value().str(), (cert.optimal ? " (optimal)" : " (gap "),
            (cert.optimal ? "" : cert.gap.str() + ")"), ", ", cert.nodes_expanded, " expanded");
  return cert;
}

RashomonSet enumerate_rashomon(const Dataset& ds, std::span<const Antecedent> ants, const SearchConfig& cfg) {
  check_inputs(ants, cfg);
  auto started = Clock::now();
  Certificate best = solve(ds, ants, cfg);
  Scale scale(ds.n(), cfg.lambda);

  RashomonSet set;
  set.optimum = best.objective;
  set.optimum_certified = best.optimal;
  set.epsilon = cfg.epsilon;
  set.threshold = best.objective.value() + cfg.epsilon;

  EngineInput in{ds, ants, {}, 0};
  auto r = Engine(in, cfg, Mode::kEnumerate, scale.floor_of(set.threshold)).run();
  std::sort(r.members.begin(), r.members.end(),
            [](const auto& a, const auto& b) { return key_less(a.first, a.second, b.first, b.second); });
  for (auto& [value, seq] : r.members) {
    RashomonMember m;
    m.model = fit_rule_labels(conjunctions_for(ants, seq), ds);
    m.objective = objective(m.model, ds, cfg.lambda);
    if (m.objective.value() != scale.to_rational(value)) {
      fail(ErrorKind::kInternal, "Rashomon member objective disagrees with direct evaluation");
    }
    m.antecedents = std::move(seq);
    set.members.push_back(std::move(m));
  }
  set.truncated = r.truncated || !r.complete;
  set.nodes_generated = r.generated;
  set.wall_time_seconds = std::chrono::duration<double>(Clock::now() - started).count();
  return set;
}

ConstrainedCertificate resolve_with_constraints(const Dataset& ds, std::span<const Antecedent> ants,
                                                const SearchConfig& cfg, const FeatureConstraints& constraints) {
  check_inputs(ants, cfg);
  auto matching = [&](const std::string& name) {
    std::vector<std::size_t> feats;
    for (std::size_t j = 0; j < ds.p(); ++j) {
      if (ds.feature(j).name == name || ds.feature(j).column == name) feats.push_back(j);
    }
    if (feats.empty()) fail(ErrorKind::kArgument, "unknown constraint feature '" + name + "'");
    return feats;
  };
  auto uses_any = [](const Antecedent& a, const std::vector<std::size_t>& feats) {
    return std::any_of(feats.begin(), feats.end(), [&](std::size_t f) { return a.uses_feature(f); });
  };

  ConstrainedCertificate out;
  out.unconstrained = solve(ds, ants, cfg);
  if (constraints.empty()) {
    out.constrained = out.unconstrained;
    out.objective_gap = Rational(0);
    return out;
  }
  if (constraints.required.size() > 64) fail(ErrorKind::kArgument, "at most 64 required features are supported");

  std::vector<std::vector<std::size_t>> forbidden, required;
  for (const auto& f : constraints.forbidden) forbidden.push_back(matching(f));
  for (const auto& f : constraints.required) required.push_back(matching(f));

  std::vector<Antecedent> kept;
  std::vector<AntecedentIndex> original;
  for (AntecedentIndex r = 0; r < ants.size(); ++r) {
    bool banned = std::any_of(forbidden.begin(), forbidden.end(),
                              [&](const auto& feats) { return uses_any(ants[r], feats); });
    if (banned) continue;
    kept.push_back(ants[r]);
    original.push_back(r);
  }
  if (kept.empty()) fail(ErrorKind::kInfeasible, "every antecedent uses a forbidden feature");

  EngineInput in{ds, kept, {}, 0};
  if (!required.empty()) {
    in.full_mask = required.size() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << required.size()) - 1;
    in.req_masks.assign(kept.size(), 0);
    for (std::size_t k = 0; k < required.size(); ++k) {
      bool any = false;
      for (std::size_t r = 0; r < kept.size(); ++r) {
        if (uses_any(kept[r], required[k])) {
          in.req_masks[r] |= std::uint64_t{1} << k;
          any = true;
        }
      }
      if (!any) {
        fail(ErrorKind::kInfeasible, "required feature '" + constraints.required[k] +
                                         "' appears in no admissible antecedent");
      }
    }
  }

  auto started = Clock::now();
  auto r = Engine(in, cfg, Mode::kOptimize, 0).run();
  if (!r.best.valid) {
    if (!r.complete) fail(ErrorKind::kBudget, "search budget exhausted before any feasible rule list was found");
    fail(ErrorKind::kInfeasible, "no rule list within the length limit uses every required feature");
  }
  out.constrained = make_certificate(ds, kept, cfg, r, started);
  out.constrained.universe_size = ants.size();
  for (auto& idx : out.constrained.antecedents) idx = original[idx];
  out.objective_gap = out.constrained.objective.value() - out.unconstrained.objective.value();
  return out;
}

}  // namespace lucid
