#include "core/recourse.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <set>

#include "core/error.hpp"

namespace lucid {

std::uint8_t predict(const AnyModel& model, std::span<const std::uint8_t> row) {
  return std::visit([&](const auto& m) { return m.predict(row); }, model);
}

double CostModel::cost(std::size_t feature) const {
  return flip_costs.empty() ? 1.0 : flip_costs.at(feature);
}

bool CostModel::is_immutable(std::size_t feature) const {
  return !immutable.empty() && immutable.at(feature);
}

namespace {

/// One admissible change: flip a single free feature, or move a one-hot
/// group to another level.
struct Action {
  std::vector<Flip> flips;
  double cost = 0;
  std::int32_t group = -1;
};

std::vector<Action> build_actions(std::span<const FeatureInfo> features, const RecourseQuery& q) {
  const std::size_t p = q.instance.size();
  std::map<std::int32_t, std::vector<std::uint32_t>> groups;
  std::vector<Action> actions;
  for (std::uint32_t j = 0; j < p; ++j) {
    std::int32_t g = features.empty() ? -1 : features[j].group;
    if (g >= 0) {
      groups[g].push_back(j);
      continue;
    }
    if (q.costs.is_immutable(j)) continue;
    actions.push_back({{Flip{j, static_cast<std::uint8_t>(1 - q.instance[j])}}, q.costs.cost(j), -1});
  }
  for (const auto& [g, members] : groups) {
    std::vector<std::uint32_t> active;
    for (auto j : members) {
      if (q.instance[j]) active.push_back(j);
    }
    bool frozen = std::any_of(active.begin(), active.end(), [&](std::uint32_t j) { return q.costs.is_immutable(j); });
    if (frozen) continue;
    for (auto m : members) {
      if (q.instance[m] || q.costs.is_immutable(m)) continue;
      Action a;
      a.group = g;
      a.cost = q.costs.cost(m);
      for (auto j : active) {
        a.flips.push_back({j, 0});
        a.cost += q.costs.cost(j);
      }
      a.flips.push_back({m, 1});
      std::sort(a.flips.begin(), a.flips.end(), [](const Flip& x, const Flip& y) { return x.feature < y.feature; });
      actions.push_back(std::move(a));
    }
  }
  return actions;
}

struct SearchState {
  double cost = 0;
  std::size_t num_flips = 0;
  std::vector<std::uint32_t> features;  // flipped features, sorted
  std::vector<std::size_t> actions;     // chosen action indices, increasing
};

bool state_less(const SearchState& a, const SearchState& b) {
  if (a.cost != b.cost) return a.cost < b.cost;
  if (a.num_flips != b.num_flips) return a.num_flips < b.num_flips;
  if (a.features != b.features) return a.features < b.features;
  return a.actions < b.actions;
}

struct StateOrder {
  bool operator()(const SearchState& a, const SearchState& b) const { return state_less(b, a); }
};

void validate(const RecourseQuery& q, std::span<const FeatureInfo> features) {
  const std::size_t p = q.instance.size();
  if (!features.empty() && features.size() != p) fail(ErrorKind::kArgument, "instance length does not match the features");
  if (q.target > 1) fail(ErrorKind::kArgument, "target label must be 0 or 1");
  if (q.budget > p) fail(ErrorKind::kArgument, "flip budget exceeds the number of features");
  if (!q.costs.flip_costs.empty() && q.costs.flip_costs.size() != p) fail(ErrorKind::kArgument, "cost list length does not match the features");
  if (!q.costs.immutable.empty() && q.costs.immutable.size() != p) fail(ErrorKind::kArgument, "immutable list length does not match the features");
  for (double c : q.costs.flip_costs) {
    if (!(c >= 0) || !std::isfinite(c)) fail(ErrorKind::kArgument, "flip costs must be finite and nonnegative");
  }
  for (auto v : q.instance) {
    if (v > 1) fail(ErrorKind::kArgument, "instance values must be 0 or 1");
  }
}

std::vector<std::string> linkage_warnings(const std::vector<Flip>& flips, std::span<const FeatureInfo> features) {
  std::vector<std::string> out;
  if (features.empty()) return out;
  for (const auto& f : flips) {
    const auto& info = features[f.feature];
    if (info.kind != FeatureKind::kThreshold && info.kind != FeatureKind::kInterval) continue;
    std::size_t siblings = 0;
    for (const auto& other : features) siblings += other.column == info.column;
    if (siblings > 1) {
      out.push_back("'" + info.name + "' is derived from column '" + info.column +
                    "'; changing it may also change other features of that column");
    }
  }
  return out;
}

std::vector<Counterfactual> search(const AnyModel& model, std::span<const FeatureInfo> features,
                                   const RecourseQuery& q, std::size_t k) {
  validate(q, features);
  std::vector<Counterfactual> found;
  if (k == 0) return found;
  if (predict(model, q.instance) == q.target) {
    found.push_back(Counterfactual{{}, 0.0, q.target, {}});
    return found;
  }
  auto actions = build_actions(features, q);
  std::vector<std::vector<std::size_t>> goals;  // action sets already reported
  std::priority_queue<SearchState, std::vector<SearchState>, StateOrder> queue;
  queue.push(SearchState{});
  std::vector<std::uint8_t> row;
  while (!queue.empty() && found.size() < k) {
    SearchState s = queue.top();
    queue.pop();
    bool contains_goal = std::any_of(goals.begin(), goals.end(), [&](const std::vector<std::size_t>& g) {
      return std::includes(s.actions.begin(), s.actions.end(), g.begin(), g.end());
    });
    if (contains_goal) continue;
    row = q.instance;
    std::vector<Flip> flips;
    for (auto a : s.actions) {
      for (const auto& f : actions[a].flips) {
        row[f.feature] = f.value;
        flips.push_back(f);
      }
    }
    if (!s.actions.empty() && predict(model, row) == q.target) {
      std::sort(flips.begin(), flips.end(), [](const Flip& x, const Flip& y) { return x.feature < y.feature; });
      Counterfactual cf{flips, s.cost, q.target, linkage_warnings(flips, features)};
      found.push_back(std::move(cf));
      goals.push_back(s.actions);
      continue;
    }
    std::size_t first = s.actions.empty() ? 0 : s.actions.back() + 1;
    for (std::size_t a = first; a < actions.size(); ++a) {
      const Action& act = actions[a];
      if (s.num_flips + act.flips.size() > q.budget) continue;
      if (act.group >= 0 && std::any_of(s.actions.begin(), s.actions.end(),
                                        [&](std::size_t b) { return actions[b].group == act.group; })) {
        continue;
      }
      SearchState child = s;
      child.cost += act.cost;
      child.num_flips += act.flips.size();
      for (const auto& f : act.flips) child.features.push_back(f.feature);
      std::sort(child.features.begin(), child.features.end());
      child.actions.push_back(a);
      queue.push(std::move(child));
    }
  }
  return found;
}

}  // namespace

std::optional<Counterfactual> min_cost_counterfactual(const AnyModel& model, std::span<const FeatureInfo> features,
                                                      const RecourseQuery& query) {
  auto found = search(model, features, query, 1);
  if (found.empty()) return std::nullopt;
  return found.front();
}

std::vector<Counterfactual> enumerate_counterfactuals(const AnyModel& model, std::span<const FeatureInfo> features,
                                                      const RecourseQuery& query, std::size_t k) {
  return search(model, features, query, k);
}

std::string narrate(const Counterfactual& cf, std::span<const FeatureInfo> features, const std::string& target_name) {
  if (cf.flips.empty()) return "The prediction is already " + target_name + ".";
  std::string list;
  for (std::size_t i = 0; i < cf.flips.size(); ++i) {
    const auto& f = cf.flips[i];
    std::string name = features.empty() ? "f" + std::to_string(f.feature) : features[f.feature].name;
    if (i > 0) list += i + 1 == cf.flips.size() ? " and " : ", ";
    list += f.value ? name : "not " + name;
  }
  return "If you had " + list + ", the prediction would change to " + target_name + ".";
}

DnfExplanation local_explanation_dnf(const DnfModel& model, std::span<const std::uint8_t> instance) {
  DnfExplanation out;
  out.prediction = model.predict(instance);
  auto conj = model.conjunctions();
  for (std::size_t c = 0; c < conj.size(); ++c) {
    if (!conjunction_holds(conj[c], instance)) continue;
    if (!out.conjunction || conj[c].size() < conj[*out.conjunction].size()) out.conjunction = c;
  }
  if (out.prediction == 0) {
    for (const auto& c : conj) {
      std::vector<Condition> unmet;
      for (const auto& cond : c) {
        if ((instance[cond.feature] != 0) != cond.value) unmet.push_back(cond);
      }
      out.unmet.push_back(std::move(unmet));
    }
  }
  return out;
}

}  // namespace lucid
