#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <optional>
#include <queue>
#include <span>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "ophis/node.hpp"
#include "ophis/problem.hpp"

namespace ophis {

enum class Variant { ophis, sophis };
enum class SplitType { continuous, discrete };
enum class TieBreak { depth_then_id };

struct SplitDecision {
  SplitType type{SplitType::discrete};
  std::size_t step{0};

  bool operator==(const SplitDecision&) const = default;
};

struct PlannerConfig {
  Variant variant{Variant::sophis};
  std::uint64_t budget{1000};
  /// Depth cap rule for the depth-swept variant: h_max = ceil(n^epsilon),
  /// cube root when unset.
  std::optional<double> h_max_epsilon{};
  TieBreak tie_break{TieBreak::depth_then_id};
  bool reuse_middle_child{true};

  int h_max(std::uint64_t n) const {
    double eps = h_max_epsilon.value_or(1.0 / 3.0);
    return static_cast<int>(std::ceil(std::pow(static_cast<double>(n), eps)));
  }

  void validate() const {
    if (h_max_epsilon.has_value() && !(*h_max_epsilon > 0.0 && *h_max_epsilon < 0.5))
      throw std::invalid_argument("h_max exponent must lie in (0, 0.5)");
  }
};

/// Tracks paired model evaluations against the allowance n. `used` never
/// exceeds `limit`; callers must check can_cover before charging.
struct BudgetLedger {
  std::uint64_t limit{0};
  std::uint64_t used{0};

  std::uint64_t remaining() const { return limit - used; }
  bool can_cover(std::uint64_t cost) const { return cost <= remaining(); }
  void charge(std::uint64_t cost) {
    if (!can_cover(cost)) throw std::logic_error("budget overdraft");
    used += cost;
  }
};

/// Append-only expansion tree. Node ids are creation order; the root is 0.
/// Deque storage keeps references stable across growth.
class Tree {
 public:
  explicit Tree(SetNode root) {
    root.id = 0;
    root.parent.reset();
    root.depth = 0;
    nodes_.push_back(std::move(root));
  }

  const SetNode& operator[](NodeId id) const { return nodes_.at(id); }
  std::size_t size() const { return nodes_.size(); }

  NodeId append_child(SetNode node, NodeId parent) {
    node.id = static_cast<NodeId>(nodes_.size());
    node.parent = parent;
    node.depth = nodes_.at(parent).depth + 1;
    nodes_.push_back(std::move(node));
    return nodes_.back().id;
  }

  void mark_expanded(NodeId id) { nodes_.at(id).expanded = true; }

  auto begin() const { return nodes_.cbegin(); }
  auto end() const { return nodes_.cend(); }

 private:
  std::deque<SetNode> nodes_;
};

/// Root set: nothing refined, nothing committed, trajectory is just x0.
inline SetNode make_root(const PlanningProblem& pb, std::span<const double> x0) {
  if (x0.size() != static_cast<std::size_t>(pb.model->state_dim()))
    throw std::invalid_argument("initial state has wrong dimension");
  SetNode root;
  root.dwell = pb.initial_dwell;
  root.states.assign(x0.begin(), x0.end());
  root.value = 0.0;
  root.delta = compute_diameter(root, pb);
  return root;
}

/// Split selection: take the step with the largest diameter contribution
/// lambda_k (ties to the smallest k); if even that does not exceed the
/// unknown-tail term, commit a new mode at the horizon instead. Continuous
/// refinement may not skip steps, so the chosen step is capped at the
/// refined-prefix length.
inline SplitDecision select_step_and_type(const SetNode& node, const PlanningProblem& pb) {
  const std::size_t D = node.discrete_horizon();
  double best = -1.0;
  std::size_t best_k = 0;
  for (std::size_t k = 0; k < D; ++k) {
    double lam = contribution_lambda(node, k, pb);
    if (lam > best) {
      best = lam;
      best_k = k;
    }
  }
  double tail = std::pow(pb.discount, static_cast<double>(D)) / (1.0 - pb.discount);
  if (D == 0 || best <= tail) return {SplitType::discrete, D};
  return {SplitType::continuous, std::min(best_k, node.continuous_horizon())};
}

/// Children a split would create, honoring the middle-child reuse flag.
inline std::vector<ChildDescriptor> child_descriptors(const SetNode& node,
                                                      const SplitDecision& decision,
                                                      const PlanningProblem& pb,
                                                      bool reuse_middle) {
  std::vector<ChildDescriptor> descs =
      decision.type == SplitType::continuous
          ? continuous_child_descriptors(node, decision.step, pb.split_factor)
          : discrete_child_descriptors(node, pb.min_dwell, pb.max_mode);
  if (!reuse_middle)
    for (ChildDescriptor& d : descs) d.copies_parent_trajectory = false;
  return descs;
}

namespace detail {

inline std::uint64_t descriptor_cost(const std::vector<ChildDescriptor>& descs) {
  std::uint64_t cost = 0;
  for (const ChildDescriptor& d : descs) {
    if (d.copies_parent_trajectory) continue;
    cost += static_cast<std::uint64_t>(d.modes.size() - d.resim_from);
  }
  return cost;
}

inline SetNode build_child(const SetNode& parent, ChildDescriptor&& desc,
                           const PlanningProblem& pb, std::uint64_t& charged) {
  const auto dim = static_cast<std::size_t>(pb.model->state_dim());
  SetNode child;
  child.intervals = std::move(desc.intervals);
  child.modes = std::move(desc.modes);
  child.dwell = desc.dwell;
  const std::size_t D = child.modes.size();
  if (desc.copies_parent_trajectory) {
    child.states = parent.states;
    child.rewards = parent.rewards;
  } else {
    child.states.assign(parent.states.begin(),
                        parent.states.begin() +
                            static_cast<std::ptrdiff_t>((desc.resim_from + 1) * dim));
    child.states.resize((D + 1) * dim);
    child.rewards.assign(parent.rewards.begin(),
                         parent.rewards.begin() + static_cast<std::ptrdiff_t>(desc.resim_from));
    child.rewards.resize(D);
    for (std::size_t k = desc.resim_from; k < D; ++k) {
      std::span<const double> x{child.states.data() + k * dim, dim};
      std::span<double> next{child.states.data() + (k + 1) * dim, dim};
      child.rewards[k] =
          checked_step(*pb.model, x, child.representative_continuous(k), child.modes[k], next);
      ++charged;
    }
  }
  double v = 0.0;
  double pw = 1.0;
  for (std::size_t k = 0; k < D; ++k) {
    v += pw * child.rewards[k];
    pw *= pb.discount;
  }
  child.value = v;
  child.delta = compute_diameter(child, pb);
  return child;
}

}  // namespace detail

/// Paired model evaluations a split would consume: one per re-simulated
/// step, summed over all children.
inline std::uint64_t split_cost(const SetNode& node, const SplitDecision& decision,
                                const PlanningProblem& pb, bool reuse_middle) {
  return detail::descriptor_cost(child_descriptors(node, decision, pb, reuse_middle));
}

/// Apply one split. Returns the new node ids, or nullopt (and leaves the
/// tree untouched) when the ledger cannot cover the split's cost.
inline std::optional<std::vector<NodeId>> expand(Tree& tree, NodeId id,
                                                 const SplitDecision& decision,
                                                 const PlanningProblem& pb,
                                                 BudgetLedger& ledger,
                                                 bool reuse_middle = true) {
  const SetNode& parent = tree[id];
  if (parent.expanded) throw std::logic_error("node already expanded");
  std::vector<ChildDescriptor> descs = child_descriptors(parent, decision, pb, reuse_middle);
  const std::uint64_t cost = detail::descriptor_cost(descs);
  if (!ledger.can_cover(cost)) return std::nullopt;

  std::vector<NodeId> ids;
  ids.reserve(descs.size());
  std::uint64_t charged = 0;
  for (ChildDescriptor& desc : descs)
    ids.push_back(
        tree.append_child(detail::build_child(parent, std::move(desc), pb, charged), id));
  if (charged != cost) throw std::logic_error("split cost mismatch");
  ledger.charge(charged);
  tree.mark_expanded(id);
  return ids;
}

/// True when `a` wins the deterministic tie-break against `b` at equal
/// scores: greater depth first, then smaller id.
inline bool tie_break_before(const SetNode& a, const SetNode& b) {
  if (a.depth != b.depth) return a.depth > b.depth;
  return a.id < b.id;
}

/// Optimistic selection: unexpanded node with the largest B(i).
inline std::optional<NodeId> ophis_select(const Tree& tree) {
  const SetNode* best = nullptr;
  for (const SetNode& n : tree) {
    if (n.expanded) continue;
    if (best == nullptr || upper_bound(n) > upper_bound(*best) ||
        (upper_bound(n) == upper_bound(*best) && tie_break_before(n, *best)))
      best = &n;
  }
  if (best == nullptr) return std::nullopt;
  return best->id;
}

/// Depth-local selection: unexpanded node at `depth` with the largest v(i).
inline std::optional<NodeId> sophis_select_at_depth(const Tree& tree, int depth) {
  const SetNode* best = nullptr;
  for (const SetNode& n : tree) {
    if (n.expanded || n.depth != depth) continue;
    if (best == nullptr || n.value > best->value ||
        (n.value == best->value && n.id < best->id))
      best = &n;
  }
  if (best == nullptr) return std::nullopt;
  return best->id;
}

inline std::optional<int> smallest_unexpanded_depth(const Tree& tree) {
  std::optional<int> out;
  for (const SetNode& n : tree)
    if (!n.expanded && (!out.has_value() || n.depth < *out)) out = n.depth;
  return out;
}

struct SweepOutcome {
  int expansions{0};
  bool out_of_budget{false};
};

/// One bottom-up sweep: starting at the smallest depth holding unexpanded
/// nodes, expand the best-value node at each depth below h_max, skipping
/// depths that have none. Stops without further mutation when the next
/// split's cost exceeds the remaining budget.
inline SweepOutcome sophis_sweep(Tree& tree, const PlanningProblem& pb, BudgetLedger& ledger,
                                 int h_max, bool reuse_middle = true) {
  SweepOutcome out;
  std::optional<int> start = smallest_unexpanded_depth(tree);
  if (!start.has_value()) return out;
  for (int h = *start; h < h_max; ++h) {
    std::optional<NodeId> pick = sophis_select_at_depth(tree, h);
    if (!pick.has_value()) continue;
    SplitDecision decision = select_step_and_type(tree[*pick], pb);
    if (!expand(tree, *pick, decision, pb, ledger, reuse_middle).has_value()) {
      out.out_of_budget = true;
      return out;
    }
    ++out.expansions;
  }
  return out;
}

struct PlannerDiagnostics {
  std::uint64_t nodes_created{0};
  std::uint64_t expansions{0};
  std::uint64_t budget_used{0};
  int deepest_depth{0};
  std::vector<std::uint64_t> per_depth_counts;
  std::optional<double> best_unexpanded_bound{};
};

struct PlanResult {
  HybridSequence actions;
  double v_star{0.0};
  double delta_min{0.0};
  bool degenerate{false};
  PlannerDiagnostics diagnostics;
};

namespace detail {

struct BoundOrder {
  // max-heap on (B, depth, -id)
  bool operator()(const std::tuple<double, int, NodeId>& a,
                  const std::tuple<double, int, NodeId>& b) const {
    if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) < std::get<0>(b);
    if (std::get<1>(a) != std::get<1>(b)) return std::get<1>(a) < std::get<1>(b);
    return std::get<2>(a) > std::get<2>(b);
  }
};

struct ValueOrder {
  // max-heap on (v, -id)
  bool operator()(const std::pair<double, NodeId>& a, const std::pair<double, NodeId>& b) const {
    if (a.first != b.first) return a.first < b.first;
    return a.second > b.second;
  }
};

inline void run_ophis(Tree& tree, const PlanningProblem& pb, const PlannerConfig& cfg,
                      BudgetLedger& ledger) {
  std::priority_queue<std::tuple<double, int, NodeId>,
                      std::vector<std::tuple<double, int, NodeId>>, BoundOrder>
      open;
  open.push({upper_bound(tree[0]), 0, 0});
  while (!open.empty()) {
    NodeId id = std::get<2>(open.top());
    SplitDecision decision = select_step_and_type(tree[id], pb);
    auto children = expand(tree, id, decision, pb, ledger, cfg.reuse_middle_child);
    if (!children.has_value()) return;
    open.pop();
    for (NodeId cid : *children)
      open.push({upper_bound(tree[cid]), tree[cid].depth, cid});
  }
}

inline void run_sophis(Tree& tree, const PlanningProblem& pb, const PlannerConfig& cfg,
                       BudgetLedger& ledger) {
  const int h_max = cfg.h_max(ledger.limit);
  using Entry = std::pair<double, NodeId>;
  using Heap = std::priority_queue<Entry, std::vector<Entry>, ValueOrder>;
  std::vector<Heap> open(static_cast<std::size_t>(std::max(h_max, 0)) + 2);
  auto push = [&](NodeId id) {
    auto d = static_cast<std::size_t>(tree[id].depth);
    if (d < open.size()) open[d].push({tree[id].value, id});
  };
  push(0);
  while (true) {
    int start = -1;
    for (std::size_t d = 0; d < open.size(); ++d) {
      if (!open[d].empty()) {
        start = static_cast<int>(d);
        break;
      }
    }
    if (start < 0 || start >= h_max) return;
    for (int h = start; h < h_max; ++h) {
      auto& heap = open[static_cast<std::size_t>(h)];
      if (heap.empty()) continue;
      NodeId id = heap.top().second;
      SplitDecision decision = select_step_and_type(tree[id], pb);
      auto children = expand(tree, id, decision, pb, ledger, cfg.reuse_middle_child);
      if (!children.has_value()) return;
      heap.pop();
      for (NodeId cid : *children) push(cid);
    }
  }
}

}  // namespace detail

/// Planning episode result plus the tree it was extracted from.
struct PlanOutput {
  PlanResult result;
  Tree tree;
};

/// Run one planning episode from x0 under the given budget and variant,
/// keeping the tree. Deterministic: identical inputs give identical trees
/// and results.
inline PlanOutput plan_with_tree(const PlanningProblem& pb, const PlannerConfig& cfg,
                                 std::span<const double> x0) {
  pb.validate();
  cfg.validate();
  Tree tree(make_root(pb, x0));
  BudgetLedger ledger{cfg.budget, 0};
  if (cfg.variant == Variant::ophis)
    detail::run_ophis(tree, pb, cfg, ledger);
  else
    detail::run_sophis(tree, pb, cfg, ledger);

  PlanResult res;
  const SetNode* best = nullptr;
  const SetNode* tightest = nullptr;
  std::uint64_t expansions = 0;
  for (const SetNode& n : tree) {
    if (best == nullptr || n.value > best->value ||
        (n.value == best->value && tie_break_before(n, *best)))
      best = &n;
    if (n.expanded) {
      ++expansions;
      if (tightest == nullptr || n.delta < tightest->delta) tightest = &n;
    }
    res.diagnostics.deepest_depth = std::max(res.diagnostics.deepest_depth, n.depth);
    if (static_cast<std::size_t>(n.depth) >= res.diagnostics.per_depth_counts.size())
      res.diagnostics.per_depth_counts.resize(static_cast<std::size_t>(n.depth) + 1, 0);
    res.diagnostics.per_depth_counts[static_cast<std::size_t>(n.depth)] += 1;
  }
  res.actions = representative_actions(*best);
  res.v_star = best->value;
  res.delta_min = tightest != nullptr ? tightest->delta : tree[0].delta;
  res.degenerate = expansions == 0;
  res.diagnostics.nodes_created = tree.size();
  res.diagnostics.expansions = expansions;
  res.diagnostics.budget_used = ledger.used;
  if (cfg.variant == Variant::ophis) {
    std::optional<NodeId> top = ophis_select(tree);
    if (top.has_value()) res.diagnostics.best_unexpanded_bound = upper_bound(tree[*top]);
  }
  return {std::move(res), std::move(tree)};
}

inline PlanResult plan(const PlanningProblem& pb, const PlannerConfig& cfg,
                       std::span<const double> x0) {
  return plan_with_tree(pb, cfg, x0).result;
}

}  // namespace ophis
