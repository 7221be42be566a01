#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "ophis/dwell.hpp"
#include "ophis/interval.hpp"
#include "ophis/model.hpp"
#include "ophis/problem.hpp"

namespace ophis {

using NodeId = std::uint32_t;

/// One set of hybrid input sequences, as carved out by the planner.
///
/// Steps 0 .. continuous_horizon()-1 carry a refined continuous cell;
/// steps continuous_horizon() .. discrete_horizon()-1 are still the full
/// [0, 1]. All steps below discrete_horizon() carry a definite mode; beyond
/// it everything is free. The stored trajectory follows the representative
/// sequence (cell centers, 0.5 on unrefined steps). Nodes are immutable
/// after creation except for `expanded`.
struct SetNode {
  NodeId id{0};
  std::optional<NodeId> parent{};
  int depth{0};
  std::vector<Interval> intervals;
  std::vector<int> modes;
  DwellState dwell{};
  std::vector<double> states;
  std::vector<double> rewards;
  double value{0.0};
  double delta{0.0};
  bool expanded{false};

  std::size_t continuous_horizon() const { return intervals.size(); }
  std::size_t discrete_horizon() const { return modes.size(); }

  double representative_continuous(std::size_t k) const {
    if (k >= modes.size()) throw std::out_of_range("step beyond discrete horizon");
    return k < intervals.size() ? intervals[k].center() : 0.5;
  }

  std::span<const double> state(std::size_t k, int dim) const {
    auto d = static_cast<std::size_t>(dim);
    if ((k + 1) * d > states.size()) throw std::out_of_range("state index out of range");
    return {states.data() + k * d, d};
  }
};

/// Width of the continuous cell at step k (1 when the step is unrefined).
inline double step_width(const SetNode& node, std::size_t k) {
  return k < node.intervals.size() ? node.intervals[k].width() : 1.0;
}

/// Contribution of step k's continuous uncertainty to the node's diameter:
/// lambda_k = L_rho * width_k * gamma^k * (1 + s + ... + s^(D-k-1)) with
/// s = gamma * L_f.
inline double contribution_lambda(const SetNode& node, std::size_t k,
                                  const PlanningProblem& pb) {
  const std::size_t D = node.discrete_horizon();
  if (k >= D) throw std::out_of_range("lambda index must be below the discrete horizon");
  double s = pb.discount * pb.lipschitz_dynamics;
  return pb.lipschitz_reward * step_width(node, k) *
         std::pow(pb.discount, static_cast<double>(k)) * geometric_sum(s, D - k);
}

/// Diameter delta(i): total value uncertainty across the set, i.e. the sum
/// of the lambda_k plus the unknown tail gamma^D / (1 - gamma).
inline double compute_diameter(const SetNode& node, const PlanningProblem& pb) {
  const std::size_t D = node.discrete_horizon();
  double s = pb.discount * pb.lipschitz_dynamics;
  double sum = 0.0;
  double g = 0.0;
  double pw = std::pow(pb.discount, static_cast<double>(D));
  double tail = pw / (1.0 - pb.discount);
  for (std::size_t k = D; k-- > 0;) {
    g = 1.0 + s * g;
    pw /= pb.discount;
    sum += pb.lipschitz_reward * step_width(node, k) * pw * g;
  }
  return sum + tail;
}

/// Optimistic value B(i) = v(i) + delta(i).
inline double upper_bound(const SetNode& node) { return node.value + node.delta; }

/// The sequence the stored trajectory was simulated with.
inline HybridSequence representative_actions(const SetNode& node) {
  HybridSequence seq(node.discrete_horizon());
  for (std::size_t k = 0; k < seq.size(); ++k)
    seq[k] = {node.representative_continuous(k), node.modes[k]};
  return seq;
}

/// Blueprint for one child produced by a split. `resim_from` is the first
/// step whose simulation is invalidated by the split; children flagged
/// `copies_parent_trajectory` have the exact same representative sequence
/// as the parent and can inherit its trajectory at zero model cost.
struct ChildDescriptor {
  std::vector<Interval> intervals;
  std::vector<int> modes;
  DwellState dwell{};
  std::size_t resim_from{0};
  bool copies_parent_trajectory{false};
};

/// Split the continuous cell at step k into `split_factor` equal parts.
/// Refinable steps are 0 .. min(continuous_horizon(), D-1); refining the
/// step at the continuous horizon extends it by one.
inline std::vector<ChildDescriptor> continuous_child_descriptors(const SetNode& node,
                                                                 std::size_t k,
                                                                 int split_factor) {
  const std::size_t C = node.continuous_horizon();
  const std::size_t D = node.discrete_horizon();
  if (k >= D) throw std::out_of_range("cannot refine a step beyond the discrete horizon");
  if (k > C) throw std::out_of_range("cannot skip steps when extending the refined prefix");
  auto base = static_cast<std::uint32_t>(split_factor);
  Interval cell = k < C ? node.intervals[k] : Interval::unit(base);
  if (cell.base() != base) throw std::invalid_argument("split factor changed mid-tree");

  std::vector<ChildDescriptor> out(static_cast<std::size_t>(split_factor));
  for (std::uint32_t j = 0; j < static_cast<std::uint32_t>(split_factor); ++j) {
    ChildDescriptor& d = out[j];
    d.intervals = node.intervals;
    if (k == C)
      d.intervals.push_back(cell.split_child(j));
    else
      d.intervals[k] = cell.split_child(j);
    d.modes = node.modes;
    d.dwell = node.dwell;
    d.resim_from = k;
    d.copies_parent_trajectory =
        (split_factor % 2 == 1) && (j == static_cast<std::uint32_t>(split_factor) / 2);
  }
  return out;
}

/// Append one definite mode at the discrete horizon, one child per mode
/// eligible under the node's switching history.
inline std::vector<ChildDescriptor> discrete_child_descriptors(const SetNode& node,
                                                               int min_dwell, int max_mode) {
  std::vector<ChildDescriptor> out;
  for (int mode : eligible_modes(node.dwell, min_dwell, max_mode)) {
    ChildDescriptor d;
    d.intervals = node.intervals;
    d.modes = node.modes;
    d.modes.push_back(mode);
    d.dwell = dwell_after_append(node.dwell, mode);
    d.resim_from = node.discrete_horizon();
    d.copies_parent_trajectory = false;
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace ophis
