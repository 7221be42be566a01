#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "ophis/dwell.hpp"
#include "ophis/model.hpp"
#include "ophis/planner.hpp"

namespace ophis {

/// Raised instead of attempting an enumeration whose size exceeds the cap.
struct CapacityError : std::runtime_error {
  explicit CapacityError(double estimate)
      : CapacityError(estimate, make_message(estimate)) {}
  CapacityError(double estimate, const std::string& message)
      : std::runtime_error(message), estimated_evaluations(estimate) {}

  double estimated_evaluations;

 private:
  static std::string make_message(double estimate) {
    std::ostringstream os;
    os << "exhaustive search would evaluate about " << estimate
       << " sequences, above the configured cap";
    return os.str();
  }
};

/// All dwell-valid mode sequences of the given length, ascending
/// lexicographically, continuing the given switching history.
inline std::vector<std::vector<int>> enumerate_dwell_sequences(int max_mode, int min_dwell,
                                                               int horizon,
                                                               const DwellState& initial = {}) {
  if (horizon < 0) throw std::invalid_argument("horizon must be >= 0");
  std::vector<std::vector<int>> out;
  std::vector<int> prefix;
  auto rec = [&](auto&& self, const DwellState& s, int remaining) -> void {
    if (remaining == 0) {
      out.push_back(prefix);
      return;
    }
    for (int mode : eligible_modes(s, min_dwell, max_mode)) {
      prefix.push_back(mode);
      self(self, dwell_after_append(s, mode), remaining - 1);
      prefix.pop_back();
    }
  };
  rec(rec, initial, horizon);
  return out;
}

/// Number of dwell-valid sequences without materializing them.
inline std::uint64_t count_dwell_sequences(int max_mode, int min_dwell, int horizon,
                                           const DwellState& initial = {}) {
  if (horizon < 0) throw std::invalid_argument("horizon must be >= 0");
  auto rec = [&](auto&& self, const DwellState& s, int remaining) -> std::uint64_t {
    if (remaining == 0) return 1;
    std::uint64_t total = 0;
    for (int mode : eligible_modes(s, min_dwell, max_mode))
      total += self(self, dwell_after_append(s, mode), remaining - 1);
    return total;
  };
  return rec(rec, initial, horizon);
}

enum class OracleGrid { cell_centers, uniform_endpoints };

struct OracleResult {
  double best_value{0.0};
  HybridSequence best_sequence;
  std::uint64_t sequences_evaluated{0};
  int grid_resolution{0};
};

/// Grid point i of G. Cell centers match the planner's representative
/// points after log_M(G) uniform refinements; endpoint spacing includes the
/// range boundaries instead.
inline double oracle_grid_point(int i, int grid_points, OracleGrid style) {
  if (grid_points < 1) throw std::invalid_argument("grid must have >= 1 point");
  if (style == OracleGrid::cell_centers)
    return (2.0 * i + 1.0) / (2.0 * grid_points);
  return grid_points == 1 ? 0.5
                          : static_cast<double>(i) / static_cast<double>(grid_points - 1);
}

/// Brute-force reference: evaluate the truncated value of every combination
/// of grid inputs and dwell-valid mode sequences over `horizon` steps,
/// sharing simulation prefixes. Refuses (throws CapacityError) when the
/// estimated number of leaf evaluations exceeds `cap`.
inline OracleResult exhaustive_search(const SystemModel& model, std::span<const double> x0,
                                      int horizon, int grid_points, int min_dwell,
                                      double gamma, const DwellState& initial = {},
                                      double cap = 1e7,
                                      OracleGrid style = OracleGrid::cell_centers) {
  if (horizon < 0) throw std::invalid_argument("horizon must be >= 0");
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("discount must be in (0, 1)");
  const int max_mode = model.mode_count() - 1;
  const double mode_seqs =
      static_cast<double>(count_dwell_sequences(max_mode, min_dwell, horizon, initial));
  const double estimate = mode_seqs * std::pow(static_cast<double>(grid_points), horizon);
  if (estimate > cap) throw CapacityError(estimate);

  OracleResult res;
  res.grid_resolution = grid_points;
  if (horizon == 0) {
    res.sequences_evaluated = 1;
    return res;
  }

  const auto dim = static_cast<std::size_t>(model.state_dim());
  // states[k] is the state before step k; one scratch row per depth
  std::vector<std::vector<double>> states(static_cast<std::size_t>(horizon) + 1,
                                          std::vector<double>(dim));
  states[0].assign(x0.begin(), x0.end());
  HybridSequence current(static_cast<std::size_t>(horizon));
  bool found = false;

  auto rec = [&](auto&& self, int k, const DwellState& s, double acc, double pw) -> void {
    if (k == horizon) {
      ++res.sequences_evaluated;
      if (!found || acc > res.best_value) {
        res.best_value = acc;
        res.best_sequence = current;
        found = true;
      }
      return;
    }
    auto ku = static_cast<std::size_t>(k);
    for (int gi = 0; gi < grid_points; ++gi) {
      double c = oracle_grid_point(gi, grid_points, style);
      for (int mode : eligible_modes(s, min_dwell, max_mode)) {
        double r = checked_step(model, states[ku], c, mode, states[ku + 1]);
        current[ku] = {c, mode};
        self(self, k + 1, dwell_after_append(s, mode), acc + pw * r, pw * gamma);
      }
    }
  };
  rec(rec, 0, initial, 0.0, 1.0);
  return res;
}

/// Expand every node in breadth-first order down to `depth_limit`, with no
/// budget involved. Intended for census studies on small instances; refuses
/// once the tree outgrows `max_nodes`.
inline Tree full_expansion(const PlanningProblem& pb, std::span<const double> x0,
                           int depth_limit, std::size_t max_nodes = 2'000'000) {
  pb.validate();
  if (depth_limit < 0) throw std::invalid_argument("depth limit must be >= 0");
  Tree tree(make_root(pb, x0));
  BudgetLedger ledger{static_cast<std::uint64_t>(-1), 0};
  for (NodeId id = 0; id < tree.size(); ++id) {
    if (tree[id].depth >= depth_limit) break;
    if (tree.size() > max_nodes)
      throw CapacityError(static_cast<double>(tree.size()),
                          "full expansion outgrew the node cap before reaching the depth limit");
    expand(tree, id, select_step_and_type(tree[id], pb), pb, ledger);
  }
  return tree;
}

struct CensusRow {
  int depth{0};
  std::uint64_t total_nodes{0};
  std::uint64_t near_optimal{0};
  double cap{0.0};
};

struct CensusReport {
  std::vector<CensusRow> rows;
  double v_reference{0.0};
  double k_bar{0.0};
  double k_hat{1.0};
};

/// Branching-base ceiling: switching patterns contribute at most
/// (dwell * (modes)) every `dwell` steps, continuous refinement a factor
/// split_factor per refined step.
inline double census_k_bar(const PlanningProblem& pb) {
  double modes = static_cast<double>(pb.max_mode) + 1.0;
  double dwell = static_cast<double>(pb.min_dwell);
  double discrete = std::pow(dwell * modes, 1.0 / dwell);
  return std::max(discrete, static_cast<double>(pb.split_factor));
}

/// Count, per depth, the nodes whose optimistic value still reaches
/// `v_reference`, and fit the growth base of those counts. The per-depth
/// ceiling uses each node's own split history (discrete horizon D, refined
/// steps h = depth - D).
inline CensusReport near_optimal_census(const Tree& tree, double v_reference,
                                        const PlanningProblem& pb) {
  CensusReport rep;
  rep.v_reference = v_reference;
  rep.k_bar = census_k_bar(pb);

  int max_depth = 0;
  for (const SetNode& n : tree) max_depth = std::max(max_depth, n.depth);
  rep.rows.resize(static_cast<std::size_t>(max_depth) + 1);
  for (int d = 0; d <= max_depth; ++d) rep.rows[static_cast<std::size_t>(d)].depth = d;

  const double modes = static_cast<double>(pb.max_mode) + 1.0;
  const double dwell = static_cast<double>(pb.min_dwell);
  for (const SetNode& n : tree) {
    CensusRow& row = rep.rows[static_cast<std::size_t>(n.depth)];
    row.total_nodes += 1;
    double D = static_cast<double>(n.discrete_horizon());
    double h = static_cast<double>(n.depth) - D;
    double cap = modes * modes * dwell * std::pow(dwell * modes, D / dwell) *
                 std::pow(static_cast<double>(pb.split_factor), h);
    row.cap = std::max(row.cap, cap);
    if (upper_bound(n) >= v_reference &&
        is_dwell_valid(n.modes, pb.min_dwell, tree[0].dwell))
      row.near_optimal += 1;
  }

  // least-squares slope of log(count) against depth / dwell
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int m = 0;
  for (const CensusRow& row : rep.rows) {
    if (row.near_optimal == 0) continue;
    double xx = static_cast<double>(row.depth) / dwell;
    double yy = std::log(static_cast<double>(row.near_optimal));
    sx += xx;
    sy += yy;
    sxx += xx * xx;
    sxy += xx * yy;
    ++m;
  }
  if (m >= 2 && sxx * m - sx * sx > 1e-12) {
    double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    rep.k_hat = std::max(1.0, std::exp(slope));
  }
  return rep;
}

}  // namespace ophis
