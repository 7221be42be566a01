#pragma once

#include <chrono>
#include <cmath>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "ophis/planner.hpp"

namespace ophis {

/// One closed-loop step: the state the action was applied in, the action in
/// normalized / commanded / applied form, and the planner's certificates.
struct EpisodeStep {
  int index{0};
  double time{0.0};
  std::vector<double> state;
  double c{0.5};
  double u_command{0.0};
  double u_applied{0.0};
  int mode{0};
  double reward{0.0};
  double v_star{0.0};
  double delta_min{0.0};
  std::uint64_t budget_used{0};
  double plan_ms{0.0};
};

struct EpisodeLog {
  std::vector<EpisodeStep> steps;
  std::vector<double> final_state;
  double discounted_return{0.0};
  double undiscounted_return{0.0};
  int switch_count{0};
};

/// Re-plan from scratch at every step, apply the first planned action, and
/// carry the switching history forward so the dwell constraint holds across
/// re-plans. When a degenerate plan returns no action the loop falls back
/// to (c = 0.5, previous mode or 0).
inline EpisodeLog receding_horizon_run(PlanningProblem problem, const PlannerConfig& cfg,
                                       std::span<const double> x0, int episode_len) {
  problem.validate();
  if (episode_len < 0) throw std::invalid_argument("episode length must be >= 0");
  const SystemModel& model = *problem.model;
  const auto dim = static_cast<std::size_t>(model.state_dim());

  EpisodeLog log;
  log.steps.reserve(static_cast<std::size_t>(episode_len));
  std::vector<double> x(x0.begin(), x0.end());
  std::vector<double> next(dim);
  double pw = 1.0;
  for (int k = 0; k < episode_len; ++k) {
    auto t0 = std::chrono::steady_clock::now();
    PlanResult res = plan(problem, cfg, x);
    auto t1 = std::chrono::steady_clock::now();

    HybridAction a{0.5, problem.initial_dwell.last_mode.value_or(0)};
    if (!res.actions.empty()) a = res.actions.front();

    EpisodeStep step;
    step.index = k;
    step.time = k * model.sample_time();
    step.state = x;
    step.c = a.c;
    step.u_command = scale_input(a.c, model.input_min(), model.input_max());
    step.u_applied = model.physical_input(a.c, a.mode);
    step.mode = a.mode;
    step.v_star = res.v_star;
    step.delta_min = res.delta_min;
    step.budget_used = res.diagnostics.budget_used;
    step.plan_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    step.reward = checked_step(model, x, a.c, a.mode, next);
    log.steps.push_back(std::move(step));

    if (problem.initial_dwell.last_mode.has_value() &&
        *problem.initial_dwell.last_mode != a.mode)
      ++log.switch_count;
    problem.initial_dwell = dwell_after_append(problem.initial_dwell, a.mode);
    x = next;
    log.discounted_return += pw * log.steps.back().reward;
    log.undiscounted_return += log.steps.back().reward;
    pw *= problem.discount;
  }
  log.final_state = x;
  return log;
}

/// Trapezoid rule over one state component, sampled once per step plus the
/// final state, with spacing `dt`.
inline double trapezoid_integral(const EpisodeLog& log, std::size_t state_index, double dt) {
  if (log.steps.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < log.steps.size(); ++k)
    sum += 0.5 * (log.steps[k].state[state_index] + log.steps[k + 1].state[state_index]);
  sum += 0.5 * (log.steps.back().state[state_index] + log.final_state[state_index]);
  return sum * dt;
}

inline std::string episode_csv_header(int state_dim) {
  std::string h = "step,time";
  for (int j = 0; j < state_dim; ++j) h += ",x" + std::to_string(j);
  h += ",c,u_command,u_applied,mode,reward,v_star,delta_min,budget_used,plan_ms";
  return h;
}

/// One row per closed-loop step; `plan_ms` is wall time and is the only
/// column exempt from byte-for-byte determinism.
inline void write_episode_csv(std::ostream& os, const EpisodeLog& log, int state_dim) {
  os << episode_csv_header(state_dim) << "\n";
  os.precision(17);
  for (const EpisodeStep& s : log.steps) {
    os << s.index << "," << s.time;
    for (int j = 0; j < state_dim; ++j) os << "," << s.state[static_cast<std::size_t>(j)];
    os << "," << s.c << "," << s.u_command << "," << s.u_applied << "," << s.mode << ","
       << s.reward << "," << s.v_star << "," << s.delta_min << "," << s.budget_used << ","
       << s.plan_ms << "\n";
  }
}

}  // namespace ophis
