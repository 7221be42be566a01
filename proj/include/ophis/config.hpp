#pragma once

#include <cstdint>
#include <memory>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ophis/benchmarks/pendulum.hpp"
#include "ophis/benchmarks/sirw.hpp"
#include "ophis/benchmarks/synthetic.hpp"
#include "ophis/oracle.hpp"
#include "ophis/planner.hpp"
#include "ophis/problem.hpp"

namespace ophis {

struct PlannerSettings {
  Variant variant{Variant::sophis};
  std::uint64_t budget{1000};
  int min_dwell{1};
  int split_factor{3};
  double discount{0.8};
  double lipschitz_dynamics{0.8};
  double lipschitz_reward{1.2};
  std::optional<double> h_max_epsilon{};
  bool reuse_middle_child{true};
  TieBreak tie_break{TieBreak::depth_then_id};
};

struct OracleSettings {
  int horizon{4};
  int grid{27};
  double cap{1e7};
  OracleGrid grid_style{OracleGrid::cell_centers};
};

struct CensusSettings {
  int depth{6};
  std::optional<double> reference{};
};

struct ValidationSettings {
  int samples{2000};
};

struct PendulumNcsSettings {
  std::vector<int> mode_trits{60, 1};
};

struct SirwSettings {
  double beta_baseline{0.3566};
  double removal_rate{0.0858};
  double vaccination_rate{0.04};
  double distancing_effect{0.5};
  int substeps{10};
  bool clamp_transmission{false};
  bool distancing_enabled{true};
  double population_scale{1000.0};
};

struct LinearSettings {
  double a{0.5};
  double b{0.1};
  std::vector<double> offsets{0.0, 0.2};
  double target{0.3};
};

struct ConstantSettings {
  int modes{2};
};

/// Full description of one experiment; everything the CLI can run is a
/// value of this type. `initial_state` empty means the problem's default.
struct ExperimentConfig {
  std::string problem{"synthetic-linear"};
  PlannerSettings planner;
  PendulumNcsSettings pendulum;
  SirwSettings sirw;
  LinearSettings linear;
  ConstantSettings constant;
  std::vector<double> initial_state;
  int episode_length{10};
  std::uint64_t seed{1};
  OracleSettings oracle;
  CensusSettings census;
  ValidationSettings validation;
};

inline const std::vector<std::string>& known_problems() {
  static const std::vector<std::string> names{"pendulum-ncs", "sirw", "synthetic-linear",
                                              "synthetic-constant"};
  return names;
}

/// Baseline config for a problem id; unknown ids throw listing the valid
/// ones.
inline ExperimentConfig default_config(const std::string& problem) {
  ExperimentConfig cfg;
  cfg.problem = problem;
  if (problem == "pendulum-ncs") {
    cfg.planner = {Variant::sophis, 20000, 4, 3, 0.8, 0.8, 1.2, {}, true,
                   TieBreak::depth_then_id};
    cfg.episode_length = 80;
  } else if (problem == "sirw") {
    cfg.planner = {Variant::sophis, 20000, 2, 3, 0.8, 0.8, 1.2, {}, true,
                   TieBreak::depth_then_id};
    cfg.episode_length = 70;
  } else if (problem == "synthetic-linear") {
    cfg.planner = {Variant::ophis, 1000, 2, 3, 0.5, 0.6, 1.0, {}, true,
                   TieBreak::depth_then_id};
    cfg.episode_length = 10;
  } else if (problem == "synthetic-constant") {
    cfg.planner = {Variant::ophis, 200, 2, 3, 0.5, 0.5, 0.0, {}, true,
                   TieBreak::depth_then_id};
    cfg.episode_length = 5;
  } else {
    std::string msg = "unknown problem '" + problem + "'; valid problems:";
    for (const std::string& p : known_problems()) msg += " " + p;
    throw std::invalid_argument(msg);
  }
  return cfg;
}

/// A runnable experiment: the model instance plus the planner inputs wired
/// to it. Movable; the problem keeps pointing at the owned model.
struct Experiment {
  std::unique_ptr<SystemModel> model;
  PlanningProblem problem;
  PlannerConfig planner;
  std::vector<double> x0;
  int episode_length{0};
  std::uint64_t seed{1};
};

inline Experiment build_experiment(const ExperimentConfig& cfg) {
  Experiment ex;
  if (cfg.problem == "pendulum-ncs") {
    ex.model = std::make_unique<benchmarks::QuantizedPendulumModel>(cfg.pendulum.mode_trits);
    ex.x0 = {-std::numbers::pi, 0.0};
  } else if (cfg.problem == "sirw") {
    benchmarks::SirwParams p;
    p.beta_baseline = cfg.sirw.beta_baseline;
    p.removal_rate = cfg.sirw.removal_rate;
    p.vaccination_rate = cfg.sirw.vaccination_rate;
    p.distancing_effect = cfg.sirw.distancing_effect;
    p.substeps = cfg.sirw.substeps;
    p.clamp_transmission = cfg.sirw.clamp_transmission;
    p.distancing_enabled = cfg.sirw.distancing_enabled;
    p.population_scale = cfg.sirw.population_scale;
    ex.model = std::make_unique<benchmarks::SirwModel>(p);
    benchmarks::SirwState s0 = benchmarks::sirw_default_initial();
    ex.x0 = {s0.S, s0.I, s0.R, s0.W};
  } else if (cfg.problem == "synthetic-linear") {
    ex.model = std::make_unique<benchmarks::Linear1dModel>(cfg.linear.a, cfg.linear.b,
                                                           cfg.linear.offsets,
                                                           cfg.linear.target);
    ex.x0 = {0.0};
  } else if (cfg.problem == "synthetic-constant") {
    ex.model = std::make_unique<benchmarks::ConstantRewardModel>(cfg.constant.modes);
    ex.x0 = {0.0};
  } else {
    default_config(cfg.problem);  // throws with the problem listing
  }
  if (!cfg.initial_state.empty()) {
    if (cfg.initial_state.size() != static_cast<std::size_t>(ex.model->state_dim()))
      throw std::invalid_argument("initial_state has wrong dimension for the problem");
    ex.x0 = cfg.initial_state;
  }

  ex.problem.model = ex.model.get();
  ex.problem.max_mode = ex.model->mode_count() - 1;
  ex.problem.split_factor = cfg.planner.split_factor;
  ex.problem.min_dwell = cfg.planner.min_dwell;
  ex.problem.discount = cfg.planner.discount;
  ex.problem.lipschitz_dynamics = cfg.planner.lipschitz_dynamics;
  ex.problem.lipschitz_reward = cfg.planner.lipschitz_reward;

  ex.planner.variant = cfg.planner.variant;
  ex.planner.budget = cfg.planner.budget;
  ex.planner.h_max_epsilon = cfg.planner.h_max_epsilon;
  ex.planner.tie_break = cfg.planner.tie_break;
  ex.planner.reuse_middle_child = cfg.planner.reuse_middle_child;

  ex.episode_length = cfg.episode_length;
  ex.seed = cfg.seed;
  ex.problem.validate();
  ex.planner.validate();
  return ex;
}

}  // namespace ophis
