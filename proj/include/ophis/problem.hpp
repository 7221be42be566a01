#pragma once

#include <stdexcept>

#include "ophis/dwell.hpp"
#include "ophis/model.hpp"

namespace ophis {

/// Everything the planner needs to know about one planning instance.
/// `lipschitz_*` are the constants the optimism bounds are built from;
/// `discount * lipschitz_dynamics < 1` is required for the bounds to close.
struct PlanningProblem {
  const SystemModel* model{nullptr};
  int max_mode{0};
  int split_factor{3};
  int min_dwell{1};
  double discount{0.9};
  double lipschitz_dynamics{1.0};
  double lipschitz_reward{1.0};
  DwellState initial_dwell{};

  void validate() const {
    if (model == nullptr) throw std::invalid_argument("problem has no model");
    if (max_mode < 0) throw std::invalid_argument("max mode must be >= 0");
    if (model->mode_count() != max_mode + 1)
      throw std::invalid_argument("max mode disagrees with the model's mode count");
    if (split_factor < 2) throw std::invalid_argument("split factor must be >= 2");
    if (min_dwell < 1) throw std::invalid_argument("min dwell must be >= 1");
    if (!(discount > 0.0 && discount < 1.0))
      throw std::invalid_argument("discount must be in (0, 1)");
    if (lipschitz_dynamics < 0.0 || lipschitz_reward < 0.0)
      throw std::invalid_argument("Lipschitz constants must be >= 0");
    if (!(discount * lipschitz_dynamics < 1.0))
      throw std::invalid_argument("discount * dynamics constant must be < 1");
    if (initial_dwell.last_mode.has_value() &&
        (*initial_dwell.last_mode < 0 || *initial_dwell.last_mode > max_mode))
      throw std::invalid_argument("initial dwell mode out of range");
    if (initial_dwell.last_mode.has_value() && initial_dwell.run_length < 1)
      throw std::invalid_argument("initial dwell run length must be >= 1");
  }
};

}  // namespace ophis
