#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "ophis/config.hpp"

namespace ophis {

struct ReproCase {
  std::string name;
  ExperimentConfig config;
};

/// Canned experiment bundles behind `repro --id`. The same definitions back
/// the acceptance checks, so a bundle rerun reproduces exactly what was
/// certified.
inline const std::vector<std::string>& known_repro_ids() {
  static const std::vector<std::string> ids{"pendulum-fig2", "sir-fig3"};
  return ids;
}

/// Rotary pendulum swing-up under four transmission policies: adaptive
/// word length with and without a dwell requirement, and the two fixed
/// word lengths.
inline std::vector<ReproCase> repro_pendulum_cases() {
  std::vector<ReproCase> cases;
  {
    ExperimentConfig c = default_config("pendulum-ncs");
    c.planner.min_dwell = 4;
    cases.push_back({"adaptive-dwell4", c});
  }
  {
    ExperimentConfig c = default_config("pendulum-ncs");
    c.planner.min_dwell = 1;
    cases.push_back({"adaptive-dwell1", c});
  }
  {
    ExperimentConfig c = default_config("pendulum-ncs");
    c.pendulum.mode_trits = {60};
    c.planner.min_dwell = 1;
    cases.push_back({"fixed-60trit", c});
  }
  {
    ExperimentConfig c = default_config("pendulum-ncs");
    c.pendulum.mode_trits = {1};
    c.planner.min_dwell = 1;
    cases.push_back({"fixed-1trit", c});
  }
  return cases;
}

/// Epidemic management: vaccination-only baseline (distancing disabled, so
/// the continuous input is inert and its uncertainty term is zero), then
/// the full hybrid controller with and without a dwell requirement on the
/// vaccination toggle.
inline std::vector<ReproCase> repro_sirw_cases() {
  std::vector<ReproCase> cases;
  {
    ExperimentConfig c = default_config("sirw");
    c.sirw.distancing_enabled = false;
    c.planner.lipschitz_reward = 0.0;
    c.planner.min_dwell = 1;
    cases.push_back({"vaccination-only", c});
  }
  {
    ExperimentConfig c = default_config("sirw");
    c.planner.min_dwell = 2;
    cases.push_back({"hybrid-dwell2", c});
  }
  {
    ExperimentConfig c = default_config("sirw");
    c.planner.min_dwell = 1;
    cases.push_back({"hybrid-dwell1", c});
  }
  return cases;
}

inline std::vector<ReproCase> repro_cases(const std::string& id) {
  if (id == "pendulum-fig2") return repro_pendulum_cases();
  if (id == "sir-fig3") return repro_sirw_cases();
  std::string msg = "unknown repro id '" + id + "'; valid ids:";
  for (const std::string& r : known_repro_ids()) msg += " " + r;
  throw std::invalid_argument(msg);
}

}  // namespace ophis
