#pragma once

#include <initializer_list>
#include <string>

#include <json.hpp>

#include "ophis/config.hpp"

namespace ophis {

using json = nlohmann::json;

namespace detail {

inline void require_known_keys(const json& obj, std::initializer_list<const char*> allowed,
                               const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed)
      if (key == a) ok = true;
    if (!ok) throw std::invalid_argument("config: unknown key '" + key + "' in " + where);
  }
}

template <typename T>
void read_field(const json& obj, const char* key, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw std::invalid_argument(std::string("config: bad value type for '") + key + "'");
  }
}

}  // namespace detail

inline std::string to_string(Variant v) {
  return v == Variant::ophis ? "ophis" : "sophis";
}

inline Variant variant_from_string(const std::string& s) {
  if (s == "ophis") return Variant::ophis;
  if (s == "sophis") return Variant::sophis;
  throw std::invalid_argument("config: variant must be 'ophis' or 'sophis'");
}

inline std::string to_string(OracleGrid g) {
  return g == OracleGrid::cell_centers ? "cell-centers" : "uniform-endpoints";
}

inline OracleGrid oracle_grid_from_string(const std::string& s) {
  if (s == "cell-centers") return OracleGrid::cell_centers;
  if (s == "uniform-endpoints") return OracleGrid::uniform_endpoints;
  throw std::invalid_argument("config: grid_style must be 'cell-centers' or 'uniform-endpoints'");
}

inline std::string to_string(TieBreak t) {
  (void)t;
  return "depth-then-id";
}

inline TieBreak tie_break_from_string(const std::string& s) {
  if (s == "depth-then-id") return TieBreak::depth_then_id;
  throw std::invalid_argument("config: tie_break must be 'depth-then-id'");
}

/// Parse an experiment description. Unknown keys anywhere are rejected;
/// absent keys fall back to the problem's defaults, so a config round-trips
/// through serialize_config into a canonical fully-populated form.
inline ExperimentConfig parse_config(const json& root) {
  if (!root.is_object()) throw std::invalid_argument("config: top level must be an object");
  detail::require_known_keys(root,
                             {"problem", "planner", "model", "initial_state", "episode_length",
                              "seed", "oracle", "census", "validation"},
                             "the top level");
  std::string problem = "synthetic-linear";
  detail::read_field(root, "problem", problem);
  ExperimentConfig cfg = default_config(problem);

  if (root.contains("planner")) {
    const json& pl = root.at("planner");
    detail::require_known_keys(pl,
                               {"variant", "budget", "min_dwell", "split_factor", "discount",
                                "lipschitz_dynamics", "lipschitz_reward", "h_max_epsilon",
                                "reuse_middle_child", "tie_break"},
                               "'planner'");
    std::string variant = to_string(cfg.planner.variant);
    detail::read_field(pl, "variant", variant);
    cfg.planner.variant = variant_from_string(variant);
    detail::read_field(pl, "budget", cfg.planner.budget);
    detail::read_field(pl, "min_dwell", cfg.planner.min_dwell);
    detail::read_field(pl, "split_factor", cfg.planner.split_factor);
    detail::read_field(pl, "discount", cfg.planner.discount);
    detail::read_field(pl, "lipschitz_dynamics", cfg.planner.lipschitz_dynamics);
    detail::read_field(pl, "lipschitz_reward", cfg.planner.lipschitz_reward);
    if (pl.contains("h_max_epsilon") && !pl.at("h_max_epsilon").is_null()) {
      double eps = 0.0;
      detail::read_field(pl, "h_max_epsilon", eps);
      cfg.planner.h_max_epsilon = eps;
    }
    detail::read_field(pl, "reuse_middle_child", cfg.planner.reuse_middle_child);
    std::string tb = to_string(cfg.planner.tie_break);
    detail::read_field(pl, "tie_break", tb);
    cfg.planner.tie_break = tie_break_from_string(tb);
  }

  if (root.contains("model")) {
    const json& m = root.at("model");
    if (cfg.problem == "pendulum-ncs") {
      detail::require_known_keys(m, {"mode_trits"}, "'model' (pendulum-ncs)");
      detail::read_field(m, "mode_trits", cfg.pendulum.mode_trits);
    } else if (cfg.problem == "sirw") {
      detail::require_known_keys(m,
                                 {"beta_baseline", "removal_rate", "vaccination_rate",
                                  "distancing_effect", "substeps", "clamp_transmission",
                                  "distancing_enabled", "population_scale"},
                                 "'model' (sirw)");
      detail::read_field(m, "beta_baseline", cfg.sirw.beta_baseline);
      detail::read_field(m, "removal_rate", cfg.sirw.removal_rate);
      detail::read_field(m, "vaccination_rate", cfg.sirw.vaccination_rate);
      detail::read_field(m, "distancing_effect", cfg.sirw.distancing_effect);
      detail::read_field(m, "substeps", cfg.sirw.substeps);
      detail::read_field(m, "clamp_transmission", cfg.sirw.clamp_transmission);
      detail::read_field(m, "distancing_enabled", cfg.sirw.distancing_enabled);
      detail::read_field(m, "population_scale", cfg.sirw.population_scale);
    } else if (cfg.problem == "synthetic-linear") {
      detail::require_known_keys(m, {"a", "b", "offsets", "target"}, "'model' (synthetic-linear)");
      detail::read_field(m, "a", cfg.linear.a);
      detail::read_field(m, "b", cfg.linear.b);
      detail::read_field(m, "offsets", cfg.linear.offsets);
      detail::read_field(m, "target", cfg.linear.target);
    } else if (cfg.problem == "synthetic-constant") {
      detail::require_known_keys(m, {"modes"}, "'model' (synthetic-constant)");
      detail::read_field(m, "modes", cfg.constant.modes);
    }
  }

  detail::read_field(root, "initial_state", cfg.initial_state);
  detail::read_field(root, "episode_length", cfg.episode_length);
  detail::read_field(root, "seed", cfg.seed);

  if (root.contains("oracle")) {
    const json& o = root.at("oracle");
    detail::require_known_keys(o, {"horizon", "grid", "cap", "grid_style"}, "'oracle'");
    detail::read_field(o, "horizon", cfg.oracle.horizon);
    detail::read_field(o, "grid", cfg.oracle.grid);
    detail::read_field(o, "cap", cfg.oracle.cap);
    std::string style = to_string(cfg.oracle.grid_style);
    detail::read_field(o, "grid_style", style);
    cfg.oracle.grid_style = oracle_grid_from_string(style);
  }
  if (root.contains("census")) {
    const json& c = root.at("census");
    detail::require_known_keys(c, {"depth", "reference"}, "'census'");
    detail::read_field(c, "depth", cfg.census.depth);
    if (c.contains("reference") && !c.at("reference").is_null()) {
      double ref = 0.0;
      detail::read_field(c, "reference", ref);
      cfg.census.reference = ref;
    }
  }
  if (root.contains("validation")) {
    const json& v = root.at("validation");
    detail::require_known_keys(v, {"samples"}, "'validation'");
    detail::read_field(v, "samples", cfg.validation.samples);
  }
  return cfg;
}

/// Canonical form: every field materialized, keys in sorted order.
inline json serialize_config(const ExperimentConfig& cfg) {
  json root;
  root["problem"] = cfg.problem;
  json pl;
  pl["variant"] = to_string(cfg.planner.variant);
  pl["budget"] = cfg.planner.budget;
  pl["min_dwell"] = cfg.planner.min_dwell;
  pl["split_factor"] = cfg.planner.split_factor;
  pl["discount"] = cfg.planner.discount;
  pl["lipschitz_dynamics"] = cfg.planner.lipschitz_dynamics;
  pl["lipschitz_reward"] = cfg.planner.lipschitz_reward;
  if (cfg.planner.h_max_epsilon.has_value())
    pl["h_max_epsilon"] = *cfg.planner.h_max_epsilon;
  else
    pl["h_max_epsilon"] = nullptr;
  pl["reuse_middle_child"] = cfg.planner.reuse_middle_child;
  pl["tie_break"] = to_string(cfg.planner.tie_break);
  root["planner"] = pl;

  json m;
  if (cfg.problem == "pendulum-ncs") {
    m["mode_trits"] = cfg.pendulum.mode_trits;
  } else if (cfg.problem == "sirw") {
    m["beta_baseline"] = cfg.sirw.beta_baseline;
    m["removal_rate"] = cfg.sirw.removal_rate;
    m["vaccination_rate"] = cfg.sirw.vaccination_rate;
    m["distancing_effect"] = cfg.sirw.distancing_effect;
    m["substeps"] = cfg.sirw.substeps;
    m["clamp_transmission"] = cfg.sirw.clamp_transmission;
    m["distancing_enabled"] = cfg.sirw.distancing_enabled;
    m["population_scale"] = cfg.sirw.population_scale;
  } else if (cfg.problem == "synthetic-linear") {
    m["a"] = cfg.linear.a;
    m["b"] = cfg.linear.b;
    m["offsets"] = cfg.linear.offsets;
    m["target"] = cfg.linear.target;
  } else if (cfg.problem == "synthetic-constant") {
    m["modes"] = cfg.constant.modes;
  }
  root["model"] = m;

  root["initial_state"] = cfg.initial_state;
  root["episode_length"] = cfg.episode_length;
  root["seed"] = cfg.seed;
  root["oracle"] = {{"horizon", cfg.oracle.horizon},
                    {"grid", cfg.oracle.grid},
                    {"cap", cfg.oracle.cap},
                    {"grid_style", to_string(cfg.oracle.grid_style)}};
  if (cfg.census.reference.has_value())
    root["census"] = {{"depth", cfg.census.depth}, {"reference", *cfg.census.reference}};
  else
    root["census"] = {{"depth", cfg.census.depth}, {"reference", nullptr}};
  root["validation"] = {{"samples", cfg.validation.samples}};
  return root;
}

}  // namespace ophis
