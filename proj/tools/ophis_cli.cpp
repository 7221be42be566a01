#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ophis/config_json.hpp"
#include "ophis/episode.hpp"
#include "ophis/oracle.hpp"
#include "ophis/repro.hpp"

namespace {

using ophis::json;

int log_level() {
  static const int level = [] {
    const char* v = std::getenv("OPHIS_LOG");
    if (v == nullptr) return 1;
    std::string s(v);
    if (s == "quiet") return 0;
    if (s == "debug") return 2;
    return 1;
  }();
  return level;
}

void info(const std::string& msg) {
  if (log_level() >= 1) std::cerr << msg << "\n";
}

void debug(const std::string& msg) {
  if (log_level() >= 2) std::cerr << msg << "\n";
}

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> budget;
  std::optional<std::string> variant;
  std::optional<int> dwell;
  std::optional<std::uint64_t> seed;
};

void apply_overrides(ophis::ExperimentConfig& cfg, const CommonArgs& args) {
  if (args.budget.has_value()) cfg.planner.budget = *args.budget;
  if (args.variant.has_value()) cfg.planner.variant = ophis::variant_from_string(*args.variant);
  if (args.dwell.has_value()) cfg.planner.min_dwell = *args.dwell;
  if (args.seed.has_value()) cfg.seed = *args.seed;
}

ophis::ExperimentConfig load_config(const CommonArgs& args) {
  std::ifstream f(args.config_path);
  if (!f) throw std::invalid_argument("cannot open config file: " + args.config_path);
  json root = json::parse(f);
  ophis::ExperimentConfig cfg = ophis::parse_config(root);
  apply_overrides(cfg, args);
  return cfg;
}

void write_text(const std::filesystem::path& dir, const std::string& name,
                const std::string& content) {
  std::filesystem::create_directories(dir);
  std::ofstream f(dir / name);
  if (!f) throw std::runtime_error("cannot write " + (dir / name).string());
  f << content;
}

json plan_result_json(const ophis::PlanResult& res, const ophis::SystemModel& model) {
  json actions = json::array();
  for (const ophis::HybridAction& a : res.actions)
    actions.push_back({{"c", a.c},
                       {"mode", a.mode},
                       {"u_physical", model.physical_input(a.c, a.mode)}});
  json diag{{"nodes_created", res.diagnostics.nodes_created},
            {"expansions", res.diagnostics.expansions},
            {"budget_used", res.diagnostics.budget_used},
            {"deepest_depth", res.diagnostics.deepest_depth},
            {"per_depth_counts", res.diagnostics.per_depth_counts}};
  if (res.diagnostics.best_unexpanded_bound.has_value())
    diag["best_unexpanded_bound"] = *res.diagnostics.best_unexpanded_bound;
  return json{{"v_star", res.v_star},
              {"delta_min", res.delta_min},
              {"degenerate", res.degenerate},
              {"actions", actions},
              {"diagnostics", diag}};
}

json episode_summary_json(const ophis::EpisodeLog& log, const ophis::ExperimentConfig& cfg,
                          const ophis::Experiment& ex) {
  json s{{"steps", log.steps.size()},
         {"discounted_return", log.discounted_return},
         {"undiscounted_return", log.undiscounted_return},
         {"switch_count", log.switch_count},
         {"final_state", log.final_state}};
  if (cfg.problem == "sirw") {
    double integral = ophis::trapezoid_integral(log, 1, ex.model->sample_time());
    s["objective_integral_infected"] = integral;
    s["objective_integral_infected_scaled"] = integral * cfg.sirw.population_scale;
  }
  return s;
}

std::string csv_text(const ophis::EpisodeLog& log, int state_dim) {
  std::ostringstream os;
  ophis::write_episode_csv(os, log, state_dim);
  return os.str();
}

int run_plan(const CommonArgs& args) {
  ophis::ExperimentConfig cfg = load_config(args);
  ophis::Experiment ex = ophis::build_experiment(cfg);
  info("planning once with budget " + std::to_string(ex.planner.budget));
  ophis::PlanResult res = ophis::plan(ex.problem, ex.planner, ex.x0);
  json out = plan_result_json(res, *ex.model);
  std::cout << out.dump(2) << "\n";
  if (!args.out_dir.empty()) {
    write_text(args.out_dir, "plan.json", out.dump(2) + "\n");
    write_text(args.out_dir, "config.json", ophis::serialize_config(cfg).dump(2) + "\n");
  }
  return 0;
}

int run_run(const CommonArgs& args) {
  ophis::ExperimentConfig cfg = load_config(args);
  ophis::Experiment ex = ophis::build_experiment(cfg);
  info("running " + std::to_string(ex.episode_length) + " closed-loop steps");
  ophis::EpisodeLog log =
      ophis::receding_horizon_run(ex.problem, ex.planner, ex.x0, ex.episode_length);
  json summary = episode_summary_json(log, cfg, ex);
  std::cout << summary.dump(2) << "\n";
  if (!args.out_dir.empty()) {
    write_text(args.out_dir, "episode.csv", csv_text(log, ex.model->state_dim()));
    write_text(args.out_dir, "summary.json", summary.dump(2) + "\n");
    write_text(args.out_dir, "config.json", ophis::serialize_config(cfg).dump(2) + "\n");
  }
  return 0;
}

int run_oracle(const CommonArgs& args) {
  ophis::ExperimentConfig cfg = load_config(args);
  ophis::Experiment ex = ophis::build_experiment(cfg);
  info("exhaustive search: horizon " + std::to_string(cfg.oracle.horizon) + ", grid " +
       std::to_string(cfg.oracle.grid));
  ophis::OracleResult res = ophis::exhaustive_search(
      *ex.model, ex.x0, cfg.oracle.horizon, cfg.oracle.grid, ex.problem.min_dwell,
      ex.problem.discount, ex.problem.initial_dwell, cfg.oracle.cap, cfg.oracle.grid_style);
  json seq = json::array();
  for (const ophis::HybridAction& a : res.best_sequence)
    seq.push_back({{"c", a.c}, {"mode", a.mode}});
  json out{{"best_value", res.best_value},
           {"best_sequence", seq},
           {"sequences_evaluated", res.sequences_evaluated},
           {"grid_resolution", res.grid_resolution}};
  std::cout << out.dump(2) << "\n";
  if (!args.out_dir.empty()) write_text(args.out_dir, "oracle.json", out.dump(2) + "\n");
  return 0;
}

int run_census(const CommonArgs& args) {
  ophis::ExperimentConfig cfg = load_config(args);
  ophis::Experiment ex = ophis::build_experiment(cfg);
  info("full expansion to depth " + std::to_string(cfg.census.depth));
  ophis::Tree tree = ophis::full_expansion(ex.problem, ex.x0, cfg.census.depth);
  double reference;
  if (cfg.census.reference.has_value()) {
    reference = *cfg.census.reference;
  } else {
    double v_star = tree[0].value;
    double delta_min = tree[0].delta;
    for (const ophis::SetNode& n : tree) {
      v_star = std::max(v_star, n.value);
      if (n.expanded) delta_min = std::min(delta_min, n.delta);
    }
    reference = v_star + delta_min;
  }
  ophis::CensusReport rep = ophis::near_optimal_census(tree, reference, ex.problem);
  json rows = json::array();
  for (const ophis::CensusRow& r : rep.rows)
    rows.push_back({{"depth", r.depth},
                    {"total_nodes", r.total_nodes},
                    {"near_optimal", r.near_optimal},
                    {"cap", r.cap}});
  json out{{"rows", rows},
           {"v_reference", rep.v_reference},
           {"k_bar", rep.k_bar},
           {"k_hat", rep.k_hat}};
  std::cout << out.dump(2) << "\n";
  if (!args.out_dir.empty()) write_text(args.out_dir, "census.json", out.dump(2) + "\n");
  return 0;
}

int run_validate(const CommonArgs& args) {
  ophis::ExperimentConfig cfg = load_config(args);
  ophis::Experiment ex = ophis::build_experiment(cfg);
  info("sampling " + std::to_string(cfg.validation.samples) + " state/input pairs");
  ophis::AssumptionReport rep = ophis::validate_assumptions(
      *ex.model, cfg.validation.samples, ex.problem.lipschitz_dynamics,
      ex.problem.lipschitz_reward, ex.problem.discount, cfg.seed);
  json out{{"samples", rep.samples},
           {"candidate_lipschitz_dynamics", rep.candidate_lipschitz_dynamics},
           {"candidate_lipschitz_reward", rep.candidate_lipschitz_reward},
           {"discount", rep.discount},
           {"max_dynamics_ratio", rep.max_dynamics_ratio},
           {"max_reward_ratio", rep.max_reward_ratio},
           {"dynamics_within_candidate", rep.dynamics_within_candidate},
           {"reward_within_candidate", rep.reward_within_candidate},
           {"contraction_holds", rep.contraction_holds},
           {"note", "sampling can refute candidate constants, never prove them"}};
  std::cout << out.dump(2) << "\n";
  if (!args.out_dir.empty()) write_text(args.out_dir, "validate.json", out.dump(2) + "\n");
  return 0;
}

int run_repro(const std::string& id, const CommonArgs& args) {
  if (args.out_dir.empty())
    throw std::invalid_argument("repro writes a bundle and needs --out DIR");
  std::vector<ophis::ReproCase> cases = ophis::repro_cases(id);
  json comparison;
  std::optional<double> baseline_integral;
  for (ophis::ReproCase& rc : cases) {
    apply_overrides(rc.config, args);
    ophis::Experiment ex = ophis::build_experiment(rc.config);
    info("repro case " + rc.name);
    ophis::EpisodeLog log =
        ophis::receding_horizon_run(ex.problem, ex.planner, ex.x0, ex.episode_length);
    write_text(args.out_dir, rc.name + ".csv", csv_text(log, ex.model->state_dim()));
    write_text(args.out_dir, rc.name + ".config.json",
               ophis::serialize_config(rc.config).dump(2) + "\n");
    json entry = episode_summary_json(log, rc.config, ex);
    if (id == "pendulum-fig2") {
      double settle_window_max = std::abs(log.final_state[0]);
      for (const ophis::EpisodeStep& s : log.steps)
        if (s.time >= 3.0) settle_window_max = std::max(settle_window_max, std::abs(s.state[0]));
      entry["max_abs_angle_after_3s"] = settle_window_max;
      entry["swing_up_by_3s"] = settle_window_max < 0.15;
    }
    if (id == "sir-fig3" && rc.name == "vaccination-only")
      baseline_integral = entry["objective_integral_infected"].get<double>();
    comparison[rc.name] = entry;
    debug("case " + rc.name + " done");
  }
  if (baseline_integral.has_value()) {
    json red;
    for (ophis::ReproCase& rc : cases) {
      if (rc.name == "vaccination-only") continue;
      double v = comparison[rc.name]["objective_integral_infected"].get<double>();
      red[rc.name] = 1.0 - v / *baseline_integral;
    }
    comparison["reduction_vs_baseline"] = red;
  }
  write_text(args.out_dir, "comparison.json", comparison.dump(2) + "\n");
  std::cout << comparison.dump(2) << "\n";
  return 0;
}

void add_common(CLI::App* cmd, CommonArgs& args, bool config_required) {
  auto* opt = cmd->add_option("--config", args.config_path, "experiment config (JSON)");
  if (config_required) opt->required();
  cmd->add_option("--out", args.out_dir, "directory for file outputs");
  cmd->add_option("--budget", args.budget, "override the planning budget n");
  cmd->add_option("--variant", args.variant, "override the planner variant (ophis|sophis)");
  cmd->add_option("--dwell", args.dwell, "override the minimum dwell time");
  cmd->add_option("--seed", args.seed, "override the sampling seed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"optimistic planning for hybrid-input switched systems"};
  app.require_subcommand(1);

  CommonArgs plan_args, run_args, oracle_args, census_args, validate_args, repro_args;
  std::string repro_id;

  CLI::App* cmd_plan = app.add_subcommand("plan", "plan once from the initial state");
  add_common(cmd_plan, plan_args, true);
  CLI::App* cmd_run = app.add_subcommand("run", "closed-loop receding-horizon episode");
  add_common(cmd_run, run_args, true);
  CLI::App* cmd_oracle = app.add_subcommand("oracle", "small-instance exhaustive search");
  add_common(cmd_oracle, oracle_args, true);
  CLI::App* cmd_census = app.add_subcommand("census", "near-optimal node census");
  add_common(cmd_census, census_args, true);
  CLI::App* cmd_validate = app.add_subcommand("validate", "empirical assumption probe");
  add_common(cmd_validate, validate_args, true);
  CLI::App* cmd_repro = app.add_subcommand("repro", "run a canned experiment bundle");
  cmd_repro->add_option("--id", repro_id, "bundle id")->required();
  add_common(cmd_repro, repro_args, false);

  try {
    app.parse(argc, argv);
    if (cmd_plan->parsed()) return run_plan(plan_args);
    if (cmd_run->parsed()) return run_run(run_args);
    if (cmd_oracle->parsed()) return run_oracle(oracle_args);
    if (cmd_census->parsed()) return run_census(census_args);
    if (cmd_validate->parsed()) return run_validate(validate_args);
    if (cmd_repro->parsed()) return run_repro(repro_id, repro_args);
    return 2;
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const ophis::CapacityError& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return 3;
  } catch (const ophis::ModelError& e) {
    std::cerr << "model failure: " << e.what() << "\n";
    return 4;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
