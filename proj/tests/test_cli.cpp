#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ophis/benchmarks/synthetic.hpp"
#include "ophis/episode.hpp"
#include "ophis/oracle.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code{-1};
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

fs::path fresh_dir(const std::string& tag) {
  static int counter = 0;
  fs::path dir = fs::temp_directory_path() /
                 ("ophis_cli_" + tag + "_" + std::to_string(::getpid()) + "_" +
                  std::to_string(counter++));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

CliResult run_cli(const std::string& args, const std::string& env_prefix = "") {
  fs::path dir = fresh_dir("io");
  fs::path out = dir / "stdout.txt";
  fs::path err = dir / "stderr.txt";
  std::string cmd = env_prefix + " \"" + OPHIS_CLI_PATH + "\" " + args + " > \"" +
                    out.string() + "\" 2> \"" + err.string() + "\"";
  int raw = std::system(cmd.c_str());
  CliResult res;
  res.code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  res.out = slurp(out);
  res.err = slurp(err);
  return res;
}

std::string config_path(const std::string& name) {
  return std::string(OPHIS_CONFIG_DIR) + "/" + name;
}

fs::path write_config(const json& j) {
  fs::path dir = fresh_dir("cfg");
  fs::path p = dir / "config.json";
  std::ofstream f(p);
  f << j.dump(2) << "\n";
  return p;
}

std::vector<std::string> csv_lines_without_last_column(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    auto pos = line.rfind(',');
    lines.push_back(pos == std::string::npos ? line : line.substr(0, pos));
  }
  return lines;
}

}  // namespace

TEST_CASE("help exits cleanly and names the subcommands") {
  CliResult res = run_cli("--help");
  CHECK(res.code == 0);
  for (const char* cmd : {"plan", "run", "oracle", "census", "validate", "repro"})
    CHECK(res.out.find(cmd) != std::string::npos);

  CliResult bare = run_cli("");
  CHECK(bare.code == 2);
}

TEST_CASE("plan writes the same result to stdout and disk") {
  fs::path out = fresh_dir("plan");
  CliResult res =
      run_cli("plan --config " + config_path("synthetic-constant.json") + " --out " +
              out.string());
  REQUIRE(res.code == 0);
  json printed = json::parse(res.out);
  CHECK(printed.at("v_star").get<double>() > 0.0);
  CHECK(printed.at("degenerate") == false);
  CHECK(printed.at("diagnostics").at("budget_used").get<std::uint64_t>() <= 200);
  CHECK(printed.at("actions").is_array());

  json filed = json::parse(slurp(out / "plan.json"));
  CHECK(filed == printed);
  json cfg = json::parse(slurp(out / "config.json"));
  CHECK(cfg.at("problem") == "synthetic-constant");
  CHECK(cfg.at("planner").at("budget") == 200);
}

TEST_CASE("command-line overrides beat the config file") {
  CliResult res = run_cli("plan --config " + config_path("synthetic-constant.json") +
                          " --budget 40 --variant sophis");
  REQUIRE(res.code == 0);
  json printed = json::parse(res.out);
  CHECK(printed.at("diagnostics").at("budget_used").get<std::uint64_t>() <= 40);
  CHECK(printed.at("degenerate") == false);
}

TEST_CASE("a closed-loop run produces a csv row per step") {
  fs::path out = fresh_dir("run");
  CliResult res = run_cli("run --config " + config_path("synthetic-linear.json") +
                          " --budget 60 --out " + out.string());
  REQUIRE(res.code == 0);
  json summary = json::parse(res.out);
  CHECK(summary.at("steps") == 10);
  CHECK(summary.contains("switch_count"));
  CHECK(summary.at("final_state").is_array());

  std::string csv = slurp(out / "episode.csv");
  std::istringstream is(csv);
  std::string header;
  std::getline(is, header);
  CHECK(header == ophis::episode_csv_header(1));
  int rows = 0;
  std::string line;
  while (std::getline(is, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 10);
  CHECK(json::parse(slurp(out / "summary.json")) == summary);
}

TEST_CASE("episodes are deterministic apart from wall-clock timing") {
  fs::path a = fresh_dir("det_a");
  fs::path b = fresh_dir("det_b");
  std::string base = "run --config " + config_path("synthetic-linear.json") + " --budget 80";
  REQUIRE(run_cli(base + " --out " + a.string()).code == 0);
  REQUIRE(run_cli(base + " --out " + b.string()).code == 0);
  auto la = csv_lines_without_last_column(slurp(a / "episode.csv"));
  auto lb = csv_lines_without_last_column(slurp(b / "episode.csv"));
  CHECK(la == lb);
  REQUIRE(la.size() == 11);
}

TEST_CASE("the oracle subcommand matches an in-process search") {
  fs::path cfg = write_config(json{{"problem", "synthetic-linear"},
                                   {"oracle", {{"horizon", 3}, {"grid", 3}}}});
  CliResult res = run_cli("oracle --config " + cfg.string());
  REQUIRE(res.code == 0);
  json printed = json::parse(res.out);

  ophis::benchmarks::Linear1dModel model;
  std::vector<double> x0{0.0};
  ophis::OracleResult ref = ophis::exhaustive_search(model, x0, 3, 3, 2, 0.5);
  CHECK(printed.at("best_value").get<double>() ==
        Catch::Approx(ref.best_value).epsilon(1e-12));
  CHECK(printed.at("sequences_evaluated").get<std::uint64_t>() == ref.sequences_evaluated);
  CHECK(printed.at("best_sequence").size() == 3);
}

TEST_CASE("an oversized oracle request is refused with its own exit code") {
  fs::path cfg = write_config(
      json{{"problem", "synthetic-linear"},
           {"oracle", {{"horizon", 10}, {"grid", 27}, {"cap", 1000.0}}}});
  CliResult res = run_cli("oracle --config " + cfg.string());
  CHECK(res.code == 3);
  CHECK(res.err.find("refused") != std::string::npos);
}

TEST_CASE("census reports per-depth counts against the ceiling") {
  fs::path out = fresh_dir("census");
  CliResult res = run_cli("census --config " + config_path("synthetic-constant.json") +
                          " --out " + out.string());
  REQUIRE(res.code == 0);
  json printed = json::parse(slurp(out / "census.json"));
  CHECK(printed.at("k_bar") == 3.0);
  const std::vector<std::uint64_t> totals{1, 2, 4, 6, 10, 16, 26};
  REQUIRE(printed.at("rows").size() == totals.size());
  for (std::size_t d = 0; d < totals.size(); ++d) {
    const json& row = printed.at("rows").at(d);
    CHECK(row.at("depth") == static_cast<int>(d));
    CHECK(row.at("total_nodes").get<std::uint64_t>() == totals[d]);
    CHECK(row.at("near_optimal").get<std::uint64_t>() <= totals[d]);
    CHECK(row.at("near_optimal").get<double>() <= row.at("cap").get<double>());
  }
}

TEST_CASE("an explicit census reference keeps every constant-reward node") {
  fs::path cfg = write_config(json{{"problem", "synthetic-constant"},
                                   {"census", {{"depth", 5}, {"reference", 1.9}}}});
  CliResult res = run_cli("census --config " + cfg.string());
  REQUIRE(res.code == 0);
  json printed = json::parse(res.out);
  CHECK(printed.at("v_reference") == 1.9);
  for (const json& row : printed.at("rows"))
    CHECK(row.at("near_optimal") == row.at("total_nodes"));
}

TEST_CASE("validation accepts the tight synthetic constants") {
  fs::path out = fresh_dir("validate");
  CliResult res = run_cli("validate --config " + config_path("synthetic-linear.json") +
                          " --seed 7 --out " + out.string());
  REQUIRE(res.code == 0);
  json printed = json::parse(slurp(out / "validate.json"));
  CHECK(printed.at("dynamics_within_candidate") == true);
  CHECK(printed.at("reward_within_candidate") == true);
  CHECK(printed.at("contraction_holds") == true);
  CHECK(printed.at("max_dynamics_ratio").get<double>() <= 0.6 + 1e-9);
  CHECK(printed.at("candidate_lipschitz_dynamics") == 0.6);
}

TEST_CASE("config mistakes map to the config exit code") {
  fs::path bad_key = write_config(json{{"problem", "synthetic-linear"}, {"plonner", 1}});
  CliResult res = run_cli("plan --config " + bad_key.string());
  CHECK(res.code == 2);
  CHECK(res.err.find("config error") != std::string::npos);

  CliResult missing = run_cli("plan --config /nonexistent/conf.json");
  CHECK(missing.code == 2);

  fs::path dir = fresh_dir("truncated");
  fs::path broken = dir / "broken.json";
  std::ofstream(broken) << "{\"problem\": ";
  CliResult malformed = run_cli("plan --config " + broken.string());
  CHECK(malformed.code == 2);

  CliResult no_config = run_cli("plan");
  CHECK(no_config.code == 2);
}

TEST_CASE("unknown bundle ids are rejected with the known list") {
  fs::path out = fresh_dir("repro_bad");
  CliResult res = run_cli("repro --id bogus --out " + out.string());
  CHECK(res.code == 2);
  CHECK(res.err.find("pendulum-fig2") != std::string::npos);
  CHECK(res.err.find("sir-fig3") != std::string::npos);

  CliResult no_out = run_cli("repro --id sir-fig3");
  CHECK(no_out.code == 2);
  CHECK(no_out.err.find("--out") != std::string::npos);
}

TEST_CASE("a bundle run writes one trace and config per case") {
  fs::path out = fresh_dir("repro");
  CliResult res = run_cli("repro --id sir-fig3 --budget 40 --out " + out.string());
  REQUIRE(res.code == 0);
  for (const char* name : {"vaccination-only", "hybrid-dwell2", "hybrid-dwell1"}) {
    CHECK(fs::exists(out / (std::string(name) + ".csv")));
    json cfg = json::parse(slurp(out / (std::string(name) + ".config.json")));
    CHECK(cfg.at("planner").at("budget") == 40);
    CHECK(cfg.at("problem") == "sirw");
  }
  json comparison = json::parse(slurp(out / "comparison.json"));
  CHECK(comparison.contains("reduction_vs_baseline"));
  CHECK(comparison.at("vaccination-only").contains("objective_integral_infected"));
  CHECK(comparison.at("reduction_vs_baseline").contains("hybrid-dwell2"));
}

TEST_CASE("log verbosity is controlled by the environment") {
  std::string args = "plan --config " + config_path("synthetic-constant.json");
  CliResult quiet = run_cli(args, "OPHIS_LOG=quiet");
  CHECK(quiet.code == 0);
  CHECK(quiet.err.empty());
  CliResult loud = run_cli(args, "OPHIS_LOG=debug");
  CHECK(loud.code == 0);
  CHECK(loud.err.find("planning once") != std::string::npos);
}
