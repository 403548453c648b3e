#include <catch2/catch.hpp>

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "agentflow/io.hpp"
#include "cli_helpers.hpp"

using cli_test::run_cli;
using cli_test::temp_file;
using cli_test::write_file;
using nlohmann::json;

namespace {

std::string config_dir() {
  if (const char* env = std::getenv("AGENTFLOW_CONFIG_DIR")) return env;
  for (const char* guess : {"configs", "../configs", "../../configs"}) {
    if (std::ifstream(std::string(guess) + "/five_agent_pipeline.json").good()) {
      return guess;
    }
  }
  return "configs";
}

std::string five_agent_config() { return config_dir() + "/five_agent_pipeline.json"; }

constexpr const char* kThreeAgentConfig = R"({
  "defaults": {"rate_think": 100, "rate_gen": 50},
  "agents": [
    {"kind": "llm", "id": "a", "alpha": 0.01, "beta": 0.001, "reasoning_tokens": 500},
    {"kind": "llm", "id": "b", "alpha": 0.01, "beta": 0.002, "reasoning_tokens": 500},
    {"kind": "llm", "id": "c", "alpha": 0.01, "beta": 0.003, "reasoning_tokens": 500}
  ],
  "workflow": {"sequential": ["a", "b", "c"]},
  "pricing": {"c_tok": 1e-4, "c_comp": 2e-6},
  "budgets": {"latency_budget": 75.0, "cost_budget": 0.3}
})";

}  // namespace

TEST_CASE("cli binary is available to the test suite") {
  REQUIRE_FALSE(cli_test::cli_path().empty());
}

TEST_CASE("cli validate") {
  const auto ok = run_cli("validate " + five_agent_config());
  CHECK(ok.exit_code == 0);
  CHECK(ok.out == "OK\n");

  const std::string bad_path = temp_file("bad_beta.json");
  write_file(bad_path, R"({
    "agents": [{"kind": "llm", "id": "planner", "alpha": 0.01, "beta": 0,
                "rate_think": 100, "rate_gen": 50}],
    "workflow": "planner",
    "pricing": {"c_tok": 1e-4, "c_comp": 2e-6}
  })");
  const auto bad = run_cli("validate " + bad_path);
  CHECK(bad.exit_code == 4);
  CHECK(bad.err.find("beta must be > 0") != std::string::npos);
  CHECK(bad.err.find("planner") != std::string::npos);
  CHECK(bad.err.find(":2:") != std::string::npos);  // line of the agent entry

  const std::string garbage_path = temp_file("garbage.json");
  write_file(garbage_path, "{ not json ]");
  CHECK(run_cli("validate " + garbage_path).exit_code == 3);

  CHECK(run_cli("validate /no/such/file.json").exit_code == 3);
}

TEST_CASE("cli optimize") {
  const auto result = run_cli("optimize " + five_agent_config() + " --format json");
  REQUIRE(result.exit_code == 0);
  const json j = json::parse(result.out);
  CHECK(j["binding"] == "latency");
  CHECK(j["effective_budget"].get<double>() == Approx(12000.0));

  double total = 0.0;
  for (const auto& [id, tokens] : j["allocation"].items()) total += tokens.get<double>();
  CHECK(total == Approx(12000.0).epsilon(1e-9));

  const double reliability = j["predicted"]["reliability"].get<double>();
  CHECK(reliability > 0.7);
  CHECK(reliability < 0.8);

  // CSV view carries one row per agent.
  const auto csv = run_cli("optimize " + five_agent_config() +
                           " --format csv --floor-tokens --compare-baselines");
  REQUIRE(csv.exit_code == 0);
  CHECK(csv.out.rfind("agent,beta,tokens,tokens_floor,uniform,proportional,"
                      "inverse_proportional\n", 0) == 0);
  CHECK(std::count(csv.out.begin(), csv.out.end(), '\n') == 6);  // header + 5 agents
}

TEST_CASE("cli optimize error codes") {
  const std::string infeasible_path = temp_file("infeasible.json");
  write_file(infeasible_path, R"({
    "agents": [{"kind": "llm", "id": "a", "alpha": 0.01, "beta": 0.001,
                "reasoning_tokens": 1000, "mean_infra_delay": 0.5,
                "rate_think": 100, "rate_gen": 50}],
    "workflow": "a",
    "pricing": {"c_tok": 1e-4, "c_comp": 2e-6},
    "budgets": {"latency_budget": 10.0, "cost_budget": 1.0}
  })");
  CHECK(run_cli("optimize " + infeasible_path).exit_code == 5);

  const std::string hetero_path = temp_file("hetero.json");
  write_file(hetero_path, R"({
    "agents": [
      {"kind": "llm", "id": "a", "alpha": 0.01, "beta": 0.001,
       "rate_think": 100, "rate_gen": 50},
      {"kind": "llm", "id": "b", "alpha": 0.01, "beta": 0.002,
       "rate_think": 100, "rate_gen": 60}
    ],
    "workflow": {"sequential": ["a", "b"]},
    "pricing": {"c_tok": 1e-4, "c_comp": 2e-6},
    "budgets": {"latency_budget": 100.0, "cost_budget": 1.0}
  })");
  CHECK(run_cli("optimize " + hetero_path).exit_code == 6);

  const std::string no_llm_path = temp_file("no_llm.json");
  write_file(no_llm_path, R"({
    "agents": [{"kind": "non_llm", "id": "db",
                "latency_model": {"mean_latency": 1.0}, "reliability": 0.9}],
    "workflow": {"sequential": ["db"]},
    "pricing": {"c_tok": 1e-4, "c_comp": 2e-6},
    "budgets": {"latency_budget": 100.0, "cost_budget": 1.0}
  })");
  CHECK(run_cli("optimize " + no_llm_path).exit_code == 7);

  // Budgets missing entirely.
  const std::string no_budget_path = temp_file("no_budget.json");
  write_file(no_budget_path, R"({
    "agents": [{"kind": "llm", "id": "a", "alpha": 0.01, "beta": 0.001,
                "rate_think": 100, "rate_gen": 50}],
    "workflow": "a",
    "pricing": {"c_tok": 1e-4, "c_comp": 2e-6}
  })");
  CHECK(run_cli("optimize " + no_budget_path).exit_code == 4);
}

TEST_CASE("cli sweep") {
  const auto empty = run_cli("sweep " + five_agent_config());
  CHECK(empty.exit_code == 2);

  // A single-point sweep agrees with optimize at the same effective budget.
  const auto opt = run_cli("optimize " + five_agent_config() + " --format json");
  REQUIRE(opt.exit_code == 0);
  const double predicted = json::parse(opt.out)["predicted"]["reliability"].get<double>();

  const auto sweep = run_cli("sweep " + five_agent_config() + " --budgets 12000");
  REQUIRE(sweep.exit_code == 0);
  REQUIRE(sweep.out.rfind("budget,strategy,reliability,theta,latency,user_cost,"
                          "compute_cost\n", 0) == 0);
  std::istringstream lines(sweep.out);
  std::string line;
  std::getline(lines, line);           // header
  REQUIRE(std::getline(lines, line));  // water_filling row
  REQUIRE(line.find("water_filling") != std::string::npos);
  const auto last_comma_fields = [&] {
    std::vector<std::string> fields;
    std::istringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    return fields;
  }();
  CHECK(std::strtod(last_comma_fields[2].c_str(), nullptr) ==
        Approx(predicted).epsilon(1e-12));

  // Determinism: identical bytes across runs and thread counts.
  const auto range_a = run_cli("sweep " + five_agent_config() +
                               " --budget-range 2000:2000:20000 --threads 1");
  const auto range_b = run_cli("sweep " + five_agent_config() +
                               " --budget-range 2000:2000:20000 --threads 4");
  REQUIRE(range_a.exit_code == 0);
  CHECK(range_a.out == range_b.out);
  CHECK(std::count(range_a.out.begin(), range_a.out.end(), '\n') == 1 + 10 * 4);
}

TEST_CASE("cli verify") {
  const std::string path = temp_file("three_agents.json");
  write_file(path, kThreeAgentConfig);

  const auto pass = run_cli("verify " + path + " --grid-step 10 --format json");
  REQUIRE(pass.exit_code == 0);
  const json j = json::parse(pass.out);
  CHECK(j["pass"] == true);
  CHECK(j["budget"].get<double>() == Approx(3000.0));  // both sides meet at 3000
  CHECK(j["objective_gap"].get<double>() >= 0.0);
  CHECK(j["per_agent"].size() == 3);

  // One agent: grid and analytic coincide on the full budget.
  const std::string one_path = temp_file("one_agent.json");
  write_file(one_path, R"({
    "agents": [{"kind": "llm", "id": "solo", "alpha": 0.01, "beta": 0.001,
                "rate_think": 100, "rate_gen": 50}],
    "workflow": "solo",
    "pricing": {"c_tok": 1e-4, "c_comp": 2e-6},
    "budgets": {"latency_budget": 20.0, "cost_budget": 0.05}
  })");
  const auto solo = run_cli("verify " + one_path + " --format json");
  REQUIRE(solo.exit_code == 0);
  const json sj = json::parse(solo.out);
  // Both sides allocate the full budget; the analytic side carries only its
  // 1e-9 * B bisection residual.
  CHECK(sj["per_agent"][0]["token_gap"].get<double>() <= 1e-6);

  // Five agents exceed a lowered exhaustive cap.
  const auto too_many = run_cli("verify " + five_agent_config() + " --max-agents 4");
  CHECK(too_many.exit_code == 8);

  // Refinement mode handles the same instance.
  const auto refined = run_cli("verify " + five_agent_config() + " --refine 100");
  CHECK(refined.exit_code == 0);
}

TEST_CASE("cli simulate") {
  // No allocation and no --use-optimal: validation error.
  const std::string path = temp_file("sim_three.json");
  write_file(path, kThreeAgentConfig);
  CHECK(run_cli("simulate " + path + " --samples 100").exit_code == 4);

  const std::string cmd = "simulate " + path +
                          " --use-optimal --samples 20000 --seed 99 --format json";
  const auto a = run_cli(cmd + " --threads 1");
  REQUIRE(a.exit_code == 0);
  const auto b = run_cli(cmd + " --threads 4");
  REQUIRE(b.exit_code == 0);
  CHECK(a.out == b.out);  // byte-identical across worker counts

  const json j = json::parse(a.out);
  CHECK(j["samples"] == 20000);
  CHECK(j["success_rate"].get<double>() > 0.0);
  CHECK(j["success_rate"].get<double>() < 1.0);
  CHECK(j["per_agent"].size() == 3);

  // The simulated success rate agrees with the optimizer's predicted
  // reliability within three standard errors.
  const auto opt = run_cli("optimize " + path + " --format json");
  REQUIRE(opt.exit_code == 0);
  const double predicted = json::parse(opt.out)["predicted"]["reliability"].get<double>();
  const double z95 = 1.959963984540054;
  const double standard_error = j["success_half_width"].get<double>() / z95;
  CHECK(std::fabs(j["success_rate"].get<double>() - predicted) <= 3.0 * standard_error);
}

TEST_CASE("cli evaluate") {
  const std::string path = temp_file("eval.json");
  const std::string config_text = R"({
    "agents": [{"kind": "llm", "id": "a", "alpha": 0.002, "beta": 0.001,
                "reasoning_tokens": 500, "rate_think": 100, "rate_gen": 50}],
    "workflow": "a",
    "pricing": {"c_tok": 1e-4, "c_comp": 2e-6},
    "allocation": {"a": 1000.0}
  })";
  write_file(path, config_text);
  const auto result = run_cli("evaluate " + path + " --format json");
  REQUIRE(result.exit_code == 0);
  const json j = json::parse(result.out);
  // (1 - e^-1)^2 from alpha*X = beta*L = 1.
  CHECK(j["metrics"]["reliability"].get<double>() ==
        Approx(0.39957640089372803).epsilon(1e-12));
  CHECK(j["metrics"]["expected_latency"].get<double>() == Approx(25.0));
  CHECK(j["metrics"]["user_cost"].get<double>() == Approx(0.1));
  CHECK(j["manifest"]["command"] == "evaluate");
  CHECK_FALSE(j["manifest"].contains("timestamp"));
  // The digest commits to the input file bytes.
  CHECK(j["manifest"]["input_digest"].get<std::string>() ==
        "fnv1a64:" + agentflow::fnv1a64_hex(config_text));
}

TEST_CASE("cli usage errors") {
  CHECK(run_cli("optimize").exit_code == 2);        // no input anywhere
  CHECK(run_cli("frobnicate x.json").exit_code == 2);
  CHECK(run_cli("--help").exit_code == 0);
}
