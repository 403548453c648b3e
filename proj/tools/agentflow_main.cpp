// agentflow — model and optimize the latency / reliability / cost of
// LLM-enabled agent workflows.
//
// Subcommands: validate, evaluate, optimize, sweep, verify, simulate.
// Machine-readable output goes to --output or stdout; diagnostics and the run
// log line go to stderr. Exit codes are documented in the README and in
// --help.

#include <cmath>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "agentflow/agentflow.hpp"

namespace {

using namespace agentflow;
using nlohmann::ordered_json;

enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kUsage = 2,
  kParse = 3,          // unreadable file or malformed JSON
  kInvalid = 4,        // config or workflow invariant violations
  kInfeasible = 5,     // latency budget below the fixed latency
  kHeterogeneous = 6,  // LLM agents disagree on rate_gen
  kNothing = 7,        // no LLM agent to optimize
  kTooLarge = 8,       // oracle enumeration cap exceeded
  kNoConverge = 9,     // solver failed to converge
  kVerifyFail = 10,    // analytic/oracle gap above tolerance
};

struct CommonOpts {
  std::string input;
  std::string output;
  std::string format = "table";
  std::uint64_t seed = 0;
  int threads = 1;
};

void add_common(CLI::App* cmd, CommonOpts& opts, const std::string& default_format) {
  opts.format = default_format;
  cmd->add_option("config", opts.input, "workflow definition file");
  cmd->add_option("--input", opts.input, "workflow definition file");
  cmd->add_option("--output", opts.output, "write machine-readable output to this file");
  cmd->add_option("--format", opts.format, "output format")
      ->check(CLI::IsMember({"table", "json", "csv"}));
  cmd->add_option("--seed", opts.seed, "random seed (simulation only)");
  cmd->add_option("--threads", opts.threads, "worker count; never changes results")
      ->check(CLI::PositiveNumber);
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buffer;
}

void log_manifest(const RunManifest& manifest) {
  std::cerr << "# " << kToolName << " " << kToolVersion << " | " << manifest.command
            << " | input=" << manifest.input_path << " digest=" << manifest.input_digest
            << " | " << utc_timestamp() << "\n";
}

void print_diagnostics(const std::string& path, const std::vector<Diagnostic>& diagnostics) {
  for (const Diagnostic& d : diagnostics) {
    std::cerr << path << ":" << d.line << ":" << d.column << ": error: " << d.message;
    if (!d.pointer.empty()) std::cerr << " [" << d.pointer << "]";
    std::cerr << "\n";
  }
}

struct LoadedConfig {
  WorkflowConfig config;
  std::string raw_text;
};

// Reads and validates the config; on failure prints every diagnostic and
// returns the exit code instead.
std::variant<LoadedConfig, int> load_config(const std::string& path) {
  if (path.empty()) {
    std::cerr << "error: no input file given (pass a config path or --input)\n";
    return kUsage;
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot open config file: " << path << "\n";
    return kParse;
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  LoadedConfig loaded;
  loaded.raw_text = buffer.str();

  ParseOutcome outcome = parse_config(loaded.raw_text);
  if (!outcome.ok()) {
    print_diagnostics(path, outcome.diagnostics);
    // Syntax / IO failures carry no pointer; invariant violations do.
    for (const Diagnostic& d : outcome.diagnostics) {
      if (d.pointer.empty()) return kParse;
    }
    return kInvalid;
  }
  loaded.config = std::move(*outcome.config);
  return loaded;
}

RunManifest make_manifest(const std::string& command, const std::string& input_path,
                          const std::string& raw_text,
                          std::vector<std::pair<std::string, std::string>> parameters) {
  RunManifest manifest;
  manifest.command = command;
  manifest.input_path = input_path;
  manifest.input_digest = "fnv1a64:" + fnv1a64_hex(raw_text);
  manifest.parameters = std::move(parameters);
  return manifest;
}

int write_output(const CommonOpts& opts, const std::string& content) {
  if (opts.output.empty()) {
    std::cout << content;
    return kOk;
  }
  std::ofstream out(opts.output, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write output file: " << opts.output << "\n";
    return kInternal;
  }
  out << content;
  return kOk;
}

ordered_json metrics_json(const WorkflowMetrics& metrics) {
  ordered_json j;
  j["expected_latency"] = metrics.expected_latency;
  j["reliability"] = metrics.reliability;
  j["user_cost"] = metrics.user_cost;
  j["compute_cost"] = metrics.compute_cost;
  return j;
}

ordered_json allocation_json(const Allocation& allocation) {
  ordered_json j = ordered_json::object();
  for (const auto& [id, tokens] : allocation) j[id] = tokens;
  return j;
}

std::string metrics_table(const WorkflowMetrics& metrics) {
  std::ostringstream out;
  out << "expected latency  " << format_sig4(metrics.expected_latency) << " s\n"
      << "reliability       " << format_sig4(metrics.reliability) << "\n"
      << "user cost         " << format_sig4(metrics.user_cost) << "\n"
      << "compute cost      " << format_sig4(metrics.compute_cost) << "\n";
  return out.str();
}

// Allocation source shared by evaluate and simulate: explicit config section
// or --use-optimal.
Allocation resolve_allocation(const WorkflowConfig& config, bool use_optimal) {
  if (use_optimal) {
    if (!config.budgets) {
      throw ValidationError("--use-optimal requires a budgets section in the config");
    }
    return optimize(config.workflow, *config.budgets, config.pricing).allocation;
  }
  if (!config.allocation) {
    throw ValidationError(
        "config has no allocation section; add one or pass --use-optimal");
  }
  Allocation full = zero_allocation(config.workflow);
  for (const auto& [id, tokens] : *config.allocation) full[id] = tokens;
  return full;
}

// ---------------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------------

int cmd_validate(const CommonOpts& opts) {
  const auto loaded = load_config(opts.input);
  if (std::holds_alternative<int>(loaded)) return std::get<int>(loaded);
  std::cout << "OK\n";
  return kOk;
}

// ---------------------------------------------------------------------------
// evaluate
// ---------------------------------------------------------------------------

int cmd_evaluate(const CommonOpts& opts, bool use_optimal) {
  auto loaded = load_config(opts.input);
  if (std::holds_alternative<int>(loaded)) return std::get<int>(loaded);
  auto& [config, raw_text] = std::get<LoadedConfig>(loaded);

  const Allocation allocation = resolve_allocation(config, use_optimal);
  const WorkflowMetrics metrics = evaluate(config.workflow, allocation, config.pricing);
  const RunManifest manifest = make_manifest(
      "evaluate", opts.input, raw_text,
      {{"format", opts.format}, {"use_optimal", use_optimal ? "true" : "false"}});
  log_manifest(manifest);

  if (opts.format == "json") {
    ordered_json j;
    j["manifest"] = manifest.to_json();
    j["allocation"] = allocation_json(allocation);
    j["metrics"] = metrics_json(metrics);
    return write_output(opts, j.dump(2) + "\n");
  }
  return write_output(opts, metrics_table(metrics));
}

// ---------------------------------------------------------------------------
// optimize
// ---------------------------------------------------------------------------

int cmd_optimize(const CommonOpts& opts, bool compare_baselines, bool floor_tokens) {
  auto loaded = load_config(opts.input);
  if (std::holds_alternative<int>(loaded)) return std::get<int>(loaded);
  auto& [config, raw_text] = std::get<LoadedConfig>(loaded);
  if (!config.budgets) {
    std::cerr << "error: optimize requires a budgets section in the config\n";
    return kInvalid;
  }

  const AllocationResult result = optimize(config.workflow, *config.budgets, config.pricing);
  const std::vector<LlmAgentSpec> agents = optimizable_llm_agents(config.workflow);
  const double budget = result.effective_budget;

  Allocation uniform, proportional, inverse;
  if (compare_baselines) {
    uniform = baseline_uniform(agents, budget);
    proportional = baseline_proportional(agents, budget);
    inverse = baseline_inverse_proportional(agents, budget);
  }

  const RunManifest manifest = make_manifest(
      "optimize", opts.input, raw_text,
      {{"format", opts.format},
       {"compare_baselines", compare_baselines ? "true" : "false"},
       {"floor_tokens", floor_tokens ? "true" : "false"}});
  log_manifest(manifest);

  if (opts.format == "json") {
    ordered_json j;
    j["manifest"] = manifest.to_json();
    j["effective_budget"] = result.effective_budget;
    j["binding"] = to_string(*result.binding);
    j["theta"] = result.theta;
    j["log_theta"] = result.log_theta;
    j["allocation"] = allocation_json(result.allocation);
    if (floor_tokens) {
      ordered_json floors = ordered_json::object();
      double assigned = 0.0;
      for (const auto& [id, tokens] : result.allocation) {
        floors[id] = std::floor(tokens);
        assigned += std::floor(tokens);
      }
      j["allocation_floor"] = floors;
      j["unassigned_remainder"] = result.effective_budget - assigned;
    }
    if (compare_baselines) {
      j["baselines"]["uniform"] = allocation_json(uniform);
      j["baselines"]["proportional"] = allocation_json(proportional);
      j["baselines"]["inverse_proportional"] = allocation_json(inverse);
    }
    j["predicted"] = metrics_json(*result.predicted);
    return write_output(opts, j.dump(2) + "\n");
  }

  if (opts.format == "csv") {
    std::string out = "agent,beta,tokens";
    if (floor_tokens) out += ",tokens_floor";
    if (compare_baselines) out += ",uniform,proportional,inverse_proportional";
    out += '\n';
    for (const LlmAgentSpec& agent : agents) {
      const double tokens = result.allocation.at(agent.id);
      out += agent.id + "," + format_double(agent.beta) + "," + format_double(tokens);
      if (floor_tokens) out += "," + format_double(std::floor(tokens));
      if (compare_baselines) {
        out += "," + format_double(uniform.at(agent.id));
        out += "," + format_double(proportional.at(agent.id));
        out += "," + format_double(inverse.at(agent.id));
      }
      out += '\n';
    }
    return write_output(opts, out);
  }

  std::ostringstream out;
  out << "effective budget  " << format_sig4(result.effective_budget) << " tokens ("
      << to_string(*result.binding) << "-bound)\n"
      << "shadow price      " << format_sig4(result.theta) << " per token\n\n";
  out << "agent                 beta      tokens";
  if (floor_tokens) out << "     floor";
  if (compare_baselines) out << "     uniform  proportional     inverse";
  out << "\n";
  for (const LlmAgentSpec& agent : agents) {
    const double tokens = result.allocation.at(agent.id);
    char line[256];
    std::snprintf(line, sizeof(line), "%-16s %9s %11s", agent.id.c_str(),
                  format_sig4(agent.beta).c_str(), format_sig4(tokens).c_str());
    out << line;
    if (floor_tokens) {
      std::snprintf(line, sizeof(line), " %9.0f", std::floor(tokens));
      out << line;
    }
    if (compare_baselines) {
      std::snprintf(line, sizeof(line), " %11s %13s %11s",
                    format_sig4(uniform.at(agent.id)).c_str(),
                    format_sig4(proportional.at(agent.id)).c_str(),
                    format_sig4(inverse.at(agent.id)).c_str());
      out << line;
    }
    out << "\n";
  }
  out << "\npredicted metrics at L*\n" << metrics_table(*result.predicted);
  return write_output(opts, out.str());
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

std::vector<double> parse_budget_range(const std::string& range) {
  // start:step:end, inclusive of end within a half-step tolerance
  double start = 0.0, step = 0.0, end = 0.0;
  if (std::sscanf(range.c_str(), "%lf:%lf:%lf", &start, &step, &end) != 3 || step <= 0.0) {
    throw ValidationError("--budget-range must be start:step:end with step > 0");
  }
  std::vector<double> budgets;
  for (double b = start; b <= end + 0.5 * step; b += step) budgets.push_back(b);
  return budgets;
}

int cmd_sweep(const CommonOpts& opts, const std::vector<double>& budget_list,
              const std::string& budget_range) {
  auto loaded = load_config(opts.input);
  if (std::holds_alternative<int>(loaded)) return std::get<int>(loaded);
  auto& [config, raw_text] = std::get<LoadedConfig>(loaded);

  std::vector<double> budgets = budget_list;
  if (!budget_range.empty()) {
    const std::vector<double> from_range = parse_budget_range(budget_range);
    budgets.insert(budgets.end(), from_range.begin(), from_range.end());
  }
  if (budgets.empty()) {
    std::cerr << "error: sweep needs --budgets or --budget-range\n";
    return kUsage;
  }

  const std::vector<SweepRow> rows =
      run_sweep(config.workflow, config.pricing, budgets, opts.threads);

  std::ostringstream budgets_str;
  for (std::size_t i = 0; i < budgets.size(); ++i) {
    budgets_str << (i ? "," : "") << format_double(budgets[i]);
  }
  const RunManifest manifest =
      make_manifest("sweep", opts.input, raw_text,
                    {{"format", opts.format}, {"budgets", budgets_str.str()}});
  log_manifest(manifest);

  if (opts.format == "json") {
    ordered_json j;
    j["manifest"] = manifest.to_json();
    ordered_json arr = ordered_json::array();
    for (const SweepRow& row : rows) {
      ordered_json r;
      r["budget"] = row.budget;
      r["strategy"] = row.strategy;
      r["reliability"] = row.reliability;
      if (row.theta) {
        r["theta"] = *row.theta;
      } else {
        r["theta"] = nullptr;
      }
      r["latency"] = row.latency;
      r["user_cost"] = row.user_cost;
      r["compute_cost"] = row.compute_cost;
      arr.push_back(std::move(r));
    }
    j["rows"] = std::move(arr);
    return write_output(opts, j.dump(2) + "\n");
  }
  if (opts.format == "table") {
    std::ostringstream out;
    out << "      budget  strategy                reliability\n";
    for (const SweepRow& row : rows) {
      char line[160];
      std::snprintf(line, sizeof(line), "%12s  %-22s %12s\n", format_sig4(row.budget).c_str(),
                    row.strategy.c_str(), format_sig4(row.reliability).c_str());
      out << line;
    }
    return write_output(opts, out.str());
  }
  return write_output(opts, write_sweep_csv(rows));
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

int cmd_verify(const CommonOpts& opts, double grid_step, int max_agents, int refine,
               double budget_override) {
  auto loaded = load_config(opts.input);
  if (std::holds_alternative<int>(loaded)) return std::get<int>(loaded);
  auto& [config, raw_text] = std::get<LoadedConfig>(loaded);

  const std::vector<LlmAgentSpec> agents = optimizable_llm_agents(config.workflow);
  if (agents.empty()) throw NothingToOptimize("verify: workflow has no optimizable LLM agent");

  double budget = budget_override;
  if (budget <= 0.0) {
    if (!config.budgets) {
      std::cerr << "error: verify needs a budgets section or --budget\n";
      return kInvalid;
    }
    budget = effective_budget(config.workflow, *config.budgets, config.pricing).tokens;
  }

  std::vector<double> betas;
  betas.reserve(agents.size());
  double beta_max = 0.0;
  for (const LlmAgentSpec& agent : agents) {
    betas.push_back(agent.beta);
    beta_max = std::max(beta_max, agent.beta);
  }

  const AllocationResult analytic = water_filling(agents, budget);
  std::vector<double> analytic_tokens;
  analytic_tokens.reserve(agents.size());
  for (const LlmAgentSpec& agent : agents) {
    analytic_tokens.push_back(analytic.allocation.at(agent.id));
  }
  const double analytic_objective = oracle_objective(betas, analytic_tokens);

  OracleConfig oracle_config;
  oracle_config.grid_step = grid_step;
  oracle_config.max_agents = max_agents;
  oracle_config.refinement_rounds = refine;
  const OracleResult oracle = oracle_allocate(betas, budget, oracle_config);

  const double gap = analytic_objective - oracle.objective;
  const double tolerance = grid_step * beta_max;
  const bool pass = gap <= tolerance && gap >= -1e-9 * std::max(1.0, std::fabs(analytic_objective));

  const RunManifest manifest = make_manifest(
      "verify", opts.input, raw_text,
      {{"format", opts.format},
       {"grid_step", format_double(grid_step)},
       {"budget", format_double(budget)}});
  log_manifest(manifest);

  if (opts.format == "json") {
    ordered_json j;
    j["manifest"] = manifest.to_json();
    j["budget"] = budget;
    j["analytic_objective"] = analytic_objective;
    j["oracle_objective"] = oracle.objective;
    j["objective_gap"] = gap;
    j["tolerance"] = tolerance;
    ordered_json per_agent = ordered_json::array();
    for (std::size_t i = 0; i < agents.size(); ++i) {
      ordered_json a;
      a["id"] = agents[i].id;
      a["analytic_tokens"] = analytic_tokens[i];
      a["oracle_tokens"] = oracle.tokens[i];
      a["token_gap"] = std::fabs(analytic_tokens[i] - oracle.tokens[i]);
      per_agent.push_back(std::move(a));
    }
    j["per_agent"] = std::move(per_agent);
    j["pass"] = pass;
    const int rc = write_output(opts, j.dump(2) + "\n");
    return rc != kOk ? rc : (pass ? kOk : kVerifyFail);
  }

  std::ostringstream out;
  out << "budget              " << format_sig4(budget) << " tokens\n"
      << "analytic objective  " << format_double(analytic_objective) << "\n"
      << "oracle objective    " << format_double(oracle.objective) << "\n"
      << "objective gap       " << format_double(gap) << " (tolerance "
      << format_double(tolerance) << ")\n";
  for (std::size_t i = 0; i < agents.size(); ++i) {
    out << "  " << agents[i].id << ": analytic " << format_sig4(analytic_tokens[i])
        << ", oracle " << format_sig4(oracle.tokens[i]) << ", gap "
        << format_sig4(std::fabs(analytic_tokens[i] - oracle.tokens[i])) << "\n";
  }
  out << (pass ? "PASS" : "FAIL") << "\n";
  const int rc = write_output(opts, out.str());
  return rc != kOk ? rc : (pass ? kOk : kVerifyFail);
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

int cmd_simulate(const CommonOpts& opts, std::int64_t samples, double confidence,
                 bool use_optimal) {
  auto loaded = load_config(opts.input);
  if (std::holds_alternative<int>(loaded)) return std::get<int>(loaded);
  auto& [config, raw_text] = std::get<LoadedConfig>(loaded);

  const Allocation allocation = resolve_allocation(config, use_optimal);

  SimConfig sim_config;
  sim_config.num_samples = samples;
  sim_config.seed = opts.seed;
  sim_config.confidence = confidence;
  sim_config.threads = opts.threads;
  const SimReport report = simulate(config.workflow, allocation, sim_config);

  const RunManifest manifest = make_manifest(
      "simulate", opts.input, raw_text,
      {{"format", opts.format},
       {"samples", std::to_string(samples)},
       {"seed", std::to_string(opts.seed)},
       {"confidence", format_double(confidence)},
       {"use_optimal", use_optimal ? "true" : "false"}});
  log_manifest(manifest);

  if (opts.format == "json") {
    ordered_json j;
    j["manifest"] = manifest.to_json();
    j["samples"] = report.samples;
    j["confidence"] = report.confidence;
    j["allocation"] = allocation_json(allocation);
    j["mean_latency"] = report.mean_latency;
    j["latency_half_width"] = report.latency_half_width;
    j["success_rate"] = report.success_rate;
    j["success_half_width"] = report.success_half_width;
    ordered_json per_agent = ordered_json::array();
    for (const AgentLatencyStat& stat : report.per_agent) {
      ordered_json a;
      a["id"] = stat.id;
      a["mean_latency"] = stat.mean_latency;
      per_agent.push_back(std::move(a));
    }
    j["per_agent"] = std::move(per_agent);
    return write_output(opts, j.dump(2) + "\n");
  }

  std::ostringstream out;
  out << "samples           " << report.samples << "\n"
      << "mean latency      " << format_sig4(report.mean_latency) << " s  +/- "
      << format_sig4(report.latency_half_width) << " ("
      << format_sig4(100.0 * report.confidence) << "% CI)\n"
      << "success rate      " << format_sig4(report.success_rate) << "  +/- "
      << format_sig4(report.success_half_width) << "\n"
      << "per-agent mean latency:\n";
  for (const AgentLatencyStat& stat : report.per_agent) {
    out << "  " << stat.id << ": " << format_sig4(stat.mean_latency) << " s\n";
  }
  return write_output(opts, out.str());
}

int dispatch(int argc, char** argv) {
  CLI::App app{"latency / reliability / cost modeling and output-token allocation "
               "for LLM-enabled agent workflows"};
  app.require_subcommand(1);
  app.footer(
      "Exit codes: 0 ok, 1 internal, 2 usage, 3 unreadable/malformed config,\n"
      "4 invalid config, 5 infeasible latency, 6 heterogeneous rate_gen,\n"
      "7 nothing to optimize, 8 oracle too large, 9 no convergence,\n"
      "10 verification gap exceeded");

  CommonOpts validate_opts;
  CLI::App* validate = app.add_subcommand("validate", "check a workflow definition file");
  add_common(validate, validate_opts, "table");

  CommonOpts evaluate_opts;
  bool evaluate_use_optimal = false;
  CLI::App* evaluate = app.add_subcommand("evaluate", "analytic metrics at an allocation");
  add_common(evaluate, evaluate_opts, "table");
  evaluate->add_flag("--use-optimal", evaluate_use_optimal,
                     "evaluate at the optimizer's allocation");

  CommonOpts optimize_opts;
  bool compare_baselines = false;
  bool floor_tokens = false;
  CLI::App* optimize = app.add_subcommand("optimize", "water-filling token allocation");
  add_common(optimize, optimize_opts, "table");
  optimize->add_flag("--compare-baselines", compare_baselines,
                     "also print uniform / proportional / inverse-proportional splits");
  optimize->add_flag("--floor-tokens", floor_tokens,
                     "add a floored-integer view (remainder left unassigned)");

  CommonOpts sweep_opts;
  std::vector<double> budget_list;
  std::string budget_range;
  CLI::App* sweep = app.add_subcommand("sweep", "reliability across token budgets");
  add_common(sweep, sweep_opts, "csv");
  sweep->add_option("--budgets", budget_list, "explicit token budgets")->delimiter(',');
  sweep->add_option("--budget-range", budget_range, "start:step:end token budgets");

  CommonOpts verify_opts;
  double grid_step = 1.0;
  int max_agents = 3;
  int refine = 0;
  double budget_override = 0.0;
  CLI::App* verify = app.add_subcommand("verify", "cross-check the solver against the "
                                                  "brute-force oracle");
  add_common(verify, verify_opts, "table");
  verify->add_option("--grid-step", grid_step, "oracle grid step in tokens")
      ->check(CLI::PositiveNumber);
  verify->add_option("--max-agents", max_agents, "exhaustive-mode agent cap");
  verify->add_option("--refine", refine, "coordinate-refinement rounds (0 = exhaustive)");
  verify->add_option("--budget", budget_override, "token budget override");

  CommonOpts simulate_opts;
  std::int64_t samples = 10000;
  double confidence = 0.95;
  bool simulate_use_optimal = false;
  CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo latency and success");
  add_common(simulate, simulate_opts, "table");
  simulate->add_option("--samples", samples, "number of Monte Carlo samples")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--confidence", confidence, "confidence level in (0,1)");
  simulate->add_flag("--use-optimal", simulate_use_optimal,
                     "simulate at the optimizer's allocation");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (app.got_subcommand(validate)) return cmd_validate(validate_opts);
    if (app.got_subcommand(evaluate)) return cmd_evaluate(evaluate_opts, evaluate_use_optimal);
    if (app.got_subcommand(optimize)) {
      return cmd_optimize(optimize_opts, compare_baselines, floor_tokens);
    }
    if (app.got_subcommand(sweep)) return cmd_sweep(sweep_opts, budget_list, budget_range);
    if (app.got_subcommand(verify)) {
      return cmd_verify(verify_opts, grid_step, max_agents, refine, budget_override);
    }
    if (app.got_subcommand(simulate)) {
      return cmd_simulate(simulate_opts, samples, confidence, simulate_use_optimal);
    }
    return kUsage;
  } catch (const InfeasibleLatency& e) {
    std::cerr << "error: " << e.what()
              << "\nhint: raise latency_budget, or reduce reasoning_tokens / infra delays\n";
    return kInfeasible;
  } catch (const HeterogeneousRates& e) {
    std::cerr << "error: " << e.what()
              << "\nhint: give every LLM agent the same rate_gen (or set a config default)\n";
    return kHeterogeneous;
  } catch (const NothingToOptimize& e) {
    std::cerr << "error: " << e.what()
              << "\nhint: the top-level sequence needs at least one LLM agent\n";
    return kNothing;
  } catch (const OracleTooLarge& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kTooLarge;
  } catch (const NoConvergence& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNoConverge;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
}

}  // namespace

int main(int argc, char** argv) { return dispatch(argc, argv); }
