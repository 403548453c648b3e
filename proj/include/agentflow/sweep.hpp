#pragma once

// Budget sweeps: workflow reliability of the water-filling allocation and the
// three baseline strategies over a list of token budgets. One flat CSV row
// per (budget, strategy) pair.

#include <atomic>
#include <cstdlib>
#include <optional>
#include <sstream>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "agentflow/allocation.hpp"
#include "agentflow/errors.hpp"
#include "agentflow/io.hpp"
#include "agentflow/workflow.hpp"

namespace agentflow {

inline constexpr const char* kSweepStrategies[] = {"water_filling", "uniform",
                                                   "proportional", "inverse_proportional"};
inline constexpr const char* kSweepCsvHeader =
    "budget,strategy,reliability,theta,latency,user_cost,compute_cost";

struct SweepRow {
  double budget = 0.0;
  std::string strategy;
  double reliability = 0.0;
  std::optional<double> theta;  // water-filling only
  double latency = 0.0;
  double user_cost = 0.0;
  double compute_cost = 0.0;
};

// Evaluates every strategy at every budget. Budgets are effective token
// budgets, applied to the LLM leaves reachable at the top level; rows come
// back grouped by budget in input order, strategies in kSweepStrategies
// order, regardless of the worker count.
inline std::vector<SweepRow> run_sweep(const WorkflowNode& workflow,
                                       const PricingModel& pricing,
                                       std::span<const double> budgets, int threads = 1) {
  validate_workflow(workflow);
  const std::vector<LlmAgentSpec> agents = optimizable_llm_agents(workflow);
  if (agents.empty()) {
    throw NothingToOptimize("sweep: no LLM agent is reachable at the top level");
  }
  for (double budget : budgets) {
    if (!(budget >= 0.0)) throw DomainError("sweep: budgets must be >= 0");
  }

  const Allocation zeros = zero_allocation(workflow);
  constexpr int kStrategiesPerBudget = 4;
  std::vector<SweepRow> rows(budgets.size() * kStrategiesPerBudget);

  const auto fill_point = [&](std::size_t point) {
    const double budget = budgets[point];
    const AllocationResult wf = water_filling(agents, budget);
    Allocation strategy_allocs[kStrategiesPerBudget] = {
        wf.allocation,
        baseline_uniform(agents, budget),
        baseline_proportional(agents, budget),
        baseline_inverse_proportional(agents, budget),
    };
    for (int s = 0; s < kStrategiesPerBudget; ++s) {
      Allocation full = zeros;
      for (const auto& [id, tokens] : strategy_allocs[s]) full[id] = tokens;
      const WorkflowMetrics metrics = evaluate(workflow, full, pricing);
      SweepRow& row = rows[point * kStrategiesPerBudget + static_cast<std::size_t>(s)];
      row.budget = budget;
      row.strategy = kSweepStrategies[s];
      row.reliability = metrics.reliability;
      if (s == 0) row.theta = wf.theta;
      row.latency = metrics.expected_latency;
      row.user_cost = metrics.user_cost;
      row.compute_cost = metrics.compute_cost;
    }
  };

  const int workers = static_cast<int>(
      std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), budgets.size()));
  if (workers <= 1) {
    for (std::size_t p = 0; p < budgets.size(); ++p) fill_point(p);
  } else {
    std::atomic<std::size_t> next{0};
    auto work = [&]() {
      for (;;) {
        const std::size_t p = next.fetch_add(1);
        if (p >= budgets.size()) break;
        fill_point(p);
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int t = 0; t < workers; ++t) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }
  return rows;
}

inline std::string write_sweep_csv(std::span<const SweepRow> rows) {
  std::string out = kSweepCsvHeader;
  out += '\n';
  for (const SweepRow& row : rows) {
    out += format_double(row.budget);
    out += ',';
    out += row.strategy;
    out += ',';
    out += format_double(row.reliability);
    out += ',';
    if (row.theta) out += format_double(*row.theta);
    out += ',';
    out += format_double(row.latency);
    out += ',';
    out += format_double(row.user_cost);
    out += ',';
    out += format_double(row.compute_cost);
    out += '\n';
  }
  return out;
}

// Parses what write_sweep_csv produced. Rejects unexpected headers.
inline std::vector<SweepRow> parse_sweep_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != kSweepCsvHeader) {
    throw ValidationError("sweep CSV: unexpected header");
  }
  std::vector<SweepRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
      if (i == line.size() || line[i] == ',') {
        fields.push_back(line.substr(start, i - start));
        start = i + 1;
      }
    }
    if (fields.size() != 7) throw ValidationError("sweep CSV: malformed row: " + line);
    SweepRow row;
    row.budget = std::strtod(fields[0].c_str(), nullptr);
    row.strategy = fields[1];
    row.reliability = std::strtod(fields[2].c_str(), nullptr);
    if (!fields[3].empty()) row.theta = std::strtod(fields[3].c_str(), nullptr);
    row.latency = std::strtod(fields[4].c_str(), nullptr);
    row.user_cost = std::strtod(fields[5].c_str(), nullptr);
    row.compute_cost = std::strtod(fields[6].c_str(), nullptr);
    rows.push_back(std::move(row));
  }
  return rows;
}

// Recomputes the named strategy's allocation at a row's budget (used by the
// CSV round-trip check and by consumers replaying sweep outputs).
inline Allocation sweep_allocation_for(const WorkflowNode& workflow,
                                       const std::string& strategy, double budget) {
  const std::vector<LlmAgentSpec> agents = optimizable_llm_agents(workflow);
  Allocation alloc;
  if (strategy == "water_filling") {
    alloc = water_filling(agents, budget).allocation;
  } else if (strategy == "uniform") {
    alloc = baseline_uniform(agents, budget);
  } else if (strategy == "proportional") {
    alloc = baseline_proportional(agents, budget);
  } else if (strategy == "inverse_proportional") {
    alloc = baseline_inverse_proportional(agents, budget);
  } else {
    throw ValidationError("unknown sweep strategy: " + strategy);
  }
  Allocation full = zero_allocation(workflow);
  for (const auto& [id, tokens] : alloc) full[id] = tokens;
  return full;
}

}  // namespace agentflow
