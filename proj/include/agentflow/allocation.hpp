#pragma once

// Output-token allocation under joint latency and cost budgets.
//
// The two budget constraints collapse into a single effective token budget
// B = min(rate_gen * (T - T_fixed), C / c_tok). Maximizing the product of the
// agents' output-reliability factors subject to sum(L_j) <= B is a strictly
// concave problem whose unique optimum is the water-filling rule
//
//     L*_j = (1/beta_j) * log(1 + beta_j / theta),
//
// with theta > 0 chosen so the budget is exactly spent. theta is the shadow
// price of the budget: every agent's marginal gain in log reliability per
// token equals theta at the optimum.
//
// The solver bisects on log(theta) so that instances with beta*B in the
// hundreds (where theta underflows a double) still solve cleanly.

#include <cassert>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "agentflow/errors.hpp"
#include "agentflow/math.hpp"
#include "agentflow/workflow.hpp"

namespace agentflow {

struct BudgetSpec {
  double latency_budget = 0.0;  // T, seconds, > 0
  double cost_budget = 0.0;     // C, currency, > 0

  void validate() const {
    if (!(latency_budget > 0.0)) throw ValidationError("budgets: latency_budget must be > 0");
    if (!(cost_budget > 0.0)) throw ValidationError("budgets: cost_budget must be > 0");
  }
};

// Which side of min{rate_gen*B_T, C/c_tok} produced the effective budget.
enum class Binding { latency, cost, tie };

inline const char* to_string(Binding b) {
  switch (b) {
    case Binding::latency: return "latency";
    case Binding::cost: return "cost";
    case Binding::tie: return "tie";
  }
  return "?";
}

struct EffectiveBudget {
  double tokens = 0.0;              // B
  Binding binding = Binding::tie;
  double generation_seconds = 0.0;  // B_T = T - T_fixed
};

struct ThetaSolution {
  double theta = 0.0;
  double log_theta = 0.0;
  int iterations = 0;
  double residual = 0.0;  // |sum L_j(theta) - B|
};

struct AllocationResult {
  Allocation allocation;
  double theta = 0.0;      // +inf sentinel when the budget is zero
  double log_theta = 0.0;
  double effective_budget = 0.0;
  std::optional<Binding> binding;            // set when derived from a BudgetSpec
  std::optional<WorkflowMetrics> predicted;  // set by optimize(); LLM-only view otherwise
};

namespace detail {

// sum_j softplus(log beta_j - t) / beta_j, i.e. sum of L_j at theta = e^t.
inline double budget_spent_at_log_theta(std::span<const double> betas, double t) {
  double total = 0.0;
  for (double beta : betas) total += softplus(std::log(beta) - t) / beta;
  return total;
}

}  // namespace detail

// Unique theta > 0 with sum_j (1/beta_j) log(1 + beta_j/theta) = B.
// The left side is continuous and strictly decreasing in theta, so bisection
// on log(theta) converges once a sign change is bracketed. Stops when the
// budget residual is <= 1e-9 * B; throws NoConvergence after 200 bisection
// steps.
inline ThetaSolution solve_theta(std::span<const double> betas, double budget_tokens) {
  if (betas.empty()) throw DomainError("solve_theta: beta list must be nonempty");
  if (!(budget_tokens > 0.0)) throw DomainError("solve_theta: budget must be > 0");
  for (double beta : betas) {
    if (!(beta > 0.0)) throw DomainError("solve_theta: every beta must be > 0");
  }

  double beta_min = betas.front(), beta_max = betas.front();
  for (double beta : betas) {
    beta_min = std::min(beta_min, beta);
    beta_max = std::max(beta_max, beta);
  }

  const double tol = 1e-9 * budget_tokens;
  const auto spent = [&](double t) { return detail::budget_spent_at_log_theta(betas, t); };

  // theta_lo = beta_min * e^{-beta_max * B} is strictly below the root;
  // the upper end starts at the symmetric single-rate estimate. Both are
  // widened geometrically until the bracket is confirmed.
  double lo = std::log(beta_min) - beta_max * budget_tokens - 1.0;
  double hi = std::log(beta_max) -
              detail::logexpm1(beta_min * budget_tokens / static_cast<double>(betas.size())) +
              1.0;
  if (hi <= lo) hi = lo + 1.0;
  for (int i = 0; i < 200 && spent(lo) <= budget_tokens; ++i) lo -= std::max(1.0, hi - lo);
  for (int i = 0; i < 200 && spent(hi) >= budget_tokens; ++i) hi += std::max(1.0, hi - lo);
  if (!(spent(lo) > budget_tokens && spent(hi) < budget_tokens)) {
    throw NoConvergence("solve_theta: failed to bracket the shadow price");
  }

  ThetaSolution sol;
  for (int iter = 1; iter <= 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double s = spent(mid);
    sol.iterations = iter;
    if (std::fabs(s - budget_tokens) <= tol) {
      sol.log_theta = mid;
      sol.theta = std::exp(mid);
      sol.residual = std::fabs(s - budget_tokens);
      return sol;
    }
    if (s > budget_tokens) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  throw NoConvergence("solve_theta: budget residual did not reach 1e-9*B in 200 iterations");
}

// Closed-form optimal reliability, restricted to the LLM factors:
// prod_j (1 - e^{-alpha_j X_j}) * beta_j / (beta_j + theta), evaluated from
// log(theta) so instances where theta underflows a double stay exact. The
// ratio is beta/(beta+theta) = sigmoid(log beta - log theta).
inline double optimal_reliability_closed_form_log(std::span<const LlmAgentSpec> agents,
                                                  double log_theta) {
  double product = 1.0;
  for (const LlmAgentSpec& agent : agents) {
    const double reasoning = detail::one_minus_exp_neg(agent.alpha * agent.reasoning_tokens);
    const double s = std::log(agent.beta) - log_theta;
    const double output =
        s >= 0.0 ? 1.0 / (1.0 + std::exp(-s)) : std::exp(s) / (1.0 + std::exp(s));
    product *= reasoning * output;
  }
  return product;
}

inline double optimal_reliability_closed_form(std::span<const LlmAgentSpec> agents,
                                              double theta) {
  if (!(theta > 0.0)) throw DomainError("optimal_reliability_closed_form: theta must be > 0");
  return optimal_reliability_closed_form_log(agents, std::log(theta));
}

// Water-filling allocation of a token budget across LLM agents.
//
// budget == 0 is a valid degenerate case: all-zero allocation, theta = +inf,
// predicted reliability 0. For budget > 0 every L*_j is strictly positive
// (log(1 + beta/theta) > 0 whenever theta is finite), so the nonnegativity
// clamp of the rule never activates.
//
// The predicted metrics cover the given agents only; costs are zero unless a
// pricing model is supplied. optimize() replaces them with full-workflow
// metrics.
inline AllocationResult water_filling(std::span<const LlmAgentSpec> agents,
                                      double budget_tokens,
                                      const PricingModel* pricing = nullptr) {
  if (agents.empty()) throw DomainError("water_filling: agent list must be nonempty");
  if (!(budget_tokens >= 0.0)) throw DomainError("water_filling: budget must be >= 0");

  AllocationResult result;
  result.effective_budget = budget_tokens;

  std::vector<double> tokens(agents.size(), 0.0);
  if (budget_tokens == 0.0) {
    result.theta = detail::kInf;
    result.log_theta = detail::kInf;
  } else {
    std::vector<double> betas;
    betas.reserve(agents.size());
    for (const LlmAgentSpec& agent : agents) betas.push_back(agent.beta);
    const ThetaSolution sol = solve_theta(betas, budget_tokens);
    result.theta = sol.theta;
    result.log_theta = sol.log_theta;
    for (std::size_t j = 0; j < agents.size(); ++j) {
      tokens[j] = detail::softplus(std::log(betas[j]) - sol.log_theta) / betas[j];
      assert(tokens[j] > 0.0);  // clamp dormancy
    }
  }

  WorkflowMetrics predicted;
  predicted.reliability = 1.0;
  for (std::size_t j = 0; j < agents.size(); ++j) {
    result.allocation[agents[j].id] = tokens[j];
    predicted.expected_latency += agent_mean_latency(agents[j], tokens[j]);
    predicted.reliability *= agent_reliability(agents[j], tokens[j]);
    if (pricing) {
      const AgentCosts costs = agent_costs(agents[j], tokens[j], *pricing);
      predicted.user_cost += costs.user_cost;
      predicted.compute_cost += costs.compute_cost;
    }
  }
  result.predicted = predicted;
  return result;
}

// ---------------------------------------------------------------------------
// Baseline allocators
// ---------------------------------------------------------------------------

namespace detail {

// Splits the budget by nonnegative weights; the last share absorbs the
// rounding remainder so the sum equals the budget exactly.
inline Allocation split_by_weight(std::span<const LlmAgentSpec> agents,
                                  std::span<const double> weights, double budget) {
  double weight_total = 0.0;
  for (double w : weights) weight_total += w;
  Allocation out;
  double assigned = 0.0;
  for (std::size_t j = 0; j < agents.size(); ++j) {
    double share = (j + 1 == agents.size()) ? budget - assigned
                                            : budget * (weights[j] / weight_total);
    if (share < 0.0) share = 0.0;
    out[agents[j].id] = share;
    assigned += share;
  }
  return out;
}

inline void check_baseline_args(std::span<const LlmAgentSpec> agents, double budget) {
  if (agents.empty()) throw DomainError("baseline: agent list must be nonempty");
  if (!(budget >= 0.0)) throw DomainError("baseline: budget must be >= 0");
}

}  // namespace detail

// Equal tokens to all agents.
inline Allocation baseline_uniform(std::span<const LlmAgentSpec> agents, double budget) {
  detail::check_baseline_args(agents, budget);
  std::vector<double> weights(agents.size(), 1.0);
  return detail::split_by_weight(agents, weights, budget);
}

// Tokens proportional to beta_j.
inline Allocation baseline_proportional(std::span<const LlmAgentSpec> agents, double budget) {
  detail::check_baseline_args(agents, budget);
  std::vector<double> weights;
  weights.reserve(agents.size());
  for (const LlmAgentSpec& agent : agents) weights.push_back(agent.beta);
  return detail::split_by_weight(agents, weights, budget);
}

// Tokens proportional to 1/beta_j.
inline Allocation baseline_inverse_proportional(std::span<const LlmAgentSpec> agents,
                                                double budget) {
  detail::check_baseline_args(agents, budget);
  std::vector<double> weights;
  weights.reserve(agents.size());
  for (const LlmAgentSpec& agent : agents) weights.push_back(1.0 / agent.beta);
  return detail::split_by_weight(agents, weights, budget);
}

// ---------------------------------------------------------------------------
// Budget reduction and end-to-end optimization
// ---------------------------------------------------------------------------

// Effective token budget B = min(rate_gen * (T - T_fixed), C / c_tok).
//
// The LLM agents must share a common generation rate; the reduction to a
// single token budget is undefined for heterogeneous rates. Throws
// InfeasibleLatency when T <= T_fixed.
inline EffectiveBudget effective_budget(const WorkflowNode& workflow, const BudgetSpec& budgets,
                                        const PricingModel& pricing) {
  budgets.validate();
  pricing.validate();

  const std::vector<LlmAgentSpec> all_llm = llm_agents(workflow);
  if (all_llm.empty()) {
    throw NothingToOptimize("effective_budget: workflow has no LLM agents");
  }
  const double rate_gen = all_llm.front().rate_gen;
  for (const LlmAgentSpec& agent : all_llm) {
    if (agent.rate_gen != rate_gen) {
      throw HeterogeneousRates("effective_budget: LLM agents have differing rate_gen (\"" +
                               all_llm.front().id + "\" has " +
                               std::to_string(rate_gen) + ", \"" + agent.id + "\" has " +
                               std::to_string(agent.rate_gen) + ")");
    }
  }

  const double t_fixed = fixed_latency(workflow);
  const double generation_seconds = budgets.latency_budget - t_fixed;
  if (!(generation_seconds > 0.0)) {
    throw InfeasibleLatency("effective_budget: fixed latency " + std::to_string(t_fixed) +
                            " s meets or exceeds the latency budget " +
                            std::to_string(budgets.latency_budget) + " s");
  }

  const double latency_tokens = rate_gen * generation_seconds;
  const double cost_tokens = budgets.cost_budget / pricing.c_tok;

  EffectiveBudget out;
  out.generation_seconds = generation_seconds;
  if (detail::approx_rel(latency_tokens, cost_tokens, 1e-12)) {
    out.binding = Binding::tie;
    out.tokens = std::min(latency_tokens, cost_tokens);
  } else if (latency_tokens < cost_tokens) {
    out.binding = Binding::latency;
    out.tokens = latency_tokens;
  } else {
    out.binding = Binding::cost;
    out.tokens = cost_tokens;
  }
  return out;
}

// Full pipeline: fixed latency -> effective budget -> water filling.
//
// Decision variables are the LLM leaves reachable through Sequential nodes
// from the root; LLM agents inside parallel/feedback blocks are held at zero
// tokens and fold into the fixed latency and reliability. The returned
// allocation covers every LLM agent in the tree (zeros for the folded ones)
// and the predicted metrics are a full-workflow evaluation at L*.
inline AllocationResult optimize(const WorkflowNode& workflow, const BudgetSpec& budgets,
                                 const PricingModel& pricing) {
  validate_workflow(workflow);

  const std::vector<LlmAgentSpec> agents = optimizable_llm_agents(workflow);
  if (agents.empty()) {
    throw NothingToOptimize("optimize: no LLM agent is reachable at the top level");
  }

  const EffectiveBudget budget = effective_budget(workflow, budgets, pricing);
  AllocationResult result = water_filling(agents, budget.tokens, &pricing);
  result.binding = budget.binding;

  Allocation full = zero_allocation(workflow);
  for (const auto& [id, tokens] : result.allocation) full[id] = tokens;
  result.allocation = std::move(full);
  result.predicted = evaluate(workflow, result.allocation, pricing);
  return result;
}

}  // namespace agentflow
