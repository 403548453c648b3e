#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "agentflow/errors.hpp"
#include "agentflow/math.hpp"
#include "agentflow/pricing.hpp"

namespace agentflow {

// Sampling distribution of an LLM agent's infrastructure delay. Only used by
// the Monte Carlo backend; the analytic formulas depend on the mean alone.
enum class DelayFamily { constant, exponential, lognormal };

struct InfraDelayDist {
  DelayFamily family = DelayFamily::constant;
  double mean = 0.0;   // seconds; must match the agent's mean_infra_delay
  double sigma = 0.0;  // log-scale stddev, lognormal only, > 0
};

inline const char* to_string(DelayFamily f) {
  switch (f) {
    case DelayFamily::constant: return "constant";
    case DelayFamily::exponential: return "exponential";
    case DelayFamily::lognormal: return "lognormal";
  }
  return "?";
}

// One invariant violation, keyed by the field it concerns so config
// diagnostics can point at the offending line.
struct FieldIssue {
  std::string field;
  std::string message;
};

// An agent whose response length is a tunable decision variable.
//
// alpha and beta are the reliability rates for reasoning and output tokens
// (units tokens^-1); reasoning_tokens is held fixed, the output length is
// chosen by the allocator.
struct LlmAgentSpec {
  std::string id;
  double alpha = 0.0;             // tokens^-1, > 0
  double beta = 0.0;              // tokens^-1, > 0
  double reasoning_tokens = 0.0;  // >= 0
  double mean_infra_delay = 0.0;  // seconds, >= 0
  std::optional<InfraDelayDist> infra_delay_dist;
  double rate_think = 0.0;  // tokens/second, > 0
  double rate_gen = 0.0;    // tokens/second, > 0

  std::vector<FieldIssue> issues() const {
    std::vector<FieldIssue> out;
    auto add = [&](const char* field, std::string msg) {
      out.push_back({field, std::move(msg)});
    };
    if (id.empty()) add("id", "agent id must be nonempty");
    if (!(alpha > 0.0)) add("alpha", "alpha must be > 0");
    if (!(beta > 0.0)) add("beta", "beta must be > 0");
    if (!(reasoning_tokens >= 0.0)) add("reasoning_tokens", "reasoning_tokens must be >= 0");
    if (!(mean_infra_delay >= 0.0)) add("mean_infra_delay", "mean_infra_delay must be >= 0");
    if (!(rate_think > 0.0)) add("rate_think", "rate_think must be > 0");
    if (!(rate_gen > 0.0)) add("rate_gen", "rate_gen must be > 0");
    if (infra_delay_dist) {
      const InfraDelayDist& d = *infra_delay_dist;
      if (d.family == DelayFamily::lognormal && !(d.sigma > 0.0)) {
        add("infra_delay_dist", "lognormal sigma must be > 0");
      }
      // The sampled distribution must agree with the analytic mean.
      const bool mean_ok = (mean_infra_delay == 0.0)
                               ? d.mean == 0.0
                               : detail::approx_rel(d.mean, mean_infra_delay, 1e-9);
      if (!mean_ok) {
        add("infra_delay_dist",
            "infra_delay_dist mean must equal mean_infra_delay within relative 1e-9");
      }
    }
    return out;
  }

  void validate() const {
    const auto v = issues();
    if (!v.empty()) throw ValidationError("agent \"" + id + "\": " + v.front().message);
  }
};

// An agent with fixed latency and reliability: a database lookup, a solver, a
// verification tool. Exactly one of mean_latency / service_rate is set; a
// service rate lambda means exponential service with mean 1/lambda.
struct NonLlmAgentSpec {
  std::string id;
  std::optional<double> mean_latency;  // seconds, >= 0
  std::optional<double> service_rate;  // 1/seconds, > 0
  double reliability = 0.0;            // in [0, 1]

  double expected_latency() const {
    if (mean_latency) return *mean_latency;
    return 1.0 / *service_rate;
  }

  std::vector<FieldIssue> issues() const {
    std::vector<FieldIssue> out;
    auto add = [&](const char* field, std::string msg) {
      out.push_back({field, std::move(msg)});
    };
    if (id.empty()) add("id", "agent id must be nonempty");
    if (mean_latency.has_value() == service_rate.has_value()) {
      add("latency_model", "latency_model must set exactly one of mean_latency, service_rate");
    }
    if (mean_latency && !(*mean_latency >= 0.0)) {
      add("latency_model", "mean_latency must be >= 0");
    }
    if (service_rate && !(*service_rate > 0.0)) {
      add("latency_model", "service_rate must be > 0");
    }
    if (!(reliability >= 0.0 && reliability <= 1.0)) {
      add("reliability", "reliability must be in [0, 1]");
    }
    return out;
  }

  void validate() const {
    const auto v = issues();
    if (!v.empty()) throw ValidationError("agent \"" + id + "\": " + v.front().message);
  }
};

// Mean latency of an LLM agent at output length L:
//   mean_infra_delay + reasoning_tokens/rate_think + L/rate_gen.
inline double agent_mean_latency(const LlmAgentSpec& agent, double output_tokens) {
  if (!(output_tokens >= 0.0)) {
    throw DomainError("agent_mean_latency: output tokens must be >= 0");
  }
  return agent.mean_infra_delay + agent.reasoning_tokens / agent.rate_think +
         output_tokens / agent.rate_gen;
}

// Probability the agent's output is acceptable:
//   (1 - e^{-alpha*X}) * (1 - e^{-beta*L}).
// Strictly increasing in L when X > 0; always in [0, 1) for finite inputs.
inline double agent_reliability(const LlmAgentSpec& agent, double output_tokens) {
  if (!(output_tokens >= 0.0)) {
    throw DomainError("agent_reliability: output tokens must be >= 0");
  }
  const double reasoning = detail::one_minus_exp_neg(agent.alpha * agent.reasoning_tokens);
  const double output = detail::one_minus_exp_neg(agent.beta * output_tokens);
  return reasoning * output;
}

struct AgentCosts {
  double user_cost = 0.0;     // c_tok * L
  double compute_cost = 0.0;  // c_comp * (X + L)
};

inline AgentCosts agent_costs(const LlmAgentSpec& agent, double output_tokens,
                              const PricingModel& pricing) {
  if (!(output_tokens >= 0.0)) {
    throw DomainError("agent_costs: output tokens must be >= 0");
  }
  return {pricing.c_tok * output_tokens,
          pricing.c_comp * (agent.reasoning_tokens + output_tokens)};
}

}  // namespace agentflow
