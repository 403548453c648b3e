#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "agentflow/agents.hpp"
#include "agentflow/errors.hpp"
#include "agentflow/pricing.hpp"

namespace agentflow {

using AgentSpec = std::variant<LlmAgentSpec, NonLlmAgentSpec>;

inline const std::string& agent_id(const AgentSpec& a) {
  return std::visit([](const auto& s) -> const std::string& { return s.id; }, a);
}

enum class ParallelMode { conjunctive, redundant };

inline const char* to_string(ParallelMode m) {
  return m == ParallelMode::conjunctive ? "conjunctive" : "redundant";
}

// Recursive composition tree. Nodes are immutable values; Feedback shares its
// body through a const pointer so copies stay cheap.
struct WorkflowNode;

struct Leaf {
  AgentSpec agent;
};

struct Sequential {
  std::vector<WorkflowNode> children;  // ordered, nonempty
};

struct Parallel {
  std::vector<WorkflowNode> children;  // nonempty
  ParallelMode mode = ParallelMode::conjunctive;
};

struct Feedback {
  std::shared_ptr<const WorkflowNode> body;
  int iterations = 1;  // K >= 1
};

struct WorkflowNode {
  std::variant<Leaf, Sequential, Parallel, Feedback> value;
};

inline WorkflowNode make_leaf(AgentSpec agent) { return {Leaf{std::move(agent)}}; }

inline WorkflowNode make_sequential(std::vector<WorkflowNode> children) {
  return {Sequential{std::move(children)}};
}

inline WorkflowNode make_parallel(std::vector<WorkflowNode> children, ParallelMode mode) {
  return {Parallel{std::move(children), mode}};
}

inline WorkflowNode make_feedback(WorkflowNode body, int iterations) {
  return {Feedback{std::make_shared<const WorkflowNode>(std::move(body)), iterations}};
}

// Output-token allocation, keyed by LLM agent id. Values are real-valued
// token counts >= 0; integer rounding is a presentation concern.
using Allocation = std::map<std::string, double>;

struct WorkflowMetrics {
  double expected_latency = 0.0;  // seconds
  double reliability = 0.0;       // [0, 1]
  double user_cost = 0.0;         // currency
  double compute_cost = 0.0;      // currency
};

// ---------------------------------------------------------------------------
// Tree traversal helpers
// ---------------------------------------------------------------------------

template <typename Fn>
void for_each_leaf(const WorkflowNode& node, Fn&& fn) {
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Leaf>) {
          fn(v);
        } else if constexpr (std::is_same_v<T, Feedback>) {
          for_each_leaf(*v.body, fn);
        } else {
          for (const WorkflowNode& child : v.children) for_each_leaf(child, fn);
        }
      },
      node.value);
}

// Every LLM agent anywhere in the tree, in traversal order.
inline std::vector<LlmAgentSpec> llm_agents(const WorkflowNode& node) {
  std::vector<LlmAgentSpec> out;
  for_each_leaf(node, [&](const Leaf& leaf) {
    if (const auto* llm = std::get_if<LlmAgentSpec>(&leaf.agent)) out.push_back(*llm);
  });
  return out;
}

// LLM leaves reachable from the root through Sequential nodes only. These are
// the decision variables of the optimizer; LLM agents buried inside parallel
// or feedback blocks are folded into fixed contributions instead.
inline std::vector<LlmAgentSpec> optimizable_llm_agents(const WorkflowNode& node) {
  std::vector<LlmAgentSpec> out;
  auto walk = [&](auto&& self, const WorkflowNode& n) -> void {
    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, Leaf>) {
            if (const auto* llm = std::get_if<LlmAgentSpec>(&v.agent)) out.push_back(*llm);
          } else if constexpr (std::is_same_v<T, Sequential>) {
            for (const WorkflowNode& child : v.children) self(self, child);
          }
          // Parallel and Feedback subtrees are composite modules.
        },
        n.value);
  };
  walk(walk, node);
  return out;
}

inline Allocation zero_allocation(const WorkflowNode& node) {
  Allocation out;
  for (const LlmAgentSpec& a : llm_agents(node)) out[a.id] = 0.0;
  return out;
}

// Structural check: distinct agent ids, nonempty child lists, K >= 1, and
// per-agent invariants. Throws ValidationError on the first violation.
inline void validate_workflow(const WorkflowNode& node) {
  std::set<std::string> seen;
  auto walk = [&](auto&& self, const WorkflowNode& n) -> void {
    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, Leaf>) {
            std::visit([](const auto& spec) { spec.validate(); }, v.agent);
            if (!seen.insert(agent_id(v.agent)).second) {
              throw ValidationError("duplicate agent id in workflow: \"" +
                                    agent_id(v.agent) + "\"");
            }
          } else if constexpr (std::is_same_v<T, Feedback>) {
            if (v.iterations < 1) throw ValidationError("feedback iterations must be >= 1");
            if (!v.body) throw ValidationError("feedback body must be present");
            self(self, *v.body);
          } else {
            if (v.children.empty()) {
              throw ValidationError(std::is_same_v<T, Sequential>
                                        ? "sequential node must have children"
                                        : "parallel node must have children");
            }
            for (const WorkflowNode& child : v.children) self(self, child);
          }
        },
        n.value);
  };
  walk(walk, node);
}

// ---------------------------------------------------------------------------
// Analytic evaluation
// ---------------------------------------------------------------------------

namespace detail {

// Costs are linear in the prices, so the recursion carries feedback-weighted
// token totals and the prices are applied once at the end.
struct EvalCore {
  double latency = 0.0;
  double reliability = 1.0;
  double output_tokens = 0.0;  // sum of L, weighted by loop repetitions
  double total_tokens = 0.0;   // sum of X + L, weighted likewise
};

inline EvalCore eval_core(const WorkflowNode& node, const Allocation& allocation) {
  return std::visit(
      [&](const auto& v) -> EvalCore {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Leaf>) {
          if (const auto* llm = std::get_if<LlmAgentSpec>(&v.agent)) {
            const auto it = allocation.find(llm->id);
            if (it == allocation.end()) {
              throw ValidationError("allocation missing entry for agent \"" + llm->id + "\"");
            }
            const double tokens = it->second;
            return {agent_mean_latency(*llm, tokens), agent_reliability(*llm, tokens),
                    tokens, llm->reasoning_tokens + tokens};
          }
          const auto& fixed = std::get<NonLlmAgentSpec>(v.agent);
          return {fixed.expected_latency(), fixed.reliability, 0.0, 0.0};
        } else if constexpr (std::is_same_v<T, Sequential>) {
          EvalCore acc;
          for (const WorkflowNode& child : v.children) {
            const EvalCore c = eval_core(child, allocation);
            acc.latency += c.latency;
            acc.reliability *= c.reliability;
            acc.output_tokens += c.output_tokens;
            acc.total_tokens += c.total_tokens;
          }
          return acc;
        } else if constexpr (std::is_same_v<T, Parallel>) {
          // Analytic latency is the max of the children's expected latencies,
          // a lower bound on E[max]; the Monte Carlo backend estimates the
          // true value.
          EvalCore acc;
          acc.latency = 0.0;
          double fail_all = 1.0;
          for (const WorkflowNode& child : v.children) {
            const EvalCore c = eval_core(child, allocation);
            acc.latency = std::max(acc.latency, c.latency);
            acc.reliability *= c.reliability;
            fail_all *= 1.0 - c.reliability;
            acc.output_tokens += c.output_tokens;
            acc.total_tokens += c.total_tokens;
          }
          if (v.mode == ParallelMode::redundant) acc.reliability = 1.0 - fail_all;
          return acc;
        } else {
          // Feedback: accumulate with K explicit steps so the result is
          // bit-identical to a Sequential of K body copies.
          const EvalCore body = eval_core(*v.body, allocation);
          EvalCore acc;
          for (int k = 0; k < v.iterations; ++k) {
            acc.latency += body.latency;
            acc.reliability *= body.reliability;
            acc.output_tokens += body.output_tokens;
            acc.total_tokens += body.total_tokens;
          }
          return acc;
        }
      },
      node.value);
}

}  // namespace detail

// Expected latency, reliability, and both cost notions at a given allocation.
// The allocation must cover every LLM agent in the tree and contain no
// unknown ids; values must be >= 0.
inline WorkflowMetrics evaluate(const WorkflowNode& workflow, const Allocation& allocation,
                                const PricingModel& pricing) {
  std::set<std::string> known;
  for (const LlmAgentSpec& a : llm_agents(workflow)) known.insert(a.id);
  for (const auto& [id, tokens] : allocation) {
    if (!known.count(id)) {
      throw ValidationError("allocation references unknown LLM agent \"" + id + "\"");
    }
    if (!(tokens >= 0.0)) {
      throw DomainError("allocation for agent \"" + id + "\" must be >= 0");
    }
  }
  const detail::EvalCore core = detail::eval_core(workflow, allocation);
  return {core.latency, core.reliability, pricing.c_tok * core.output_tokens,
          pricing.c_comp * core.total_tokens};
}

// Workflow latency that does not depend on the response lengths: non-LLM
// latencies plus LLM infra delays and reasoning times. Equals the evaluated
// latency at the all-zeros allocation. A non-Sequential root is treated as a
// singleton sequential composition.
inline double fixed_latency(const WorkflowNode& workflow) {
  return detail::eval_core(workflow, zero_allocation(workflow)).latency;
}

}  // namespace agentflow
