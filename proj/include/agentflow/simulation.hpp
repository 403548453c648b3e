#pragma once

// Monte Carlo estimation of workflow latency and success. Randomness comes
// from a counter-based generator keyed by (seed, sample, agent stream, draw),
// so results are bit-identical for any worker count: a sample's draws depend
// only on its index, and partial sums are merged in fixed chunk order.

#include <atomic>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <set>
#include <string>
#include <thread>
#include <unordered_map>
#include <variant>
#include <vector>

#include "agentflow/errors.hpp"
#include "agentflow/math.hpp"
#include "agentflow/workflow.hpp"

namespace agentflow {

struct SimConfig {
  std::int64_t num_samples = 10000;  // >= 1
  std::uint64_t seed = 0;
  double confidence = 0.95;  // level for the reported intervals, in (0, 1)
  int threads = 1;           // worker count; has no effect on the results

  void validate() const {
    if (num_samples < 1) throw DomainError("simulate: num_samples must be >= 1");
    if (!(confidence > 0.0 && confidence < 1.0)) {
      throw DomainError("simulate: confidence must be in (0, 1)");
    }
    if (threads < 1) throw DomainError("simulate: threads must be >= 1");
  }
};

struct AgentLatencyStat {
  std::string id;
  double mean_latency = 0.0;  // per sample, summed over loop invocations
};

// Interval half-widths use the normal approximation; they are inaccurate
// below roughly 100 samples.
struct SimReport {
  double mean_latency = 0.0;
  double latency_half_width = 0.0;
  double success_rate = 0.0;
  double success_half_width = 0.0;
  std::vector<AgentLatencyStat> per_agent;  // traversal order
  std::int64_t samples = 0;
  double confidence = 0.95;
};

namespace detail {

inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Uniform double in [0, 1) for one (seed, sample, stream, draw) key.
inline double uniform01(std::uint64_t seed, std::uint64_t sample, std::uint64_t stream,
                        std::uint64_t draw) {
  std::uint64_t h = mix64(seed ^ 0x243f6a8885a308d3ull);
  h = mix64(h ^ sample);
  h = mix64(h ^ (stream * 0x100000001b3ull));
  h = mix64(h ^ (draw * 0xc2b2ae3d27d4eb4full));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

struct LeafPlan {
  bool is_llm = false;
  DelayFamily family = DelayFamily::constant;
  double delay_mean = 0.0;       // infra delay (LLM) or service time (non-LLM)
  double lognormal_mu = 0.0;     // log-scale location, precomputed
  double lognormal_sigma = 0.0;
  double deterministic_part = 0.0;  // X/rate_think + L/rate_gen
  double success_prob = 0.0;
};

struct SampleScratch {
  std::vector<std::uint32_t> draw_counts;   // per stream, reset each sample
  std::vector<double> agent_latency;        // per stream, reset each sample
};

class Sampler {
 public:
  Sampler(const WorkflowNode& workflow, const Allocation& allocation, std::uint64_t seed)
      : seed_(seed) {
    std::set<std::string> known;
    for_each_leaf(workflow, [&](const Leaf& leaf) {
      if (const auto* llm = std::get_if<LlmAgentSpec>(&leaf.agent)) known.insert(llm->id);
    });
    for (const auto& [id, tokens] : allocation) {
      if (!known.count(id)) {
        throw ValidationError("allocation references unknown LLM agent \"" + id + "\"");
      }
      if (!(tokens >= 0.0)) {
        throw DomainError("allocation for agent \"" + id + "\" must be >= 0");
      }
    }

    for_each_leaf(workflow, [&](const Leaf& leaf) {
      LeafPlan plan;
      if (const auto* llm = std::get_if<LlmAgentSpec>(&leaf.agent)) {
        const auto it = allocation.find(llm->id);
        if (it == allocation.end()) {
          throw ValidationError("allocation missing entry for agent \"" + llm->id + "\"");
        }
        plan.is_llm = true;
        plan.family =
            llm->infra_delay_dist ? llm->infra_delay_dist->family : DelayFamily::constant;
        plan.delay_mean = llm->mean_infra_delay;
        if (plan.family == DelayFamily::lognormal && plan.delay_mean > 0.0) {
          plan.lognormal_sigma = llm->infra_delay_dist->sigma;
          plan.lognormal_mu =
              std::log(plan.delay_mean) - 0.5 * plan.lognormal_sigma * plan.lognormal_sigma;
        }
        plan.deterministic_part = llm->reasoning_tokens / llm->rate_think +
                                  it->second / llm->rate_gen;
        plan.success_prob = agent_reliability(*llm, it->second);
      } else {
        const auto& fixed = std::get<NonLlmAgentSpec>(leaf.agent);
        plan.family =
            fixed.service_rate ? DelayFamily::exponential : DelayFamily::constant;
        plan.delay_mean = fixed.expected_latency();
        plan.success_prob = fixed.reliability;
      }
      stream_of_[&leaf] = plans_.size();
      ids_.push_back(agent_id(leaf.agent));
      plans_.push_back(plan);
    });
  }

  std::size_t stream_count() const { return plans_.size(); }
  const std::vector<std::string>& ids() const { return ids_; }

  // Latency and success of one end-to-end sample. Failures do not
  // short-circuit: every agent's latency is drawn and accumulated.
  std::pair<double, bool> run(const WorkflowNode& node, std::uint64_t sample,
                              SampleScratch& scratch) const {
    return std::visit(
        [&](const auto& v) -> std::pair<double, bool> {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, Leaf>) {
            const std::size_t stream = stream_of_.at(&v);
            const LeafPlan& plan = plans_[stream];
            const double delay = draw_delay(plan, sample, stream, scratch);
            const double latency = delay + plan.deterministic_part;
            const double u = next_uniform(sample, stream, scratch);
            scratch.agent_latency[stream] += latency;
            return {latency, u < plan.success_prob};
          } else if constexpr (std::is_same_v<T, Sequential>) {
            double latency = 0.0;
            bool success = true;
            for (const WorkflowNode& child : v.children) {
              const auto [l, s] = run(child, sample, scratch);
              latency += l;
              success = success && s;
            }
            return {latency, success};
          } else if constexpr (std::is_same_v<T, Parallel>) {
            double latency = 0.0;
            bool all = true, any = false;
            for (const WorkflowNode& child : v.children) {
              const auto [l, s] = run(child, sample, scratch);
              latency = std::max(latency, l);
              all = all && s;
              any = any || s;
            }
            return {latency, v.mode == ParallelMode::conjunctive ? all : any};
          } else {
            double latency = 0.0;
            bool success = true;
            for (int k = 0; k < v.iterations; ++k) {
              const auto [l, s] = run(*v.body, sample, scratch);
              latency += l;
              success = success && s;
            }
            return {latency, success};
          }
        },
        node.value);
  }

 private:
  double next_uniform(std::uint64_t sample, std::size_t stream, SampleScratch& scratch) const {
    const std::uint32_t draw = scratch.draw_counts[stream]++;
    return uniform01(seed_, sample, stream, draw);
  }

  double draw_delay(const LeafPlan& plan, std::uint64_t sample, std::size_t stream,
                    SampleScratch& scratch) const {
    if (plan.delay_mean <= 0.0) return 0.0;
    switch (plan.family) {
      case DelayFamily::constant:
        return plan.delay_mean;
      case DelayFamily::exponential:
        return -plan.delay_mean * std::log1p(-next_uniform(sample, stream, scratch));
      case DelayFamily::lognormal: {
        const double u1 = next_uniform(sample, stream, scratch);
        const double u2 = next_uniform(sample, stream, scratch);
        const double z = std::sqrt(-2.0 * std::log1p(-u1)) *
                         std::cos(2.0 * std::numbers::pi * u2);
        return std::exp(plan.lognormal_mu + plan.lognormal_sigma * z);
      }
    }
    return plan.delay_mean;
  }

  std::uint64_t seed_;
  std::vector<LeafPlan> plans_;
  std::vector<std::string> ids_;
  std::unordered_map<const Leaf*, std::size_t> stream_of_;
};

struct ChunkAccum {
  double latency_sum = 0.0;
  double latency_sq_sum = 0.0;
  std::int64_t successes = 0;
  std::vector<double> agent_latency_sum;
};

}  // namespace detail

// Runs num_samples end-to-end draws of the workflow and reports sample means
// with normal-approximation confidence intervals. Identical inputs produce
// bit-identical reports for any thread count.
inline SimReport simulate(const WorkflowNode& workflow, const Allocation& allocation,
                          const SimConfig& config) {
  config.validate();
  const detail::Sampler sampler(workflow, allocation, config.seed);
  const std::size_t streams = sampler.stream_count();

  constexpr std::int64_t kChunk = 8192;
  const std::int64_t num_chunks = (config.num_samples + kChunk - 1) / kChunk;
  std::vector<detail::ChunkAccum> chunks(static_cast<std::size_t>(num_chunks));

  std::atomic<std::int64_t> next_chunk{0};
  const auto worker = [&]() {
    detail::SampleScratch scratch;
    scratch.draw_counts.resize(streams);
    scratch.agent_latency.resize(streams);
    for (;;) {
      const std::int64_t chunk = next_chunk.fetch_add(1);
      if (chunk >= num_chunks) break;
      detail::ChunkAccum acc;
      acc.agent_latency_sum.assign(streams, 0.0);
      const std::int64_t begin = chunk * kChunk;
      const std::int64_t end = std::min(config.num_samples, begin + kChunk);
      for (std::int64_t sample = begin; sample < end; ++sample) {
        std::fill(scratch.draw_counts.begin(), scratch.draw_counts.end(), 0u);
        std::fill(scratch.agent_latency.begin(), scratch.agent_latency.end(), 0.0);
        const auto [latency, success] =
            sampler.run(workflow, static_cast<std::uint64_t>(sample), scratch);
        acc.latency_sum += latency;
        acc.latency_sq_sum += latency * latency;
        acc.successes += success ? 1 : 0;
        for (std::size_t s = 0; s < streams; ++s) {
          acc.agent_latency_sum[s] += scratch.agent_latency[s];
        }
      }
      chunks[static_cast<std::size_t>(chunk)] = std::move(acc);
    }
  };

  const int thread_count =
      static_cast<int>(std::min<std::int64_t>(config.threads, num_chunks));
  if (thread_count <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(thread_count));
    for (int t = 0; t < thread_count; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  // Merge in chunk order so the reduction tree is independent of threading.
  double latency_sum = 0.0, latency_sq_sum = 0.0;
  std::int64_t successes = 0;
  std::vector<double> agent_sums(streams, 0.0);
  for (const detail::ChunkAccum& acc : chunks) {
    latency_sum += acc.latency_sum;
    latency_sq_sum += acc.latency_sq_sum;
    successes += acc.successes;
    for (std::size_t s = 0; s < streams; ++s) agent_sums[s] += acc.agent_latency_sum[s];
  }

  const double n = static_cast<double>(config.num_samples);
  const double z = detail::inverse_normal_cdf(0.5 + config.confidence / 2.0);

  SimReport report;
  report.samples = config.num_samples;
  report.confidence = config.confidence;
  report.mean_latency = latency_sum / n;
  report.success_rate = static_cast<double>(successes) / n;
  if (config.num_samples > 1) {
    double variance =
        (latency_sq_sum - n * report.mean_latency * report.mean_latency) / (n - 1.0);
    if (variance < 0.0) variance = 0.0;  // rounding guard for constant data
    report.latency_half_width = z * std::sqrt(variance / n);
  }
  report.success_half_width =
      z * std::sqrt(report.success_rate * (1.0 - report.success_rate) / n);
  for (std::size_t s = 0; s < streams; ++s) {
    report.per_agent.push_back({sampler.ids()[s], agent_sums[s] / n});
  }
  return report;
}

}  // namespace agentflow
