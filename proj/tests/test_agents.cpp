#include <catch2/catch.hpp>

#include <random>

#include "agentflow/agents.hpp"
#include "agentflow/pricing.hpp"

using namespace agentflow;

namespace {

LlmAgentSpec llm(double alpha, double beta, double reasoning, double infra,
                 double rate_think, double rate_gen) {
  LlmAgentSpec a;
  a.id = "agent";
  a.alpha = alpha;
  a.beta = beta;
  a.reasoning_tokens = reasoning;
  a.mean_infra_delay = infra;
  a.rate_think = rate_think;
  a.rate_gen = rate_gen;
  return a;
}

}  // namespace

TEST_CASE("agent mean latency") {
  CHECK(agent_mean_latency(llm(1, 1, 1000, 0.5, 100, 50), 200) == Approx(14.5).epsilon(1e-12));
  CHECK(agent_mean_latency(llm(1, 1, 0, 0, 100, 50), 0) == 0.0);
  CHECK(agent_mean_latency(llm(1, 1, 0, 1.0, 123, 100), 100) == Approx(2.0).epsilon(1e-12));
  CHECK_THROWS_AS(agent_mean_latency(llm(1, 1, 0, 0, 1, 1), -1.0), DomainError);
}

TEST_CASE("agent reliability") {
  // Zero reasoning forces the first factor to zero.
  CHECK(agent_reliability(llm(0.01, 0.5, 0, 0, 1, 1), 1000) == 0.0);

  // Saturation: large alpha*X and large L approach 1.
  CHECK(agent_reliability(llm(100, 0.001, 100, 0, 1, 1), 1e9) == Approx(1.0).epsilon(1e-9));

  // alpha*X = 1 and beta*L = 1 give (1 - e^-1)^2.
  CHECK(agent_reliability(llm(0.002, 0.001, 500, 0, 1, 1), 1000) ==
        Approx(0.39957640089372803).epsilon(1e-12));

  CHECK_THROWS_AS(agent_reliability(llm(1, 1, 1, 0, 1, 1), -0.5), DomainError);
}

TEST_CASE("agent reliability monotonicity and bounds") {
  // Within the representable regime (beta*L below ~30) monotonicity is
  // strict even after rounding.
  std::mt19937_64 rng(20260808);
  std::uniform_real_distribution<double> beta_dist(1e-4, 1e-2);
  std::uniform_real_distribution<double> tokens_dist(0.0, 2000.0);
  std::uniform_real_distribution<double> step_dist(1.0, 500.0);
  for (int trial = 0; trial < 200; ++trial) {
    const LlmAgentSpec agent = llm(0.01, beta_dist(rng), 500, 0, 1, 1);
    const double l1 = tokens_dist(rng);
    const double l2 = l1 + step_dist(rng);
    const double r1 = agent_reliability(agent, l1);
    const double r2 = agent_reliability(agent, l2);
    REQUIRE(r2 > r1);
    REQUIRE(r1 >= 0.0);
    REQUIRE(r2 < 1.0);
  }

  // As L grows the reliability approaches 1 - e^{-alpha X}.
  const LlmAgentSpec agent = llm(0.002, 0.001, 500, 0, 1, 1);
  const double ceiling = -std::expm1(-0.002 * 500);
  CHECK(agent_reliability(agent, 1e9) == Approx(ceiling).epsilon(1e-12));
  CHECK(agent_reliability(agent, 5000.0) < ceiling);
}

TEST_CASE("agent costs") {
  const PricingModel pricing{1e-4, 2e-6};
  const AgentCosts a = agent_costs(llm(1, 1, 0, 0, 1, 1), 1000, pricing);
  CHECK(a.user_cost == Approx(0.1).epsilon(1e-12));

  const AgentCosts b = agent_costs(llm(1, 1, 500, 0, 1, 1), 1500, pricing);
  CHECK(b.compute_cost == Approx(0.004).epsilon(1e-12));

  const AgentCosts c = agent_costs(llm(1, 1, 0, 0, 1, 1), 0, pricing);
  CHECK(c.user_cost == 0.0);
  CHECK(c.compute_cost == 0.0);

  CHECK_THROWS_AS(agent_costs(llm(1, 1, 0, 0, 1, 1), -1, pricing), DomainError);
}

TEST_CASE("derive c_comp") {
  CHECK(derive_c_comp(1.0, 10, 1, 1, 1) == Approx(22.0).epsilon(1e-15));
  CHECK_THROWS_AS(derive_c_comp(0.0, 10, 1, 1, 1), DomainError);
  CHECK_THROWS_AS(derive_c_comp(1.0, 0, 1, 1, 1), DomainError);
  CHECK(derive_c_comp(1e-12, 1000000000, 12, 1024, 768) ==
        Approx(0.002018874368).epsilon(1e-12));
}

TEST_CASE("pricing invariants") {
  CHECK_THROWS_AS((PricingModel{0.0, 1.0}.validate()), ValidationError);
  CHECK_THROWS_AS((PricingModel{1.0, 0.0}.validate()), ValidationError);
  CHECK_NOTHROW((PricingModel{1e-4, 2e-6}.validate()));
}

TEST_CASE("llm agent invariants") {
  LlmAgentSpec bad = llm(0.0, 0.001, 100, 0.1, 100, 50);
  bad.id = "planner";
  const auto issues = bad.issues();
  REQUIRE(issues.size() == 1);
  CHECK(issues[0].field == "alpha");
  CHECK_THROWS_AS(bad.validate(), ValidationError);

  LlmAgentSpec dist_mismatch = llm(1, 1, 0, 0.5, 100, 50);
  dist_mismatch.infra_delay_dist = InfraDelayDist{DelayFamily::exponential, 0.4, 0.0};
  REQUIRE_FALSE(dist_mismatch.issues().empty());
  CHECK(dist_mismatch.issues()[0].field == "infra_delay_dist");

  LlmAgentSpec dist_ok = llm(1, 1, 0, 0.5, 100, 50);
  dist_ok.infra_delay_dist = InfraDelayDist{DelayFamily::exponential, 0.5, 0.0};
  CHECK(dist_ok.issues().empty());

  LlmAgentSpec bad_sigma = llm(1, 1, 0, 0.5, 100, 50);
  bad_sigma.infra_delay_dist = InfraDelayDist{DelayFamily::lognormal, 0.5, 0.0};
  REQUIRE_FALSE(bad_sigma.issues().empty());
}

TEST_CASE("non-llm agent invariants") {
  NonLlmAgentSpec fixed;
  fixed.id = "db";
  fixed.mean_latency = 0.2;
  fixed.reliability = 0.99;
  CHECK(fixed.issues().empty());
  CHECK(fixed.expected_latency() == 0.2);

  NonLlmAgentSpec rate;
  rate.id = "db";
  rate.service_rate = 5.0;
  rate.reliability = 0.99;
  CHECK(rate.issues().empty());
  CHECK(rate.expected_latency() == Approx(0.2).epsilon(1e-15));

  NonLlmAgentSpec both = fixed;
  both.service_rate = 5.0;
  REQUIRE_FALSE(both.issues().empty());
  CHECK(both.issues()[0].field == "latency_model");

  NonLlmAgentSpec neither;
  neither.id = "db";
  neither.reliability = 0.5;
  REQUIRE_FALSE(neither.issues().empty());

  NonLlmAgentSpec out_of_range = fixed;
  out_of_range.reliability = 1.5;
  REQUIRE_FALSE(out_of_range.issues().empty());
}
