#include <catch2/catch.hpp>

#include <cmath>

#include "agentflow/allocation.hpp"
#include "agentflow/oracle.hpp"

using namespace agentflow;

namespace {

std::vector<LlmAgentSpec> agents_for(const std::vector<double>& betas) {
  std::vector<LlmAgentSpec> agents;
  for (std::size_t i = 0; i < betas.size(); ++i) {
    LlmAgentSpec a;
    a.id = "a" + std::to_string(i);
    a.alpha = 1.0;
    a.beta = betas[i];
    a.reasoning_tokens = 1000;
    a.rate_think = 100;
    a.rate_gen = 50;
    agents.push_back(a);
  }
  return agents;
}

std::vector<double> analytic_tokens(const std::vector<double>& betas, double budget) {
  const auto agents = agents_for(betas);
  const AllocationResult result = water_filling(agents, budget);
  std::vector<double> tokens;
  for (const LlmAgentSpec& agent : agents) tokens.push_back(result.allocation.at(agent.id));
  return tokens;
}

}  // namespace

TEST_CASE("oracle objective") {
  const std::vector<double> betas{0.001, 0.002};

  CHECK(oracle_objective(betas, std::vector<double>{0.0, 100.0}) ==
        -std::numeric_limits<double>::infinity());

  CHECK(oracle_objective(std::vector<double>{0.001}, std::vector<double>{1000.0}) ==
        Approx(-0.45867514538708193).epsilon(1e-12));

  // Permutation covariance.
  const std::vector<double> b3{0.001, 0.002, 0.003};
  const std::vector<double> l3{500.0, 800.0, 1200.0};
  const std::vector<double> b3p{0.003, 0.001, 0.002};
  const std::vector<double> l3p{1200.0, 500.0, 800.0};
  CHECK(oracle_objective(b3, l3) == Approx(oracle_objective(b3p, l3p)).epsilon(1e-15));

  CHECK_THROWS_AS(oracle_objective(betas, std::vector<double>{-1.0, 1.0}), DomainError);
  CHECK_THROWS_AS(oracle_objective(betas, std::vector<double>{1.0}), DomainError);
}

TEST_CASE("oracle exhaustive mode") {
  // One agent: the monotone objective exhausts the budget.
  const OracleResult one = oracle_allocate(std::vector<double>{0.01}, 100.0, {});
  CHECK(one.tokens == std::vector<double>{100.0});

  // Symmetric two-agent instance splits evenly on the grid.
  const OracleResult two = oracle_allocate(std::vector<double>{0.01, 0.01}, 200.0, {});
  CHECK(two.tokens == std::vector<double>{100.0, 100.0});

  // Zero budget: all zeros, -inf objective.
  const OracleResult zero = oracle_allocate(std::vector<double>{0.01, 0.01}, 0.0, {});
  CHECK(zero.tokens == std::vector<double>{0.0, 0.0});
  CHECK(std::isinf(zero.objective));
  CHECK(zero.objective < 0.0);
}

TEST_CASE("oracle matches the analytic solver within the grid tolerance") {
  const std::vector<double> betas{0.001, 0.002, 0.003};
  const double budget = 3000.0;

  OracleConfig config;
  config.grid_step = 10.0;
  const OracleResult oracle = oracle_allocate(betas, budget, config);
  const double analytic = oracle_objective(betas, analytic_tokens(betas, budget));

  CHECK(analytic >= oracle.objective);
  CHECK(oracle.objective >= analytic - config.grid_step * 0.003);

  // At 1-token resolution the gap tightens below 1e-6.
  config.grid_step = 1.0;
  const OracleResult fine = oracle_allocate(betas, budget, config);
  CHECK(analytic >= fine.objective);
  CHECK(fine.objective >= analytic - 1e-6);
}

TEST_CASE("oracle allocation approaches the analytic one as the grid refines") {
  const std::vector<double> betas{0.001, 0.002, 0.003};
  const double budget = 3000.0;
  const std::vector<double> analytic = analytic_tokens(betas, budget);

  double prev_worst_gap = std::numeric_limits<double>::infinity();
  for (const double step : {10.0, 5.0, 1.0}) {
    OracleConfig config;
    config.grid_step = step;
    const OracleResult oracle = oracle_allocate(betas, budget, config);
    double worst_gap = 0.0;
    for (std::size_t i = 0; i < betas.size(); ++i) {
      worst_gap = std::max(worst_gap, std::fabs(oracle.tokens[i] - analytic[i]));
    }
    CHECK(worst_gap <= prev_worst_gap);
    prev_worst_gap = worst_gap;
  }
  // At step 1 the grid point is within one token per agent.
  CHECK(prev_worst_gap <= 1.0);
}

TEST_CASE("oracle size guards") {
  const std::vector<double> six(6, 0.001);
  CHECK_THROWS_AS(oracle_allocate(six, 100.0, {}), OracleTooLarge);

  // Three agents but an enormous grid: the point count exceeds 10^8.
  OracleConfig tiny_step;
  tiny_step.grid_step = 0.001;
  CHECK_THROWS_AS(oracle_allocate(std::vector<double>{0.001, 0.002, 0.003}, 100000.0,
                                  tiny_step),
                  OracleTooLarge);

  CHECK_THROWS_AS(oracle_allocate(std::vector<double>{}, 100.0, {}), DomainError);
  CHECK_THROWS_AS(oracle_allocate(std::vector<double>{0.001}, -1.0, {}), DomainError);
}

TEST_CASE("coordinate refinement matches exhaustive search") {
  const std::vector<double> betas{0.0008, 0.0021, 0.0034};
  const double budget = 2400.0;

  OracleConfig exhaustive;
  exhaustive.grid_step = 4.0;
  const OracleResult a = oracle_allocate(betas, budget, exhaustive);

  OracleConfig refined = exhaustive;
  refined.refinement_rounds = 100;
  const OracleResult b = oracle_allocate(betas, budget, refined);

  CHECK(a.tokens == b.tokens);
  CHECK(a.objective == Approx(b.objective).epsilon(1e-15));
}

TEST_CASE("coordinate refinement handles instances beyond the exhaustive cap") {
  // Five agents at 1-token resolution: far too many compositions to
  // enumerate, but pairwise refinement lands within the discretization bound
  // of the analytic optimum.
  const std::vector<double> betas{0.001, 0.002, 0.0005, 0.003, 0.0015};
  OracleConfig config;
  config.refinement_rounds = 200;
  const OracleResult oracle = oracle_allocate(betas, 12000.0, config);

  const double analytic = oracle_objective(betas, analytic_tokens(betas, 12000.0));
  CHECK(analytic >= oracle.objective);
  CHECK(oracle.objective >= analytic - 1e-6);

  double total = 0.0;
  for (double tokens : oracle.tokens) total += tokens;
  CHECK(total == 12000.0);
}
