#pragma once

// Brute-force reference maximizer for sum_j log(1 - e^{-beta_j L_j}) subject
// to sum_j L_j <= B on a token grid. Exists to cross-check the analytic
// water-filling solver; it shares no code path with it.

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "agentflow/errors.hpp"
#include "agentflow/math.hpp"

namespace agentflow {

struct OracleConfig {
  double grid_step = 1.0;     // tokens, > 0
  int max_agents = 3;         // cap for exhaustive mode
  int refinement_rounds = 0;  // > 0 switches to coordinate-refinement mode
};

struct OracleResult {
  std::vector<double> tokens;  // aligned with the input beta order
  double objective = 0.0;      // -inf when some agent is starved
};

// Log-reliability sum at a given allocation: sum_j log(1 - e^{-beta_j L_j}).
// Any L_j == 0 yields the -inf sentinel, which keeps grid points totally
// ordered without special cases.
inline double oracle_objective(std::span<const double> betas, std::span<const double> tokens) {
  if (betas.size() != tokens.size()) {
    throw DomainError("oracle_objective: betas and tokens must have equal length");
  }
  double total = 0.0;
  for (std::size_t j = 0; j < betas.size(); ++j) {
    if (!(tokens[j] >= 0.0)) throw DomainError("oracle_objective: tokens must be >= 0");
    total += detail::log1mexp(betas[j] * tokens[j]);
  }
  return total;
}

namespace detail {

constexpr std::uint64_t kOracleMaxPoints = 100000000ull;  // 10^8
constexpr std::uint64_t kOracleMaxTableEntries = 8000000ull;

// C(m + n - 1, n - 1), saturating above the enumeration cap.
inline std::uint64_t composition_count(std::uint64_t m, std::uint64_t n) {
  double count = 1.0;
  for (std::uint64_t i = 1; i < n; ++i) {
    count *= static_cast<double>(m + i) / static_cast<double>(i);
    if (count > 1e18) return UINT64_MAX;
  }
  return static_cast<std::uint64_t>(count + 0.5);
}

class GridObjective {
 public:
  GridObjective(std::span<const double> betas, double step, std::int64_t max_units)
      : betas_(betas.begin(), betas.end()), step_(step) {
    const std::uint64_t entries =
        static_cast<std::uint64_t>(max_units + 1) * betas_.size();
    if (entries <= kOracleMaxTableEntries) {
      tables_.resize(betas_.size());
      for (std::size_t j = 0; j < betas_.size(); ++j) {
        tables_[j].resize(static_cast<std::size_t>(max_units) + 1);
        for (std::int64_t k = 0; k <= max_units; ++k) {
          tables_[j][static_cast<std::size_t>(k)] =
              log1mexp(betas_[j] * static_cast<double>(k) * step_);
        }
      }
    }
  }

  double operator()(std::size_t agent, std::int64_t units) const {
    if (!tables_.empty()) return tables_[agent][static_cast<std::size_t>(units)];
    return log1mexp(betas_[agent] * static_cast<double>(units) * step_);
  }

 private:
  std::vector<double> betas_;
  double step_;
  std::vector<std::vector<double>> tables_;
};

// Exhaustive scan over all ways to split m grid units across n agents. The
// objective is strictly increasing per coordinate, so only full-budget
// compositions are enumerated. Enumeration is lexicographically ascending
// and replaces the incumbent only on strict improvement, which makes the
// reported maximizer the lexicographically smallest one.
inline void enumerate_compositions(const GridObjective& value, std::size_t n,
                                   std::int64_t m, std::vector<std::int64_t>& best,
                                   double& best_objective) {
  std::vector<std::int64_t> current(n, 0);
  std::vector<double> prefix(n + 1, 0.0);
  auto recurse = [&](auto&& self, std::size_t level, std::int64_t remaining) -> void {
    if (level + 1 == n) {
      current[level] = remaining;
      const double objective = prefix[level] + value(level, remaining);
      if (objective > best_objective) {
        best_objective = objective;
        best = current;
      }
      return;
    }
    for (std::int64_t k = 0; k <= remaining; ++k) {
      current[level] = k;
      prefix[level + 1] = prefix[level] + value(level, k);
      self(self, level + 1, remaining - k);
    }
  };
  best.assign(n, 0);
  best.back() = m;
  best_objective = -kInf;
  recurse(recurse, 0, m);
}

// Pairwise token transfers from an even start. Each per-agent term is
// strictly concave, so a state that no single transfer improves is the grid
// optimum; the 1D search per pair is a ternary search over the transfer.
inline void refine_compositions(const GridObjective& value, std::size_t n, std::int64_t m,
                                int rounds, std::vector<std::int64_t>& units) {
  units.assign(n, m / static_cast<std::int64_t>(n));
  for (std::int64_t j = 0; j < m % static_cast<std::int64_t>(n); ++j) units[j] += 1;

  for (int round = 0; round < rounds; ++round) {
    bool improved = false;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        const auto gain = [&](std::int64_t t) {
          return value(i, units[i] + t) + value(j, units[j] - t);
        };
        std::int64_t lo = 0, hi = units[j];
        while (hi - lo > 2) {
          const std::int64_t m1 = lo + (hi - lo) / 3;
          const std::int64_t m2 = hi - (hi - lo) / 3;
          if (gain(m1) < gain(m2)) {
            lo = m1 + 1;
          } else {
            hi = m2;
          }
        }
        std::int64_t best_t = 0;
        double best_gain = gain(0);
        for (std::int64_t t = lo; t <= hi; ++t) {
          if (gain(t) > best_gain) {
            best_gain = gain(t);
            best_t = t;
          }
        }
        if (best_t > 0) {
          units[i] += best_t;
          units[j] -= best_t;
          improved = true;
        }
      }
    }
    if (!improved) break;
  }
}

}  // namespace detail

// Grid point maximizing the objective with sum L_j <= B.
//
// Exhaustive mode (refinement_rounds == 0) requires at most max_agents agents
// and at most 10^8 candidate points; coordinate-refinement mode handles any
// size by local search, which the strict concavity of the objective makes
// exact on the grid.
inline OracleResult oracle_allocate(std::span<const double> betas, double budget,
                                    const OracleConfig& config = {}) {
  if (betas.empty()) throw DomainError("oracle_allocate: beta list must be nonempty");
  if (!(budget >= 0.0)) throw DomainError("oracle_allocate: budget must be >= 0");
  if (!(config.grid_step > 0.0)) throw DomainError("oracle_allocate: grid_step must be > 0");
  if (config.max_agents < 1) throw DomainError("oracle_allocate: max_agents must be >= 1");
  for (double beta : betas) {
    if (!(beta > 0.0)) throw DomainError("oracle_allocate: every beta must be > 0");
  }

  const std::size_t n = betas.size();
  const std::int64_t m =
      static_cast<std::int64_t>(std::floor(budget / config.grid_step + 1e-9));

  std::vector<std::int64_t> units;
  if (config.refinement_rounds > 0) {
    detail::GridObjective value(betas, config.grid_step, m);
    detail::refine_compositions(value, n, m, config.refinement_rounds, units);
  } else {
    if (n > static_cast<std::size_t>(config.max_agents)) {
      throw OracleTooLarge("oracle_allocate: " + std::to_string(n) +
                           " agents exceed the exhaustive cap of " +
                           std::to_string(config.max_agents) +
                           "; raise the cap or enable refinement");
    }
    const std::uint64_t points =
        detail::composition_count(static_cast<std::uint64_t>(m), n);
    if (points > detail::kOracleMaxPoints) {
      throw OracleTooLarge("oracle_allocate: " + std::to_string(points) +
                           " grid points exceed the 10^8 enumeration cap");
    }
    detail::GridObjective value(betas, config.grid_step, m);
    double best_objective = 0.0;
    detail::enumerate_compositions(value, n, m, units, best_objective);
  }

  OracleResult result;
  result.tokens.reserve(n);
  for (std::int64_t k : units) {
    result.tokens.push_back(static_cast<double>(k) * config.grid_step);
  }
  result.objective = oracle_objective(betas, result.tokens);
  return result;
}

}  // namespace agentflow
