#pragma once

#include <cstdint>
#include <string>

#include "agentflow/errors.hpp"

namespace agentflow {

// Per-token prices. c_tok is what the user pays per output token; c_comp is
// what the provider pays per processed token (reasoning + output).
struct PricingModel {
  double c_tok = 0.0;   // currency / output token, > 0
  double c_comp = 0.0;  // currency / processed token, > 0

  void validate() const {
    if (!(c_tok > 0.0)) throw ValidationError("pricing: c_tok must be > 0");
    if (!(c_comp > 0.0)) throw ValidationError("pricing: c_comp must be > 0");
  }
};

// Per-token compute price from per-FLOP energy cost and model dimensions:
// c_comp = c_e * (2*n_params + 2*n_layer*n_ctx*n_attn).
//
// n_params is the parameter count; it is named n_params here so it cannot be
// confused with the per-agent reliability parameter beta.
inline double derive_c_comp(double c_e, std::int64_t n_params, std::int64_t n_layer,
                            std::int64_t n_ctx, std::int64_t n_attn) {
  if (!(c_e > 0.0)) throw DomainError("derive_c_comp: c_e must be > 0");
  if (n_params <= 0 || n_layer <= 0 || n_ctx <= 0 || n_attn <= 0) {
    throw DomainError("derive_c_comp: model dimensions must be > 0");
  }
  const double flops_per_token =
      2.0 * static_cast<double>(n_params) +
      2.0 * static_cast<double>(n_layer) * static_cast<double>(n_ctx) *
          static_cast<double>(n_attn);
  return c_e * flops_per_token;
}

}  // namespace agentflow
