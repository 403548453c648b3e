#pragma once

#include <stdexcept>
#include <string>

namespace agentflow {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numeric precondition was violated (negative token count, nonpositive
// rate, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A structural invariant of a workflow, allocation, or config was violated.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// The fixed portion of the workflow latency alone exceeds the latency budget,
// so no output tokens can be generated.
class InfeasibleLatency : public Error {
 public:
  using Error::Error;
};

// The LLM agents do not share a common generation rate; the reduction to a
// single token budget is undefined in that case.
class HeterogeneousRates : public Error {
 public:
  using Error::Error;
};

// The workflow contains no LLM agent whose response length could be chosen.
class NothingToOptimize : public Error {
 public:
  using Error::Error;
};

// The brute-force search space exceeds the enumeration cap.
class OracleTooLarge : public Error {
 public:
  using Error::Error;
};

// The budget-residual tolerance was not reached within the iteration cap.
class NoConvergence : public Error {
 public:
  using Error::Error;
};

}  // namespace agentflow
