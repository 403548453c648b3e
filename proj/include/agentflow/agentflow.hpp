#pragma once

// Umbrella header.

#include "agentflow/agents.hpp"
#include "agentflow/allocation.hpp"
#include "agentflow/config.hpp"
#include "agentflow/errors.hpp"
#include "agentflow/io.hpp"
#include "agentflow/oracle.hpp"
#include "agentflow/pricing.hpp"
#include "agentflow/simulation.hpp"
#include "agentflow/sweep.hpp"
#include "agentflow/workflow.hpp"
