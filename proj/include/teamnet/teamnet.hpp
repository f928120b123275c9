#pragma once

// Umbrella header for the teamnet library.

#include "teamnet/agent.hpp"
#include "teamnet/artifacts.hpp"
#include "teamnet/centrality.hpp"
#include "teamnet/config_json.hpp"
#include "teamnet/engine.hpp"
#include "teamnet/events.hpp"
#include "teamnet/graph.hpp"
#include "teamnet/protocol.hpp"
#include "teamnet/rng.hpp"
#include "teamnet/runner.hpp"
#include "teamnet/types.hpp"
