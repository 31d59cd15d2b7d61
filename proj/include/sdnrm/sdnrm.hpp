#pragma once

#include "sdnrm/contracts.hpp"
#include "sdnrm/error.hpp"
#include "sdnrm/event_queue.hpp"
#include "sdnrm/experiment.hpp"
#include "sdnrm/flow.hpp"
#include "sdnrm/kernel.hpp"
#include "sdnrm/llde.hpp"
#include "sdnrm/metrics.hpp"
#include "sdnrm/report.hpp"
#include "sdnrm/resilience.hpp"
#include "sdnrm/routing.hpp"
#include "sdnrm/run_log.hpp"
#include "sdnrm/scenario.hpp"
#include "sdnrm/topology.hpp"
#include "sdnrm/units.hpp"
#include "sdnrm/variant.hpp"
