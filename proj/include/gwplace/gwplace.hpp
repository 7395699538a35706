#pragma once

// Single-gateway placement for wireless mesh networks: Coulomb-force node
// scoring over unit-disk topologies, with a flow-level throughput model to
// check how well the force ranking predicts throughput.

#include "gwplace/error.hpp"
#include "gwplace/topology.hpp"
#include "gwplace/force.hpp"
#include "gwplace/routing.hpp"
#include "gwplace/simulator.hpp"
#include "gwplace/experiment.hpp"
