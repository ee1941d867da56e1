#pragma once

#include "swarmlab/csv.hpp"
#include "swarmlab/errors.hpp"
#include "swarmlab/experiment.hpp"
#include "swarmlab/graph.hpp"
#include "swarmlab/pheromone.hpp"
#include "swarmlab/pso.hpp"
#include "swarmlab/rng.hpp"
#include "swarmlab/routing.hpp"
#include "swarmlab/swarm.hpp"
