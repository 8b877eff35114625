#pragma once

#include "informal_transit/allocation_opt.hpp"
#include "informal_transit/analysis.hpp"
#include "informal_transit/cross_subsidy.hpp"
#include "informal_transit/equilibrium.hpp"
#include "informal_transit/errors.hpp"
#include "informal_transit/level_solver.hpp"
#include "informal_transit/model_core.hpp"
#include "informal_transit/objective.hpp"
#include "informal_transit/scenario_io.hpp"
#include "informal_transit/stackelberg.hpp"
