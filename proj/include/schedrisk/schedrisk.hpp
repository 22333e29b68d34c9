#pragma once

// Umbrella header: schedule risk analysis via conditional Monte Carlo.
//
// Pipeline: parse a PSPLib-format instance (psplib.hpp), attach an
// uncertainty model (model.hpp), validate a baseline schedule
// (feasibility.hpp), simulate the risk baseline curve and integrate it
// to a single risk value (srb.hpp), and rank candidate schedules
// (rank.hpp). sgs.hpp generates feasible candidates when none are
// supplied; metrics.hpp covers multi-project delay statistics.

#include "schedrisk/errors.hpp"
#include "schedrisk/types.hpp"
#include "schedrisk/rng.hpp"
#include "schedrisk/psplib.hpp"
#include "schedrisk/schedule_csv.hpp"
#include "schedrisk/bundle.hpp"
#include "schedrisk/cpm.hpp"
#include "schedrisk/feasibility.hpp"
#include "schedrisk/metrics.hpp"
#include "schedrisk/duration.hpp"
#include "schedrisk/model.hpp"
#include "schedrisk/simview.hpp"
#include "schedrisk/srb.hpp"
#include "schedrisk/sgs.hpp"
#include "schedrisk/rank.hpp"
#include "schedrisk/reports.hpp"
