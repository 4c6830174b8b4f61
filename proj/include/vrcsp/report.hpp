#pragma once

#include <string>

#include "vrcsp/model.hpp"
#include "vrcsp/stage2.hpp"

namespace vrcsp {

// Stats report with the keys iterations, fails, fails_rate, z3_min, z3_avg,
// z3_max, time_to_best_s (null where no schedule was found).
std::string stats_json(const GraspResult& result);

// Static Gantt chart: one row per driver, tasks and shuttle legs as bars.
std::string gantt_svg(const CrewProblem& problem, const Schedule& schedule);

}  // namespace vrcsp
