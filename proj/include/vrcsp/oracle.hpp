#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "vrcsp/model.hpp"

namespace vrcsp {

struct OracleLimits {
  int max_tasks = 8;
  int max_drivers = 4;
  long max_start_combinations = 50000;
};

struct Stage2Optimum {
  std::optional<double> z3;          // nullopt: no feasible schedule on the grid
  std::optional<Schedule> schedule;  // an optimal schedule
  long start_combinations = 0;
};

// Exhaustive search over whole-hour start times (per truck chain) and driver
// routes with crews of 1..crew_max, minimising Z3. Throws InputError when the
// instance exceeds the limits.
Stage2Optimum brute_stage2(const CrewProblem& problem, Regulation regulation, int crew_max = 2,
                           const OracleLimits& limits = {});

// Number of whole-hour start assignments respecting windows and truck order.
long count_start_combinations(const CrewProblem& problem, long cap);

struct Stage1Optimum {
  std::optional<double> z12;  // nullopt: some request cannot be served
  double z1 = 0.0;
  double z2 = 0.0;
};

// Every assignment of requests to trucks and every service order, timed as
// early as possible on the whole-hour grid. At most 4 requests and 3 trucks.
Stage1Optimum brute_stage1(const Instance& instance, double lambda);

// A small random crew problem whose start-time grid stays enumerable.
CrewProblem make_tiny_case(std::uint64_t seed);

// Small hand-built crew problems used by tests.
namespace fixtures {

// Two locations 270 km apart; t0 pickup at l1 (start 1), t1 trip l1->l2
// (start 3, 3 h), t2 delivery at l2 (start 4), t3 pickup at l2 (start 8), each
// on its own truck. Drivers start at the given locations (0 = l1, 1 = l2).
CrewProblem two_city(const std::vector<LocationId>& driver_locations);

// One driver starting at a; trips a->b over [0,8] and c->d over [40,48],
// b-c 540 km so the shuttle is [34,40]. H = 2.
CrewProblem shuttle_day();
Schedule shuttle_day_schedule(const CrewProblem& problem);

// Driver d0 covers t0 (ends at l1 at 4) and t2 (starts at l2 at 30); d1 covers
// t1 (l1->l2 at 10 for 6 h). The 6 h shuttle of d0 puts 13 h in [24,48].
CrewProblem missing_trip();
Schedule missing_trip_schedule(const CrewProblem& problem);

// Single driver with one 13 h trip: no schedule can respect 12 h per 24 h.
CrewProblem overworked();

// Trips A->B at 0, then B->C and B->A both at 5, each on its own truck; two
// drivers at A. Riding along on A->B saves the shuttle: optimum 0 with crews of
// two, 6 with single crews.
CrewProblem relay();

}  // namespace fixtures

}  // namespace vrcsp
