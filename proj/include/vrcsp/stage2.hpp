#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "vrcsp/model.hpp"
#include "vrcsp/random.hpp"
#include "vrcsp/rest.hpp"

namespace vrcsp {

enum class Move { Relocate = 1, SwapTasks = 2, SwapArcs = 3, Insert = 4, Remove = 5, Retime = 6 };

struct SearchConfig {
  double alpha = 0.2;
  double beta_init = std::numeric_limits<double>::infinity();
  double beta_step_pct = 1.0;
  double perturb_base = 25.0;
  std::vector<Move> vnd_order_improve = {Move::Insert, Move::Remove, Move::Relocate,
                                         Move::SwapTasks, Move::SwapArcs};
  std::vector<Move> vnd_order_repair = {Move::Insert, Move::Remove, Move::Retime,
                                        Move::Relocate, Move::SwapTasks, Move::SwapArcs};
  int crew_max = 2;
  double time_limit_s = 10.0;
  long max_iterations = -1;  // negative: no bound
  std::uint64_t seed = 1;
  Regulation regulation = Regulation::L1;
  int restarts = 1;

  // Feature flags distinguishing the three algorithm variants.
  bool semi_feasible = true;  // CL_inf fallback and repair
  bool perturbation = true;

  // 1: feasible-only GRASP; 2: + semi-feasible construction and repair;
  // 3: + perturbation.
  static SearchConfig algorithm(int which);
  void check() const;
};

struct Construction {
  std::optional<Schedule> schedule;
  TaskId stuck = -1;  // first task with no candidate driver
};

// Tasks in (start, truck, route position) order, each appended to the
// cheapest driver that keeps a valid, rest-feasible path.
Construction greedy_construct(const CrewProblem& problem, const SearchConfig& config);

// Restricted candidate list over the same candidates. When no candidate
// exists and config.semi_feasible is set, the task goes to the driver whose
// w_inf grows least among those keeping every other rule; the result may then
// break the 12 h per 24 h rule.
Construction semi_greedy_construct(const CrewProblem& problem, const SearchConfig& config, Rng& rng);

struct MoveArgs {
  Move move = Move::Relocate;
  DriverId d1 = -1;
  int pos1 = -1;  // route position in d1 (head length for SwapArcs)
  DriverId d2 = -1;
  int pos2 = -1;  // route position in d2 (head length for SwapArcs)
  TaskId task = -1;  // Insert, Retime
  Hours value = 0.0;  // Retime
};

struct MoveResult {
  std::optional<Schedule> schedule;
  std::string rejection;  // violated condition when rejected
};

// One move applied to a copy. Path and crew conditions are checked first and
// the rest rules of the touched drivers after construction.
MoveResult apply_move(const CrewProblem& problem, const Schedule& schedule, const MoveArgs& args,
                      const SearchConfig& config);

// Whole-hour start times task t may move to without breaking its windows,
// truck precedence or the paths of the drivers covering it. Includes the
// current value.
std::vector<Hours> retime_candidates(const CrewProblem& problem, const Schedule& schedule, TaskId t);

enum class Objective { Cost, Excess };

struct VndTrace {
  int accepted = 0;
  std::vector<double> objective;  // after each accepted move, starting with the input
};

// First-improvement descent; restarts from the first neighbourhood after every
// accepted move. Stops early when `deadline_s` (seconds since the epoch of
// steady_clock) is reached.
Schedule vnd(const CrewProblem& problem, Schedule schedule, Objective objective,
             const std::vector<Move>& order, const SearchConfig& config, VndTrace* trace = nullptr,
             double deadline_s = std::numeric_limits<double>::infinity());

// Descent on w_inf with the repair order. nullopt when stuck above zero.
std::optional<Schedule> repair(const CrewProblem& problem, Schedule schedule,
                               const SearchConfig& config,
                               double deadline_s = std::numeric_limits<double>::infinity());

// Retimes every task (random order) to a random feasibility-preserving value.
Schedule perturb(const CrewProblem& problem, Schedule schedule, Rng& rng);

// ceil(base^(fails / (it + 1))).
int perturbation_rounds(long fails, long iteration, double base = 25.0);

struct RunStats {
  long iterations = 0;
  long fails = 0;
  double fails_rate = 0.0;
  long repairs_attempted = 0;
  long repairs_succeeded = 0;
  long repairs_skipped = 0;
  std::optional<double> best_z3;
  long iteration_to_best = -1;
  double time_to_best_s = 0.0;
  double elapsed_s = 0.0;
};

struct GraspResult {
  std::optional<Schedule> best;
  RunStats stats;                    // totals over restarts; best from the winning one
  std::vector<RunStats> restarts;    // one per restart
  std::optional<double> z3_min, z3_avg, z3_max;  // over restarts that found a schedule
};

// The full loop: construct, repair if needed, descend, then perturb and
// descend again. Restarts run on separate threads with derived seeds.
GraspResult grasp(const CrewProblem& problem, const SearchConfig& config);

double steady_seconds();

}  // namespace vrcsp
