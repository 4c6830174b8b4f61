#pragma once

#include <cmath>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vrcsp/errors.hpp"
#include "vrcsp/network.hpp"

namespace vrcsp {

using TaskId = int;
using TruckId = int;
using DriverId = int;
using RequestId = int;
using Hours = double;

// Slack used for every time comparison. Start times are whole hours and
// durations are distance / speed, so genuine differences are far larger.
inline constexpr double kTimeEps = 1e-9;

// Pickup and delivery tasks take one hour of service.
inline constexpr Hours kServiceHours = 1.0;

enum class TravelMode { Truck, Shuttle };

// Rest regulations: L1 alone, or L1 combined with the weekly cap (L2) or the
// minimum uninterrupted rest between work periods (L3).
enum class Regulation { L1, L1L2, L1L3 };

inline constexpr Hours kMaxDailyWork = 12.0;
inline constexpr Hours kMaxWeeklyWork = 60.0;
inline constexpr Hours kMinRestBetweenPeriods = 11.0;

std::string to_string(Regulation regulation);
// Accepts "l1", "l1l2", "l1l3" (case-insensitive, '+' allowed).
Regulation parse_regulation(std::string_view text);

struct TimeWindow {
  Hours open = 0.0;
  Hours close = 24.0;

  bool operator==(const TimeWindow&) const = default;
};

struct Request {
  std::string id;
  LocationId pickup_location = 0;
  LocationId delivery_location = 0;
  TimeWindow pickup_window;
  TimeWindow delivery_window;
  int pickup_day = 0;
  int delivery_day = 0;
  double late_penalty = 1.0;

  bool operator==(const Request&) const = default;
};

struct Truck {
  std::string id;
  LocationId location = 0;

  bool operator==(const Truck&) const = default;
};

struct Driver {
  std::string id;
  LocationId location = 0;

  bool operator==(const Driver&) const = default;
};

// An immutable problem instance. The constructor checks every invariant and
// throws InputError on the first one that fails.
class Instance {
 public:
  Instance(int horizon_days, RoadNetwork network, std::vector<Request> requests,
           std::vector<Truck> trucks, std::vector<Driver> drivers, double truck_speed = 90.0,
           double shuttle_speed = 90.0);

  int horizon_days() const { return horizon_days_; }
  Hours horizon_hours() const { return 24.0 * horizon_days_; }
  const RoadNetwork& network() const { return network_; }
  const std::vector<Request>& requests() const { return requests_; }
  const std::vector<Truck>& trucks() const { return trucks_; }
  const std::vector<Driver>& drivers() const { return drivers_; }
  double truck_speed() const { return truck_speed_; }
  double shuttle_speed() const { return shuttle_speed_; }

  double travel_dist(LocationId from, LocationId to) const;
  Hours travel_time(LocationId from, LocationId to, TravelMode mode) const;
  // travelTime^S + 1 for a relocation, 0 when no relocation is needed.
  double shuttle_cost(LocationId from, LocationId to) const;

  bool operator==(const Instance&) const = default;

 private:
  int horizon_days_;
  RoadNetwork network_;
  std::vector<Request> requests_;
  std::vector<Truck> trucks_;
  std::vector<Driver> drivers_;
  double truck_speed_;
  double shuttle_speed_;
};

enum class TaskKind { Pickup, Delivery, Trip };

std::string to_string(TaskKind kind);

struct Task {
  TaskKind kind = TaskKind::Trip;
  LocationId origin = 0;
  LocationId destination = 0;
  Hours duration = 0.0;
  TruckId truck = 0;
  RequestId request = -1;  // pickup and delivery tasks only

  bool operator==(const Task&) const = default;
};

// Output of the truck-routing stage: the tasks, their order on every truck,
// tentative start times and the delivery day fixed for each request.
struct TaskPlan {
  std::vector<Task> tasks;
  std::vector<std::vector<TaskId>> truck_routes;
  std::vector<Hours> tentative_start;
  std::vector<int> delivery_day;

  bool operator==(const TaskPlan&) const = default;
};

// Human-readable list of TaskPlan invariant breaches; empty when valid.
std::vector<std::string> check_plan(const Instance& instance, const TaskPlan& plan);

// Stage-2 solution: start time of every task plus one task sequence per driver.
struct Schedule {
  std::vector<Hours> start;
  std::vector<std::vector<TaskId>> routes;
  Regulation regulation = Regulation::L1;

  bool operator==(const Schedule&) const = default;
};

struct Interval {
  Hours begin = 0.0;
  Hours end = 0.0;
};

struct ShuttleLeg {
  LocationId from = 0;
  LocationId to = 0;
  Hours begin = 0.0;
  Hours end = 0.0;
};

// The crew-scheduling problem: an instance together with a frozen task plan.
// Precomputes shuttle times/costs per location pair and the truck neighbours of
// every task. Cheap to share; immutable.
class CrewProblem {
 public:
  CrewProblem(std::shared_ptr<const Instance> instance, std::shared_ptr<const TaskPlan> plan);
  CrewProblem(const Instance& instance, const TaskPlan& plan);

  const Instance& instance() const { return *instance_; }
  const TaskPlan& plan() const { return *plan_; }
  std::shared_ptr<const Instance> instance_ptr() const { return instance_; }
  std::shared_ptr<const TaskPlan> plan_ptr() const { return plan_; }

  int num_tasks() const { return static_cast<int>(plan_->tasks.size()); }
  int num_drivers() const { return static_cast<int>(instance_->drivers().size()); }
  int horizon_days() const { return instance_->horizon_days(); }
  Hours horizon_hours() const { return instance_->horizon_hours(); }

  const Task& task(TaskId t) const { return plan_->tasks[t]; }
  LocationId driver_location(DriverId d) const { return instance_->drivers()[d].location; }

  Hours shuttle_time(LocationId a, LocationId b) const { return shuttle_time_[a * nloc_ + b]; }
  double shuttle_cost(LocationId a, LocationId b) const { return shuttle_cost_[a * nloc_ + b]; }

  TaskId truck_prev(TaskId t) const { return truck_prev_[t]; }
  TaskId truck_next(TaskId t) const { return truck_next_[t]; }

  // Static start-time domain of a task, as a union of closed intervals:
  // the daily pickup windows from the pickup day to the end of the horizon, the
  // delivery window on the frozen delivery day, or [0, 24H - duration] for a trip.
  std::vector<Interval> start_domain(TaskId t) const;
  bool in_start_domain(TaskId t, Hours value) const;

  // Ids as written in files.
  std::string task_name(TaskId t) const { return "t" + std::to_string(t); }
  const std::string& driver_name(DriverId d) const { return instance_->drivers()[d].id; }

 private:
  void init();

  std::shared_ptr<const Instance> instance_;
  std::shared_ptr<const TaskPlan> plan_;
  int nloc_ = 0;
  std::vector<Hours> shuttle_time_;
  std::vector<double> shuttle_cost_;
  std::vector<TaskId> truck_prev_;
  std::vector<TaskId> truck_next_;
};

enum class ViolationKind {
  PathBreak,
  CrewUnder,
  CrewOver,
  RestL1Daily,
  RestL1WeekOff,
  RestL2,
  RestL3,
  WindowPickup,
  WindowDelivery,
  Precedence,
};

std::string to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::string subject;  // driver, task or truck id
  std::string detail;
  double amount = 0.0;

  bool operator==(const Violation&) const = default;
};

// --- whole-hour grid ------------------------------------------------------

inline double ceil_hour(double x) { return std::ceil(x - kTimeEps); }
inline double floor_hour(double x) { return std::floor(x + kTimeEps); }

// [24i + w.open, 24i + w.close] for i = first_day .. horizon_days-1.
std::vector<Interval> daily_windows(int first_day, int horizon_days, const TimeWindow& w);

// Smallest day i >= first_day whose window [24i+open, 24i+close] contains
// value, or -1.
int window_day(Hours value, int first_day, int horizon_days, const TimeWindow& w);

// Smallest (largest) whole hour >= from (<= upto) inside the union.
std::optional<Hours> first_hour_in(std::span<const Interval> domain, Hours from);
std::optional<Hours> last_hour_in(std::span<const Interval> domain, Hours upto);

// --- travel ---------------------------------------------------------------

Hours travel_time(const Instance& instance, LocationId from, LocationId to, TravelMode mode);

// --- driver timelines -----------------------------------------------------

// True when the route satisfies the driver-path conditions under `start`.
bool is_driver_path(const CrewProblem& problem, std::span<const Hours> start,
                    std::span<const TaskId> route, LocationId driver_location);

// Shuttle legs of a route, each scheduled as late as possible.
std::vector<ShuttleLeg> shuttle_legs(const CrewProblem& problem, const Schedule& schedule,
                                     DriverId driver);

// Work intervals (tasks and shuttle legs) sorted by begin time.
std::vector<Interval> work_intervals(const CrewProblem& problem, std::span<const Hours> start,
                                     std::span<const TaskId> route, LocationId driver_location);

// Gamma[i] for i = 0 .. 24H-24: hours worked in [i, i+24]. ContractError when
// the route is not a valid driver path.
std::vector<Hours> workload(const CrewProblem& problem, const Schedule& schedule, DriverId driver);

std::vector<Violation> check_rest(const CrewProblem& problem, const Schedule& schedule,
                                  DriverId driver, Regulation regulation);

// Sum over drivers and windows of max(0, Gamma - 12).
double w_inf(const CrewProblem& problem, const Schedule& schedule);
double w_inf(const CrewProblem& problem, const Schedule& schedule, DriverId driver);

// --- costs ----------------------------------------------------------------

struct Stage1Cost {
  double z1 = 0.0;   // weighted delivery delay in days
  double z2 = 0.0;   // total truck distance
  double z12 = 0.0;  // lambda * z1 + (1 - lambda) * z2
};

Stage1Cost cost_stage1(const Instance& instance, const TaskPlan& plan, double lambda);

double route_cost(const CrewProblem& problem, std::span<const TaskId> route,
                  LocationId driver_location);
double cost_stage2(const CrewProblem& problem, const Schedule& schedule);

// --- validation -----------------------------------------------------------

// Window, day and truck-precedence conditions on a start-time assignment.
std::vector<Violation> start_violations(const CrewProblem& problem, std::span<const Hours> start);

// Every broken constraint of the candidate schedule; empty iff feasible under
// schedule.regulation. Never throws on bad content.
std::vector<Violation> validate(const CrewProblem& problem, const Schedule& schedule);

}  // namespace vrcsp
