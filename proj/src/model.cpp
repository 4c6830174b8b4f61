#include "vrcsp/model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "vrcsp/rest.hpp"

namespace vrcsp {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

bool within(const std::vector<Interval>& domain, Hours value) {
  return std::any_of(domain.begin(), domain.end(), [&](const Interval& iv) {
    return value >= iv.begin - kTimeEps && value <= iv.end + kTimeEps;
  });
}

}  // namespace

std::string to_string(Regulation regulation) {
  switch (regulation) {
    case Regulation::L1: return "l1";
    case Regulation::L1L2: return "l1l2";
    case Regulation::L1L3: return "l1l3";
  }
  return "l1";
}

Regulation parse_regulation(std::string_view text) {
  std::string key;
  for (char c : text) {
    if (c != '+' && c != '_' && c != ' ') key.push_back(static_cast<char>(std::tolower(c)));
  }
  if (key == "l1") return Regulation::L1;
  if (key == "l1l2") return Regulation::L1L2;
  if (key == "l1l3") return Regulation::L1L3;
  throw InputError("unknown regulation '" + std::string(text) + "' (expected l1, l1l2 or l1l3)");
}

std::string to_string(TaskKind kind) {
  switch (kind) {
    case TaskKind::Pickup: return "pickup";
    case TaskKind::Delivery: return "delivery";
    case TaskKind::Trip: return "trip";
  }
  return "trip";
}

std::string to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::PathBreak: return "pathBreak";
    case ViolationKind::CrewUnder: return "crewUnder";
    case ViolationKind::CrewOver: return "crewOver";
    case ViolationKind::RestL1Daily: return "restL1Daily";
    case ViolationKind::RestL1WeekOff: return "restL1WeekOff";
    case ViolationKind::RestL2: return "restL2";
    case ViolationKind::RestL3: return "restL3";
    case ViolationKind::WindowPickup: return "windowPickup";
    case ViolationKind::WindowDelivery: return "windowDelivery";
    case ViolationKind::Precedence: return "precedence";
  }
  return "unknown";
}

// --- Instance -------------------------------------------------------------

Instance::Instance(int horizon_days, RoadNetwork network, std::vector<Request> requests,
                   std::vector<Truck> trucks, std::vector<Driver> drivers, double truck_speed,
                   double shuttle_speed)
    : horizon_days_(horizon_days),
      network_(std::move(network)),
      requests_(std::move(requests)),
      trucks_(std::move(trucks)),
      drivers_(std::move(drivers)),
      truck_speed_(truck_speed),
      shuttle_speed_(shuttle_speed) {
  if (horizon_days_ < 1) throw InputError("horizon must be at least one day");
  if (!(truck_speed_ > 0.0) || !(shuttle_speed_ > 0.0)) {
    throw InputError("truck and shuttle speeds must be positive");
  }
  const auto check_window = [](const TimeWindow& w, const std::string& what) {
    if (!(w.open >= 0.0 && w.open <= w.close && w.close <= 24.0)) {
      throw InputError(what + " must satisfy 0 <= open <= close <= 24");
    }
  };

  std::vector<LocationId> used;
  for (const Request& r : requests_) {
    const std::string tag = "request '" + r.id + "'";
    if (!network_.contains(r.pickup_location) || !network_.contains(r.delivery_location)) {
      throw InputError(tag + " references an unknown location");
    }
    if (r.pickup_location == r.delivery_location) {
      throw InputError(tag + " has identical pickup and delivery locations");
    }
    check_window(r.pickup_window, tag + " pickup window");
    check_window(r.delivery_window, tag + " delivery window");
    if (!(0 <= r.pickup_day && r.pickup_day <= r.delivery_day && r.delivery_day < horizon_days_)) {
      throw InputError(tag + " must satisfy 0 <= pickup_day <= delivery_day < horizon");
    }
    if (!(r.late_penalty >= 0.0)) throw InputError(tag + " has a negative late penalty");
    used.push_back(r.pickup_location);
    used.push_back(r.delivery_location);
  }
  for (const Truck& v : trucks_) {
    if (!network_.contains(v.location)) {
      throw InputError("truck '" + v.id + "' starts at an unknown location");
    }
    used.push_back(v.location);
  }
  for (const Driver& d : drivers_) {
    if (!network_.contains(d.location)) {
      throw InputError("driver '" + d.id + "' starts at an unknown location");
    }
    used.push_back(d.location);
  }
  for (LocationId l : used) {
    if (!network_.connected(used.front(), l)) {
      throw InputError("road network does not connect '" + network_.name(used.front()) +
                       "' and '" + network_.name(l) + "'");
    }
  }
}

double Instance::travel_dist(LocationId from, LocationId to) const {
  return network_.distance(from, to);
}

Hours Instance::travel_time(LocationId from, LocationId to, TravelMode mode) const {
  const double km = network_.distance(from, to);
  return km / (mode == TravelMode::Truck ? truck_speed_ : shuttle_speed_);
}

double Instance::shuttle_cost(LocationId from, LocationId to) const {
  if (from == to) return 0.0;
  return travel_time(from, to, TravelMode::Shuttle) + 1.0;
}

Hours travel_time(const Instance& instance, LocationId from, LocationId to, TravelMode mode) {
  return instance.travel_time(from, to, mode);
}

std::vector<Interval> daily_windows(int first_day, int horizon_days, const TimeWindow& w) {
  std::vector<Interval> out;
  for (int day = std::max(first_day, 0); day < horizon_days; ++day) {
    out.push_back({24.0 * day + w.open, 24.0 * day + w.close});
  }
  return out;
}

int window_day(Hours value, int first_day, int horizon_days, const TimeWindow& w) {
  for (int day = std::max(first_day, 0); day < horizon_days; ++day) {
    if (value >= 24.0 * day + w.open - kTimeEps && value <= 24.0 * day + w.close + kTimeEps) return day;
  }
  return -1;
}

std::optional<Hours> first_hour_in(std::span<const Interval> domain, Hours from) {
  std::optional<Hours> best;
  for (const Interval& iv : domain) {
    const double lo = std::max(ceil_hour(from), ceil_hour(iv.begin));
    if (lo <= floor_hour(iv.end) && (!best || lo < *best)) best = lo;
  }
  return best;
}

std::optional<Hours> last_hour_in(std::span<const Interval> domain, Hours upto) {
  std::optional<Hours> best;
  for (const Interval& iv : domain) {
    const double hi = std::min(floor_hour(upto), floor_hour(iv.end));
    if (hi >= ceil_hour(iv.begin) && (!best || hi > *best)) best = hi;
  }
  return best;
}

// --- TaskPlan -------------------------------------------------------------

std::vector<std::string> check_plan(const Instance& instance, const TaskPlan& plan) {
  std::vector<std::string> issues;
  const auto& requests = instance.requests();
  const int ntasks = static_cast<int>(plan.tasks.size());
  if (plan.tentative_start.size() != plan.tasks.size()) {
    issues.push_back("tentative start times do not match the task count");
    return issues;
  }
  if (plan.delivery_day.size() != requests.size()) {
    issues.push_back("delivery days do not match the request count");
    return issues;
  }
  if (plan.truck_routes.size() != instance.trucks().size()) {
    issues.push_back("truck routes do not match the truck count");
    return issues;
  }

  for (TaskId t = 0; t < ntasks; ++t) {
    const Task& task = plan.tasks[t];
    const std::string tag = "task t" + std::to_string(t);
    if (task.kind == TaskKind::Trip) {
      if (task.origin == task.destination) issues.push_back(tag + ": trip does not move");
      else if (std::abs(task.duration - instance.travel_time(task.origin, task.destination,
                                                             TravelMode::Truck)) > 1e-6) {
        issues.push_back(tag + ": trip duration differs from the truck travel time");
      }
    } else {
      if (task.origin != task.destination) issues.push_back(tag + ": service task moves");
      if (std::abs(task.duration - kServiceHours) > kTimeEps) {
        issues.push_back(tag + ": service task does not last one hour");
      }
      if (task.request < 0 || task.request >= static_cast<int>(requests.size())) {
        issues.push_back(tag + ": unknown request");
      } else {
        const Request& r = requests[task.request];
        const LocationId expected =
            task.kind == TaskKind::Pickup ? r.pickup_location : r.delivery_location;
        if (task.origin != expected) issues.push_back(tag + ": served at the wrong location");
      }
    }
  }

  std::vector<int> seen(plan.tasks.size(), 0);
  std::vector<int> picked(requests.size(), 0), delivered(requests.size(), 0);
  for (std::size_t v = 0; v < plan.truck_routes.size(); ++v) {
    const auto& route = plan.truck_routes[v];
    const std::string tag = "truck " + instance.trucks()[v].id;
    LocationId at = instance.trucks()[v].location;
    RequestId loaded = -1;
    for (std::size_t k = 0; k < route.size(); ++k) {
      const TaskId t = route[k];
      if (t < 0 || t >= ntasks) {
        issues.push_back(tag + ": unknown task id " + std::to_string(t));
        continue;
      }
      ++seen[t];
      const Task& task = plan.tasks[t];
      if (task.truck != static_cast<TruckId>(v)) issues.push_back(tag + ": task owned by another truck");
      if (task.origin != at) issues.push_back(tag + ": route breaks before t" + std::to_string(t));
      at = task.destination;
      if (k > 0) {
        const TaskId p = route[k - 1];
        if (p >= 0 && p < ntasks &&
            plan.tentative_start[p] + plan.tasks[p].duration > plan.tentative_start[t] + kTimeEps) {
          issues.push_back(tag + ": t" + std::to_string(p) + " overlaps t" + std::to_string(t));
        }
      }
      if (task.kind == TaskKind::Pickup && task.request >= 0 &&
          task.request < static_cast<int>(requests.size())) {
        if (loaded >= 0) issues.push_back(tag + ": picks up while loaded");
        loaded = task.request;
        ++picked[task.request];
      } else if (task.kind == TaskKind::Delivery && task.request >= 0 &&
                 task.request < static_cast<int>(requests.size())) {
        if (loaded != task.request) issues.push_back(tag + ": delivers a request it does not carry");
        loaded = -1;
        ++delivered[task.request];
      }
    }
    if (loaded >= 0) issues.push_back(tag + ": ends loaded");
  }
  for (TaskId t = 0; t < ntasks; ++t) {
    if (seen[t] != 1) issues.push_back("task t" + std::to_string(t) + " is not on exactly one truck");
  }
  for (std::size_t r = 0; r < requests.size(); ++r) {
    if (picked[r] != 1 || delivered[r] != 1) {
      issues.push_back("request " + requests[r].id + " is not served exactly once");
    }
    const int day = plan.delivery_day[r];
    if (day < requests[r].delivery_day || day >= instance.horizon_days()) {
      issues.push_back("request " + requests[r].id + " has an out-of-range delivery day");
    }
  }
  if (!issues.empty()) return issues;

  CrewProblem problem(instance, plan);
  for (TaskId t = 0; t < ntasks; ++t) {
    if (plan.tasks[t].kind != TaskKind::Trip && !problem.in_start_domain(t, plan.tentative_start[t])) {
      issues.push_back("task t" + std::to_string(t) + " starts outside its time window");
    }
  }
  return issues;
}

// --- CrewProblem ----------------------------------------------------------

CrewProblem::CrewProblem(std::shared_ptr<const Instance> instance,
                         std::shared_ptr<const TaskPlan> plan)
    : instance_(std::move(instance)), plan_(std::move(plan)) {
  init();
}

CrewProblem::CrewProblem(const Instance& instance, const TaskPlan& plan)
    : instance_(std::make_shared<const Instance>(instance)),
      plan_(std::make_shared<const TaskPlan>(plan)) {
  init();
}

void CrewProblem::init() {
  nloc_ = static_cast<int>(instance_->network().size());
  shuttle_time_.assign(static_cast<std::size_t>(nloc_ * nloc_), 0.0);
  shuttle_cost_.assign(static_cast<std::size_t>(nloc_ * nloc_), 0.0);
  for (LocationId a = 0; a < nloc_; ++a) {
    for (LocationId b = 0; b < nloc_; ++b) {
      if (a == b || !instance_->network().connected(a, b)) continue;
      shuttle_time_[a * nloc_ + b] = instance_->travel_time(a, b, TravelMode::Shuttle);
      shuttle_cost_[a * nloc_ + b] = instance_->shuttle_cost(a, b);
    }
  }
  truck_prev_.assign(plan_->tasks.size(), -1);
  truck_next_.assign(plan_->tasks.size(), -1);
  for (const auto& route : plan_->truck_routes) {
    for (std::size_t k = 1; k < route.size(); ++k) {
      truck_prev_[route[k]] = route[k - 1];
      truck_next_[route[k - 1]] = route[k];
    }
  }
}

std::vector<Interval> CrewProblem::start_domain(TaskId t) const {
  const Task& task = plan_->tasks[t];
  std::vector<Interval> out;
  if (task.kind == TaskKind::Trip) {
    out.push_back({0.0, horizon_hours() - task.duration});
    return out;
  }
  const Request& r = instance_->requests()[task.request];
  if (task.kind == TaskKind::Pickup) return daily_windows(r.pickup_day, horizon_days(), r.pickup_window);
  const int day = plan_->delivery_day[task.request];
  return daily_windows(day, day + 1, r.delivery_window);
}

bool CrewProblem::in_start_domain(TaskId t, Hours value) const {
  if (task(t).kind == TaskKind::Trip) return value >= -kTimeEps;
  return within(start_domain(t), value);
}

// --- driver timelines -----------------------------------------------------

bool is_driver_path(const CrewProblem& problem, std::span<const Hours> start,
                    std::span<const TaskId> route, LocationId driver_location) {
  LocationId at = driver_location;
  Hours free_at = 0.0;
  for (TaskId t : route) {
    if (t < 0 || t >= problem.num_tasks()) return false;
    const Task& task = problem.task(t);
    if (free_at + problem.shuttle_time(at, task.origin) > start[t] + kTimeEps) return false;
    free_at = start[t] + task.duration;
    at = task.destination;
  }
  return true;
}

std::vector<ShuttleLeg> shuttle_legs(const CrewProblem& problem, const Schedule& schedule,
                                     DriverId driver) {
  std::vector<ShuttleLeg> legs;
  LocationId at = problem.driver_location(driver);
  for (TaskId t : schedule.routes[driver]) {
    const Task& task = problem.task(t);
    if (at != task.origin) {
      const Hours s = schedule.start[t];
      legs.push_back({at, task.origin, s - problem.shuttle_time(at, task.origin), s});
    }
    at = task.destination;
  }
  return legs;
}

std::vector<Interval> work_intervals(const CrewProblem& problem, std::span<const Hours> start,
                                     std::span<const TaskId> route, LocationId driver_location) {
  std::vector<Interval> out;
  out.reserve(route.size() * 2);
  LocationId at = driver_location;
  for (TaskId t : route) {
    const Task& task = problem.task(t);
    const Hours s = start[t];
    if (at != task.origin) out.push_back({s - problem.shuttle_time(at, task.origin), s});
    out.push_back({s, s + task.duration});
    at = task.destination;
  }
  std::sort(out.begin(), out.end(),
            [](const Interval& a, const Interval& b) { return a.begin < b.begin; });
  return out;
}

namespace {

std::vector<Interval> checked_intervals(const CrewProblem& problem, const Schedule& schedule,
                                        DriverId driver) {
  const auto& route = schedule.routes.at(driver);
  if (!is_driver_path(problem, schedule.start, route, problem.driver_location(driver))) {
    throw ContractError("route of driver " + problem.driver_name(driver) +
                        " is not a valid driver path");
  }
  return work_intervals(problem, schedule.start, route, problem.driver_location(driver));
}

}  // namespace

std::vector<Hours> workload(const CrewProblem& problem, const Schedule& schedule, DriverId driver) {
  return sliding_workload(checked_intervals(problem, schedule, driver), problem.horizon_days());
}

std::vector<Violation> check_rest(const CrewProblem& problem, const Schedule& schedule,
                                  DriverId driver, Regulation regulation) {
  return rest_violations(checked_intervals(problem, schedule, driver), problem.horizon_days(),
                         regulation, problem.driver_name(driver));
}

double w_inf(const CrewProblem& problem, const Schedule& schedule, DriverId driver) {
  return evaluate_rest(checked_intervals(problem, schedule, driver), problem.horizon_days(),
                       Regulation::L1)
      .excess;
}

double w_inf(const CrewProblem& problem, const Schedule& schedule) {
  double total = 0.0;
  for (DriverId d = 0; d < problem.num_drivers(); ++d) total += w_inf(problem, schedule, d);
  return total;
}

// --- costs ----------------------------------------------------------------

Stage1Cost cost_stage1(const Instance& instance, const TaskPlan& plan, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw InputError("lambda must lie in [0, 1]");
  Stage1Cost cost;
  const auto& requests = instance.requests();
  for (std::size_t r = 0; r < requests.size(); ++r) {
    cost.z1 += requests[r].late_penalty * (plan.delivery_day.at(r) - requests[r].delivery_day);
  }
  for (const Task& task : plan.tasks) {
    if (task.kind == TaskKind::Trip) cost.z2 += instance.travel_dist(task.origin, task.destination);
  }
  cost.z12 = lambda * cost.z1 + (1.0 - lambda) * cost.z2;
  return cost;
}

double route_cost(const CrewProblem& problem, std::span<const TaskId> route,
                  LocationId driver_location) {
  double cost = 0.0;
  LocationId at = driver_location;
  for (TaskId t : route) {
    cost += problem.shuttle_cost(at, problem.task(t).origin);
    at = problem.task(t).destination;
  }
  return cost;
}

double cost_stage2(const CrewProblem& problem, const Schedule& schedule) {
  double total = 0.0;
  for (DriverId d = 0; d < problem.num_drivers(); ++d) {
    total += route_cost(problem, schedule.routes[d], problem.driver_location(d));
  }
  return total;
}

// --- validation -----------------------------------------------------------

std::vector<Violation> start_violations(const CrewProblem& problem, std::span<const Hours> start) {
  std::vector<Violation> out;
  const int ntasks = problem.num_tasks();
  if (static_cast<int>(start.size()) != ntasks) {
    out.push_back({ViolationKind::Precedence, "schedule", "start times do not match the task count"});
    return out;
  }
  for (TaskId t = 0; t < ntasks; ++t) {
    const Task& task = problem.task(t);
    const Hours s = start[t];
    const bool ok = std::isfinite(s) && problem.in_start_domain(t, s);
    if (!ok) {
      const ViolationKind kind = task.kind == TaskKind::Delivery ? ViolationKind::WindowDelivery
                                 : task.kind == TaskKind::Pickup ? ViolationKind::WindowPickup
                                                                 : ViolationKind::Precedence;
      out.push_back({kind, problem.task_name(t), "starts at " + fmt(s) + " outside its window"});
    }
  }
  const auto& trucks = problem.instance().trucks();
  for (std::size_t v = 0; v < problem.plan().truck_routes.size(); ++v) {
    const auto& route = problem.plan().truck_routes[v];
    for (std::size_t k = 1; k < route.size(); ++k) {
      const TaskId a = route[k - 1], b = route[k];
      const double slack = start[b] - (start[a] + problem.task(a).duration);
      if (slack < -kTimeEps) {
        out.push_back({ViolationKind::Precedence, trucks[v].id,
                       problem.task_name(a) + " ends after " + problem.task_name(b) + " starts",
                       -slack});
      }
    }
  }

  return out;
}

std::vector<Violation> validate(const CrewProblem& problem, const Schedule& schedule) {
  std::vector<Violation> out;
  const int ntasks = problem.num_tasks();
  if (static_cast<int>(schedule.start.size()) != ntasks) {
    out.push_back({ViolationKind::PathBreak, "schedule",
                   "start times given for " + std::to_string(schedule.start.size()) + " of " +
                       std::to_string(ntasks) + " tasks"});
    return out;
  }
  if (static_cast<int>(schedule.routes.size()) != problem.num_drivers()) {
    out.push_back({ViolationKind::PathBreak, "schedule",
                   "routes given for " + std::to_string(schedule.routes.size()) + " of " +
                       std::to_string(problem.num_drivers()) + " drivers"});
    return out;
  }

  {
    auto timing = start_violations(problem, schedule.start);
    out.insert(out.end(), timing.begin(), timing.end());
  }

  std::vector<int> cover(static_cast<std::size_t>(ntasks), 0);
  std::vector<bool> path_ok(static_cast<std::size_t>(problem.num_drivers()), true);
  for (DriverId d = 0; d < problem.num_drivers(); ++d) {
    const auto& route = schedule.routes[d];
    std::vector<TaskId> sorted;
    for (TaskId t : route) {
      if (t < 0 || t >= ntasks) {
        out.push_back({ViolationKind::PathBreak, problem.driver_name(d),
                       "unknown task id " + std::to_string(t)});
        path_ok[d] = false;
        continue;
      }
      sorted.push_back(t);
    }
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      out.push_back({ViolationKind::PathBreak, problem.driver_name(d), "visits a task twice"});
      path_ok[d] = false;
    }
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    for (TaskId t : sorted) ++cover[t];
    if (!path_ok[d]) continue;

    LocationId at = problem.driver_location(d);
    Hours free_at = 0.0;
    for (std::size_t k = 0; k < route.size(); ++k) {
      const TaskId t = route[k];
      const Task& task = problem.task(t);
      const Hours need = free_at + problem.shuttle_time(at, task.origin);
      if (need > schedule.start[t] + kTimeEps) {
        out.push_back({ViolationKind::PathBreak, problem.driver_name(d),
                       "cannot reach " + problem.task_name(t) + " by " + fmt(schedule.start[t]),
                       need - schedule.start[t]});
        path_ok[d] = false;
      }
      free_at = schedule.start[t] + task.duration;
      at = task.destination;
    }
  }

  for (TaskId t = 0; t < ntasks; ++t) {
    if (cover[t] < 1) {
      out.push_back({ViolationKind::CrewUnder, problem.task_name(t), "no driver", 0.0});
    } else if (cover[t] > 2) {
      out.push_back({ViolationKind::CrewOver, problem.task_name(t),
                     std::to_string(cover[t]) + " drivers", static_cast<double>(cover[t])});
    }
  }

  for (DriverId d = 0; d < problem.num_drivers(); ++d) {
    if (!path_ok[d]) continue;
    const auto intervals = work_intervals(problem, schedule.start, schedule.routes[d],
                                          problem.driver_location(d));
    auto rest = rest_violations(intervals, problem.horizon_days(), schedule.regulation,
                                problem.driver_name(d));
    out.insert(out.end(), rest.begin(), rest.end());
  }
  return out;
}

}  // namespace vrcsp
