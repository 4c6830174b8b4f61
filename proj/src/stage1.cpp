#include "vrcsp/stage1.hpp"

#include <algorithm>
#include <limits>

#include "vrcsp/random.hpp"

namespace vrcsp {

namespace {

struct TruckState {
  LocationId at;
  Hours free_at = 0.0;
};

// Timing of one request appended to one truck.
struct Insertion {
  TruckId truck = 0;
  double cost = 0.0;
  std::vector<Task> dead, loaded;
  std::vector<Hours> dead_latest, loaded_latest;
  Hours pickup = 0.0, delivery = 0.0;
};

// Latest whole-hour starts of a trip chain that must end by `deadline`.
std::vector<Hours> latest_starts(const std::vector<Task>& trips, Hours deadline) {
  std::vector<Hours> out(trips.size());
  Hours next = deadline;
  for (std::size_t k = trips.size(); k-- > 0;) {
    out[k] = floor_hour(next - trips[k].duration);
    next = out[k];
  }
  return out;
}

std::optional<Insertion> evaluate(const Instance& instance, const Request& r, TruckId v,
                                  const TruckState& state, double lambda) {
  Insertion ins;
  ins.truck = v;
  ins.dead = trips_along(instance, state.at, r.pickup_location, v);
  ins.loaded = trips_along(instance, r.pickup_location, r.delivery_location, v);
  const int H = instance.horizon_days();
  const auto pickup_domain = daily_windows(r.pickup_day, H, r.pickup_window);
  const auto delivery_domain = daily_windows(r.delivery_day, H, r.delivery_window);

  Hours t = state.free_at;
  for (const Task& trip : ins.dead) t = ceil_hour(t) + trip.duration;
  const auto earliest_pickup = first_hour_in(pickup_domain, t);
  if (!earliest_pickup) return std::nullopt;
  t = *earliest_pickup + kServiceHours;
  for (const Task& trip : ins.loaded) t = ceil_hour(t) + trip.duration;
  const auto delivery = first_hour_in(delivery_domain, t);
  if (!delivery) return std::nullopt;
  ins.delivery = *delivery;

  // Pickup as close to the delivery as the windows allow.
  ins.loaded_latest = latest_starts(ins.loaded, ins.delivery);
  const Hours loaded_from = ins.loaded.empty() ? ins.delivery : ins.loaded_latest.front();
  const auto pickup = last_hour_in(pickup_domain, loaded_from - kServiceHours);
  ins.pickup = pickup ? std::max(*pickup, *earliest_pickup) : *earliest_pickup;
  ins.dead_latest = latest_starts(ins.dead, ins.pickup);

  const int day = window_day(ins.delivery, r.delivery_day, H, r.delivery_window);
  const double km = instance.travel_dist(state.at, r.pickup_location) +
                    instance.travel_dist(r.pickup_location, r.delivery_location);
  ins.cost = lambda * r.late_penalty * (day - r.delivery_day) + (1.0 - lambda) * km;
  return ins;
}

}  // namespace

std::vector<Task> trips_along(const Instance& instance, LocationId from, LocationId to,
                              TruckId truck) {
  std::vector<Task> out;
  if (from == to) return out;
  const auto path = instance.network().path(from, to);
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    Task trip;
    trip.kind = TaskKind::Trip;
    trip.origin = path[k];
    trip.destination = path[k + 1];
    trip.duration = instance.travel_time(path[k], path[k + 1], TravelMode::Truck);
    trip.truck = truck;
    out.push_back(trip);
  }
  return out;
}

TaskPlan route_trucks(const Instance& instance, const RouteOptions& options) {
  if (!(options.lambda >= 0.0 && options.lambda <= 1.0)) {
    throw InputError("lambda must lie in [0, 1]");
  }
  if (!(options.alpha1 >= 0.0 && options.alpha1 <= 1.0)) {
    throw InputError("alpha1 must lie in [0, 1]");
  }
  Rng rng(options.seed);
  const auto& requests = instance.requests();
  const auto& trucks = instance.trucks();

  std::vector<RequestId> order(requests.size());
  for (std::size_t r = 0; r < order.size(); ++r) order[r] = static_cast<RequestId>(r);
  rng.shuffle(order);
  std::stable_sort(order.begin(), order.end(), [&](RequestId a, RequestId b) {
    return requests[a].delivery_day < requests[b].delivery_day;
  });

  std::vector<TruckState> state;
  for (const Truck& v : trucks) state.push_back({v.location, 0.0});

  TaskPlan plan;
  plan.truck_routes.assign(trucks.size(), {});
  plan.delivery_day.assign(requests.size(), 0);

  const auto append = [&plan](const Task& task, Hours start) {
    plan.tasks.push_back(task);
    plan.tentative_start.push_back(start);
    const auto id = static_cast<TaskId>(plan.tasks.size() - 1);
    plan.truck_routes[task.truck].push_back(id);
  };

  for (RequestId rid : order) {
    const Request& r = requests[rid];
    std::vector<Insertion> candidates;
    for (std::size_t v = 0; v < trucks.size(); ++v) {
      if (auto ins = evaluate(instance, r, static_cast<TruckId>(v), state[v], options.lambda)) {
        candidates.push_back(std::move(*ins));
      }
    }
    if (candidates.empty()) {
      throw InfeasibleError("no truck can serve request '" + r.id + "' within the horizon");
    }
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const Insertion& c : candidates) {
      lo = std::min(lo, c.cost);
      hi = std::max(hi, c.cost);
    }
    std::vector<std::size_t> rcl;
    for (std::size_t k = 0; k < candidates.size(); ++k) {
      if (candidates[k].cost <= lo + options.alpha1 * (hi - lo) + 1e-9) rcl.push_back(k);
    }
    Insertion& pick = candidates[rcl[rng.index(rcl.size())]];
    TruckState& truck = state[pick.truck];

    // Trip starts are drawn uniformly from their synchronisation slack.
    Hours t = truck.free_at;
    for (std::size_t k = 0; k < pick.dead.size(); ++k) {
      const auto s = static_cast<Hours>(rng.uniform_int(static_cast<std::int64_t>(ceil_hour(t)),
                                                        static_cast<std::int64_t>(pick.dead_latest[k])));
      append(pick.dead[k], s);
      t = s + pick.dead[k].duration;
    }
    Task pickup{TaskKind::Pickup, r.pickup_location, r.pickup_location, kServiceHours, pick.truck, rid};
    append(pickup, pick.pickup);
    t = pick.pickup + kServiceHours;
    for (std::size_t k = 0; k < pick.loaded.size(); ++k) {
      const auto s = static_cast<Hours>(rng.uniform_int(static_cast<std::int64_t>(ceil_hour(t)),
                                                        static_cast<std::int64_t>(pick.loaded_latest[k])));
      append(pick.loaded[k], s);
      t = s + pick.loaded[k].duration;
    }
    Task delivery{TaskKind::Delivery, r.delivery_location, r.delivery_location, kServiceHours,
                  pick.truck, rid};
    append(delivery, pick.delivery);
    plan.delivery_day[rid] =
        window_day(pick.delivery, r.delivery_day, instance.horizon_days(), r.delivery_window);
    truck.at = r.delivery_location;
    truck.free_at = pick.delivery + kServiceHours;
  }

  // Renumber so that each truck's tasks are contiguous and in route order.
  TaskPlan out;
  out.delivery_day = plan.delivery_day;
  out.truck_routes.assign(trucks.size(), {});
  for (std::size_t v = 0; v < trucks.size(); ++v) {
    for (TaskId t : plan.truck_routes[v]) {
      out.truck_routes[v].push_back(static_cast<TaskId>(out.tasks.size()));
      out.tasks.push_back(plan.tasks[t]);
      out.tentative_start.push_back(plan.tentative_start[t]);
    }
  }
  return out;
}

Segmentation segment(const TaskPlan& plan) {
  Segmentation out;
  out.request.assign(plan.tasks.size(), -1);
  for (std::size_t t = 0; t < plan.tasks.size(); ++t) {
    const Task& task = plan.tasks[t];
    const auto id = static_cast<TaskId>(t);
    switch (task.kind) {
      case TaskKind::Pickup: out.pickups.push_back(id); break;
      case TaskKind::Delivery: out.deliveries.push_back(id); break;
      case TaskKind::Trip: out.trips.push_back(id); break;
    }
    if (task.kind != TaskKind::Trip) out.request[t] = task.request;
  }
  return out;
}

}  // namespace vrcsp
