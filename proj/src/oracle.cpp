#include "vrcsp/oracle.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <numeric>

#include "vrcsp/random.hpp"
#include "vrcsp/rest.hpp"
#include "vrcsp/stage1.hpp"
#include "vrcsp/taskgraph.hpp"

namespace vrcsp {

namespace {

// Whole hours in [lo, hi] that lie in the start domain of t.
std::vector<Hours> grid_values(const CrewProblem& problem, TaskId t, double lo, double hi) {
  std::vector<Hours> out;
  for (const Interval& iv : problem.start_domain(t)) {
    const double a = std::max(ceil_hour(lo), ceil_hour(iv.begin));
    const double b = std::min(floor_hour(hi), floor_hour(iv.end));
    for (double v = a; v <= b; v += 1.0) out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// All start vectors of one truck chain, stopping once `cap` is exceeded.
std::vector<std::vector<Hours>> chain_starts(const CrewProblem& problem,
                                             const std::vector<TaskId>& chain, long cap) {
  std::vector<std::vector<Hours>> out;
  std::vector<Hours> current;
  std::function<void(std::size_t, Hours)> rec = [&](std::size_t k, Hours ready) {
    if (static_cast<long>(out.size()) > cap) return;
    if (k == chain.size()) {
      out.push_back(current);
      return;
    }
    for (Hours v : grid_values(problem, chain[k], ready, problem.horizon_hours())) {
      current.push_back(v);
      rec(k + 1, v + problem.task(chain[k]).duration);
      current.pop_back();
    }
  };
  rec(0, 0.0);
  return out;
}

class CrewSearch {
 public:
  CrewSearch(const CrewProblem& problem, Regulation regulation, int crew_max)
      : p_(problem), regulation_(regulation), crew_max_(crew_max) {}

  // Improves `best` (shared across start vectors) when this start vector
  // admits a cheaper schedule.
  void run(const std::vector<Hours>& start, double& best, std::optional<Schedule>& best_schedule) {
    start_ = &start;
    order_.resize(static_cast<std::size_t>(p_.num_tasks()));
    std::iota(order_.begin(), order_.end(), 0);
    std::stable_sort(order_.begin(), order_.end(),
                     [&](TaskId a, TaskId b) { return start[a] < start[b]; });
    routes_.assign(static_cast<std::size_t>(p_.num_drivers()), {});
    best_ = &best;
    best_schedule_ = &best_schedule;
    dfs(0, 0.0);
  }

 private:
  void dfs(std::size_t k, double cost) {
    if (cost >= *best_ - 1e-9) return;
    if (k == order_.size()) {
      *best_ = cost;
      *best_schedule_ = Schedule{*start_, routes_, regulation_};
      return;
    }
    const TaskId t = order_[k];
    struct Option {
      DriverId d;
      double w;
      DriverId twin_of;  // second idle driver at a location: only joins its twin
    };
    std::vector<Option> options;
    for (DriverId d = 0; d < p_.num_drivers(); ++d) {
      // Idle drivers sharing a start location are interchangeable: offer the
      // first one alone and the first two together.
      DriverId twin_of = -1;
      if (routes_[d].empty()) {
        int earlier = 0;
        for (DriverId e = 0; e < d; ++e) {
          if (routes_[e].empty() && p_.driver_location(e) == p_.driver_location(d)) {
            if (earlier++ == 0) twin_of = e;
          }
        }
        if (earlier > 1) continue;
      }
      const Node last = routes_[d].empty() ? Node::source(p_.driver_location(d)) : Node::task(routes_[d].back());
      if (auto w = arc_exists(p_, *start_, last, Node::task(t))) options.push_back({d, *w, twin_of});
    }
    std::stable_sort(options.begin(), options.end(),
                     [](const Option& a, const Option& b) { return a.w < b.w; });

    const auto feasible = [&](DriverId d) {
      return evaluate_rest(work_intervals(p_, *start_, routes_[d], p_.driver_location(d)),
                           p_.horizon_days(), regulation_)
          .feasible();
    };
    for (std::size_t i = 0; i < options.size(); ++i) {
      const Option& a = options[i];
      if (a.twin_of >= 0) continue;
      routes_[a.d].push_back(t);
      if (feasible(a.d)) {
        dfs(k + 1, cost + a.w);
        if (crew_max_ >= 2) {
          for (std::size_t j = i + 1; j < options.size(); ++j) {
            const Option& b = options[j];
            if (b.twin_of >= 0 && b.twin_of != a.d) continue;
            routes_[b.d].push_back(t);
            if (feasible(b.d)) dfs(k + 1, cost + a.w + b.w);
            routes_[b.d].pop_back();
          }
        }
      }
      routes_[a.d].pop_back();
      if (*best_ <= 0.0) return;
    }
  }

  const CrewProblem& p_;
  Regulation regulation_;
  int crew_max_;
  const std::vector<Hours>* start_ = nullptr;
  std::vector<TaskId> order_;
  std::vector<std::vector<TaskId>> routes_;
  double* best_ = nullptr;
  std::optional<Schedule>* best_schedule_ = nullptr;
};

}  // namespace

long count_start_combinations(const CrewProblem& problem, long cap) {
  long total = 1;
  for (const auto& chain : problem.plan().truck_routes) {
    const long n = static_cast<long>(chain_starts(problem, chain, cap).size());
    if (n == 0) return 0;
    if (total > cap / n) return cap + 1;
    total *= n;
  }
  return total;
}

Stage2Optimum brute_stage2(const CrewProblem& problem, Regulation regulation, int crew_max,
                           const OracleLimits& limits) {
  if (problem.num_tasks() > limits.max_tasks || problem.num_drivers() > limits.max_drivers) {
    throw InputError("instance too large for exhaustive search");
  }
  if (crew_max != 1 && crew_max != 2) throw InputError("crew size must be 1 or 2");
  const long combos = count_start_combinations(problem, limits.max_start_combinations);
  if (combos > limits.max_start_combinations) {
    throw InputError("start-time grid too large for exhaustive search");
  }

  std::vector<std::vector<std::vector<Hours>>> per_truck;
  for (const auto& chain : problem.plan().truck_routes) {
    per_truck.push_back(chain_starts(problem, chain, limits.max_start_combinations));
  }

  Stage2Optimum out;
  out.start_combinations = combos;
  double best = std::numeric_limits<double>::infinity();
  std::optional<Schedule> best_schedule;
  CrewSearch search(problem, regulation, crew_max);
  std::vector<Hours> start(static_cast<std::size_t>(problem.num_tasks()), 0.0);

  std::function<void(std::size_t)> rec = [&](std::size_t v) {
    if (best <= 0.0) return;
    if (v == per_truck.size()) {
      search.run(start, best, best_schedule);
      return;
    }
    const auto& chain = problem.plan().truck_routes[v];
    for (const auto& values : per_truck[v]) {
      for (std::size_t k = 0; k < chain.size(); ++k) start[chain[k]] = values[k];
      rec(v + 1);
    }
  };
  if (combos > 0) rec(0);
  if (best_schedule) {
    out.z3 = best;
    out.schedule = std::move(best_schedule);
  }
  return out;
}

Stage1Optimum brute_stage1(const Instance& instance, double lambda) {
  const auto& requests = instance.requests();
  const auto& trucks = instance.trucks();
  const int R = static_cast<int>(requests.size());
  const int V = static_cast<int>(trucks.size());
  if (R > 4 || V > 3) throw InputError("instance too large for exhaustive search");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw InputError("lambda must lie in [0, 1]");
  const int H = instance.horizon_days();
  const double inf = std::numeric_limits<double>::infinity();

  struct Best {
    double z12 = std::numeric_limits<double>::infinity();
    double z1 = 0.0, z2 = 0.0;
  };
  // Best order for every (truck, request subset).
  std::vector<std::vector<Best>> table(V, std::vector<Best>(1u << R));
  for (int v = 0; v < V; ++v) {
    for (unsigned mask = 0; mask < (1u << R); ++mask) {
      std::vector<int> order;
      for (int r = 0; r < R; ++r) {
        if (mask & (1u << r)) order.push_back(r);
      }
      Best& cell = table[v][mask];
      do {
        LocationId at = trucks[v].location;
        Hours ready = 0.0;
        double z1 = 0.0, z2 = 0.0;
        bool ok = true;
        for (int r : order) {
          const Request& q = requests[r];
          const auto pickup = first_hour_in(daily_windows(q.pickup_day, H, q.pickup_window),
                                            ready + instance.travel_time(at, q.pickup_location, TravelMode::Truck));
          if (!pickup) {
            ok = false;
            break;
          }
          const auto delivery = first_hour_in(
              daily_windows(q.delivery_day, H, q.delivery_window),
              *pickup + kServiceHours +
                  instance.travel_time(q.pickup_location, q.delivery_location, TravelMode::Truck));
          if (!delivery) {
            ok = false;
            break;
          }
          const int day = window_day(*delivery, q.delivery_day, H, q.delivery_window);
          z1 += q.late_penalty * (day - q.delivery_day);
          z2 += instance.travel_dist(at, q.pickup_location) +
                instance.travel_dist(q.pickup_location, q.delivery_location);
          ready = *delivery + kServiceHours;
          at = q.delivery_location;
        }
        if (!ok) continue;
        const double z12 = lambda * z1 + (1.0 - lambda) * z2;
        if (z12 < cell.z12) cell = {z12, z1, z2};
      } while (std::next_permutation(order.begin(), order.end()));
    }
  }

  Stage1Optimum out;
  double best = inf;
  std::vector<int> owner(static_cast<std::size_t>(R), 0);
  long total = 1;
  for (int r = 0; r < R; ++r) total *= V;
  for (long code = 0; code < total; ++code) {
    long c = code;
    std::vector<unsigned> masks(static_cast<std::size_t>(V), 0);
    for (int r = 0; r < R; ++r) {
      masks[c % V] |= 1u << r;
      c /= V;
    }
    double z12 = 0.0, z1 = 0.0, z2 = 0.0;
    for (int v = 0; v < V; ++v) {
      z12 += table[v][masks[v]].z12;
      z1 += table[v][masks[v]].z1;
      z2 += table[v][masks[v]].z2;
    }
    if (z12 < best) {
      best = z12;
      out.z12 = z12;
      out.z1 = z1;
      out.z2 = z2;
    }
  }
  return out;
}

CrewProblem make_tiny_case(std::uint64_t seed) {
  for (std::uint64_t attempt = 0;; ++attempt) {
    Rng rng(seed * 7919 + attempt);
    const int nloc = static_cast<int>(rng.uniform_int(3, 4));
    std::vector<std::string> names;
    for (int l = 0; l < nloc; ++l) names.push_back("c" + std::to_string(l));
    std::vector<RoadEdge> edges;
    for (int a = 0; a < nloc; ++a) {
      for (int b = a + 1; b < nloc; ++b) {
        edges.push_back({a, b, 45.0 * static_cast<double>(rng.uniform_int(2, 8))});
      }
    }
    RoadNetwork net(names, edges);
    const int H = static_cast<int>(rng.uniform_int(1, 2));
    const int nreq = static_cast<int>(rng.uniform_int(1, 2));
    const int ntruck = static_cast<int>(rng.uniform_int(1, 2));
    const int ndriver = static_cast<int>(rng.uniform_int(2, 4));

    std::vector<Request> requests;
    bool ok = true;
    for (int k = 0; k < nreq && ok; ++k) {
      Request r;
      r.id = "r" + std::to_string(k);
      r.pickup_location = static_cast<LocationId>(rng.uniform_int(0, nloc - 1));
      do {
        r.delivery_location = static_cast<LocationId>(rng.uniform_int(0, nloc - 1));
      } while (r.delivery_location == r.pickup_location);
      r.pickup_day = static_cast<int>(rng.uniform_int(0, H - 1));
      const double open = static_cast<double>(rng.uniform_int(2, 12));
      r.pickup_window = {open, open + static_cast<double>(rng.uniform_int(0, 2))};
      const double travel = std::ceil(net.distance(r.pickup_location, r.delivery_location) / 90.0);
      double dopen = open + 1.0 + travel + static_cast<double>(rng.uniform_int(0, 3));
      r.delivery_day = r.pickup_day;
      if (dopen > 22.0) {
        if (r.delivery_day + 1 >= H) {
          ok = false;
          break;
        }
        ++r.delivery_day;
        dopen -= 24.0;
        dopen = std::max(dopen, 0.0);
      }
      r.delivery_window = {dopen, std::min(24.0, dopen + static_cast<double>(rng.uniform_int(0, 2)))};
      requests.push_back(r);
    }
    if (!ok) continue;

    std::vector<Truck> trucks;
    for (int k = 0; k < ntruck; ++k) {
      const LocationId l = rng.bernoulli(0.5)
                               ? requests[rng.index(requests.size())].pickup_location
                               : static_cast<LocationId>(rng.uniform_int(0, nloc - 1));
      trucks.push_back({"v" + std::to_string(k), l});
    }
    std::vector<Driver> drivers;
    for (int k = 0; k < ndriver; ++k) {
      const LocationId l = k < ntruck && rng.bernoulli(0.8)
                               ? trucks[k].location
                               : static_cast<LocationId>(rng.uniform_int(0, nloc - 1));
      drivers.push_back({"d" + std::to_string(k), l});
    }

    Instance instance(H, net, requests, trucks, drivers);
    TaskPlan plan;
    try {
      plan = route_trucks(instance, 0.25, 0.2, seed + attempt);
    } catch (const InfeasibleError&) {
      continue;
    }
    if (plan.tasks.size() > 8) continue;
    CrewProblem problem(instance, plan);
    if (count_start_combinations(problem, 3000) > 3000) continue;
    return problem;
  }
}

// --- fixtures -------------------------------------------------------------

namespace fixtures {

namespace {

Task trip(LocationId from, LocationId to, Hours duration, TruckId truck) {
  return {TaskKind::Trip, from, to, duration, truck, -1};
}

// One truck per task, starting where its task starts.
CrewProblem single_task_trucks(int horizon, RoadNetwork net, std::vector<Request> requests,
                               std::vector<Task> tasks, std::vector<Hours> start,
                               std::vector<int> delivery_day, std::vector<LocationId> drivers) {
  std::vector<Truck> trucks;
  TaskPlan plan;
  for (std::size_t k = 0; k < tasks.size(); ++k) {
    trucks.push_back({"v" + std::to_string(k), tasks[k].origin});
    tasks[k].truck = static_cast<TruckId>(k);
    plan.truck_routes.push_back({static_cast<TaskId>(k)});
  }
  std::vector<Driver> crew;
  for (std::size_t k = 0; k < drivers.size(); ++k) crew.push_back({"d" + std::to_string(k), drivers[k]});
  plan.tasks = std::move(tasks);
  plan.tentative_start = std::move(start);
  plan.delivery_day = std::move(delivery_day);
  Instance instance(horizon, std::move(net), std::move(requests), std::move(trucks), std::move(crew));
  return CrewProblem(instance, plan);
}

}  // namespace

CrewProblem two_city(const std::vector<LocationId>& driver_locations) {
  RoadNetwork net({"l1", "l2"}, {{0, 1, 270.0}});
  Request r0{"r0", 0, 1, {0, 2}, {4, 6}, 0, 0, 1.0};
  Request r1{"r1", 1, 0, {8, 9}, {20, 24}, 0, 0, 1.0};
  std::vector<Task> tasks = {
      {TaskKind::Pickup, 0, 0, 1.0, 0, 0},
      trip(0, 1, 3.0, 0),
      {TaskKind::Delivery, 1, 1, 1.0, 0, 0},
      {TaskKind::Pickup, 1, 1, 1.0, 0, 1},
  };
  return single_task_trucks(1, std::move(net), {r0, r1}, std::move(tasks), {1, 3, 4, 8}, {0, 0},
                            driver_locations);
}

CrewProblem shuttle_day() {
  RoadNetwork net({"a", "b", "c", "d"}, {{0, 1, 720.0}, {1, 2, 540.0}, {2, 3, 720.0}});
  return single_task_trucks(2, std::move(net), {}, {trip(0, 1, 8.0, 0), trip(2, 3, 8.0, 0)},
                            {0, 40}, {}, {0});
}

Schedule shuttle_day_schedule(const CrewProblem& problem) {
  return Schedule{problem.plan().tentative_start, {{0, 1}}, Regulation::L1};
}

CrewProblem missing_trip() {
  RoadNetwork net({"l0", "l1", "l2", "l3"}, {{0, 1, 360.0}, {1, 2, 540.0}, {2, 3, 630.0}});
  return single_task_trucks(2, std::move(net), {},
                            {trip(0, 1, 4.0, 0), trip(1, 2, 6.0, 0), trip(2, 3, 7.0, 0)}, {0, 10, 30},
                            {}, {0, 1});
}

Schedule missing_trip_schedule(const CrewProblem& problem) {
  return Schedule{problem.plan().tentative_start, {{0, 2}, {1}}, Regulation::L1};
}

CrewProblem overworked() {
  RoadNetwork net({"a", "b"}, {{0, 1, 1170.0}});
  return single_task_trucks(1, std::move(net), {}, {trip(0, 1, 13.0, 0)}, {0}, {}, {0});
}

CrewProblem relay() {
  RoadNetwork net({"A", "B", "C"}, {{0, 1, 450.0}, {1, 2, 450.0}});
  return single_task_trucks(1, std::move(net), {},
                            {trip(0, 1, 5.0, 0), trip(1, 2, 5.0, 0), trip(1, 0, 5.0, 0)}, {0, 5, 5}, {},
                            {0, 0});
}

}  // namespace fixtures

}  // namespace vrcsp
