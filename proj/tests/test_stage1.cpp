#include "doctest.h"
#include "vrcsp/netgen.hpp"
#include "vrcsp/oracle.hpp"
#include "vrcsp/stage1.hpp"

using namespace vrcsp;

namespace {

// l0 - l1 - l2 - l3 in a line, 180 km per edge.
RoadNetwork line() {
  return RoadNetwork({"l0", "l1", "l2", "l3"}, {{0, 1, 180.0}, {1, 2, 180.0}, {2, 3, 180.0}});
}

}  // namespace

TEST_CASE("request segmented into deadhead, pickup, loaded trip, delivery") {
  Request r{"r0", 1, 2, {0, 24}, {0, 24}, 0, 0, 1.0};
  const Instance inst(1, line(), {r}, {{"v0", 0}}, {{"d0", 0}});
  const TaskPlan plan = route_trucks(inst, 0.25, 0.2, 1);
  REQUIRE(plan.tasks.size() == 4u);
  CHECK(plan.tasks[0].kind == TaskKind::Trip);
  CHECK(plan.tasks[0].origin == 0);
  CHECK(plan.tasks[0].destination == 1);
  CHECK(plan.tasks[1].kind == TaskKind::Pickup);
  CHECK(plan.tasks[2].kind == TaskKind::Trip);
  CHECK(plan.tasks[2].origin == 1);
  CHECK(plan.tasks[2].destination == 2);
  CHECK(plan.tasks[3].kind == TaskKind::Delivery);
  CHECK(check_plan(inst, plan).empty());
}

TEST_CASE("truck already at the pickup location needs no leading trip") {
  Request r{"r0", 1, 2, {0, 24}, {0, 24}, 0, 0, 1.0};
  const Instance inst(1, line(), {r}, {{"v0", 1}}, {{"d0", 0}});
  const TaskPlan plan = route_trucks(inst, 0.25, 0.2, 1);
  REQUIRE(plan.tasks.size() == 3u);
  CHECK(plan.tasks[0].kind == TaskKind::Pickup);
}

TEST_CASE("loaded leg follows the shortest path edge by edge") {
  const Instance inst(1, line(), {}, {{"v0", 0}}, {{"d0", 0}});
  const auto trips = trips_along(inst, 1, 3, 0);
  REQUIRE(trips.size() == 2u);
  CHECK(trips[0].origin == 1);
  CHECK(trips[0].destination == 2);
  CHECK(trips[1].origin == 2);
  CHECK(trips[1].destination == 3);
  CHECK(trips[0].duration == doctest::Approx(2.0));
  CHECK(trips_along(inst, 2, 2, 0).empty());

  Request r{"r0", 1, 3, {0, 24}, {0, 24}, 0, 0, 1.0};
  const Instance one(1, line(), {r}, {{"v0", 1}, {"v1", 3}}, {{"d0", 0}});
  const TaskPlan plan = route_trucks(one, 0.25, 0.0, 1);
  const Segmentation seg = segment(plan);
  CHECK(seg.pickups.size() == 1u);
  CHECK(seg.deliveries.size() == 1u);
  CHECK(seg.trips.size() == 2u);
  CHECK(seg.request[seg.pickups[0]] == 0);
  CHECK(seg.request[seg.trips[0]] == -1);
  CHECK(plan.truck_routes[1].empty());
  for (TaskId t : seg.pickups) CHECK(plan.tasks[t].duration == 1.0);
  for (TaskId t : seg.deliveries) CHECK(plan.tasks[t].duration == 1.0);
}

TEST_CASE("late delivery moves to a later day and is charged") {
  // 6 h of driving cannot make the same-day window [2,4] after a pickup at 0.
  Request r{"r0", 0, 3, {0, 0}, {2, 4}, 0, 0, 3.0};
  const Instance inst(2, line(), {r}, {{"v0", 0}}, {{"d0", 0}});
  const TaskPlan plan = route_trucks(inst, 0.5, 0.2, 1);
  CHECK(plan.delivery_day[0] == 1);
  const Stage1Cost c = cost_stage1(inst, plan, 0.5);
  CHECK(c.z1 == doctest::Approx(3.0));
  CHECK(c.z2 == doctest::Approx(540.0));
  CHECK(check_plan(inst, plan).empty());
}

TEST_CASE("request that fits no truck is reported") {
  Request r{"r0", 0, 3, {0, 0}, {2, 4}, 0, 0, 3.0};
  const Instance inst(1, line(), {r}, {{"v0", 0}}, {{"d0", 0}});
  CHECK_THROWS_AS(route_trucks(inst, 0.25, 0.2, 1), InfeasibleError);
  CHECK_THROWS_AS(route_trucks(inst, 1.5, 0.2, 1), InputError);
}

TEST_CASE("generated plans satisfy every plan invariant") {
  int routed = 0;
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    GenParams p;
    p.seed = seed;
    p.num_requests = 15;
    p.num_trucks = 6;
    const Instance inst = generate(p, default_network());
    try {
      const TaskPlan plan = route_trucks(inst, 0.25, 0.2, seed);
      ++routed;
      CHECK(check_plan(inst, plan).empty());
      const CrewProblem problem(inst, plan);
      CHECK(start_violations(problem, plan.tentative_start).empty());
      CHECK(route_trucks(inst, 0.25, 0.2, seed) == plan);
    } catch (const InfeasibleError&) {
    }
  }
  CHECK(routed >= 20);
}

TEST_CASE("heuristic never beats the exhaustive optimum") {
  int compared = 0;
  for (std::uint64_t seed = 1; compared < 100 && seed < 400; ++seed) {
    GenParams p;
    p.seed = seed;
    p.horizon_days = 7;
    p.num_requests = 2;
    p.num_trucks = 2;
    p.num_drivers = 2;
    const Instance inst = generate(p, default_network());
    TaskPlan plan;
    try {
      plan = route_trucks(inst, 0.25, 0.2, seed);
    } catch (const InfeasibleError&) {
      continue;
    }
    const Stage1Optimum opt = brute_stage1(inst, 0.25);
    REQUIRE(opt.z12);
    CHECK(cost_stage1(inst, plan, 0.25).z12 >= *opt.z12 - 1e-9);
    ++compared;
  }
  CHECK(compared == 100);
}
