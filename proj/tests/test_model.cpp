#include <cmath>
#include <limits>

#include "doctest.h"
#include "vrcsp/model.hpp"
#include "vrcsp/netgen.hpp"
#include "vrcsp/oracle.hpp"
#include "vrcsp/random.hpp"
#include "vrcsp/rest.hpp"

using namespace vrcsp;

namespace {

Instance chain_instance() {
  RoadNetwork net({"A", "B", "C"}, {{0, 1, 100.0}, {1, 2, 200.0}});
  return Instance(1, net, {}, {{"v0", 0}}, {{"d0", 0}});
}

// Floyd-Warshall over the edge list.
std::vector<double> all_pairs(const RoadNetwork& net) {
  const std::size_t n = net.size();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> d(n * n, inf);
  for (std::size_t i = 0; i < n; ++i) d[i * n + i] = 0.0;
  for (const RoadEdge& e : net.edges()) {
    d[e.from * n + e.to] = std::min(d[e.from * n + e.to], e.km);
    d[e.to * n + e.from] = std::min(d[e.to * n + e.from], e.km);
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        d[i * n + j] = std::min(d[i * n + j], d[i * n + k] + d[k * n + j]);
  return d;
}

std::vector<Interval> daily_block(int days, double from, double to) {
  std::vector<Interval> out;
  for (int day = 0; day < days; ++day) out.push_back({24.0 * day + from, 24.0 * day + to});
  return out;
}

}  // namespace

TEST_CASE("travel time is zero in place and follows the shortest path") {
  const Instance inst = chain_instance();
  CHECK(inst.travel_time(1, 1, TravelMode::Truck) == 0.0);
  CHECK(inst.travel_time(0, 2, TravelMode::Truck) == doctest::Approx(300.0 / 90.0));
  CHECK(inst.travel_time(0, 2, TravelMode::Shuttle) == doctest::Approx(300.0 / 90.0));
  CHECK(inst.shuttle_cost(0, 0) == 0.0);
  CHECK(inst.shuttle_cost(0, 1) == doctest::Approx(100.0 / 90.0 + 1.0));
}

TEST_CASE("network distances match an independent all-pairs recomputation") {
  const RoadNetwork def = default_network();
  auto ref = all_pairs(def);
  for (std::size_t a = 0; a < def.size(); ++a)
    for (std::size_t b = 0; b < def.size(); ++b)
      CHECK(def.distance(a, b) == doctest::Approx(ref[a * def.size() + b]));

  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Rng rng(seed);
    const int n = 15;
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) names.push_back("n" + std::to_string(i));
    std::vector<RoadEdge> edges;
    for (int i = 1; i < n; ++i) {
      edges.push_back({static_cast<int>(rng.uniform_int(0, i - 1)), i,
                       static_cast<double>(rng.uniform_int(10, 500))});
    }
    for (int k = 0; k < 10; ++k) {
      const int a = static_cast<int>(rng.uniform_int(0, n - 1));
      const int b = static_cast<int>(rng.uniform_int(0, n - 1));
      if (a != b) edges.push_back({a, b, static_cast<double>(rng.uniform_int(10, 500))});
    }
    RoadNetwork net(names, edges);
    ref = all_pairs(net);
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        REQUIRE(net.distance(a, b) == doctest::Approx(ref[a * n + b]));
        const auto path = net.path(a, b);
        double sum = 0.0;
        for (std::size_t k = 0; k + 1 < path.size(); ++k) {
          double best = std::numeric_limits<double>::infinity();
          for (const RoadEdge& e : edges) {
            if ((e.from == path[k] && e.to == path[k + 1]) || (e.to == path[k] && e.from == path[k + 1]))
              best = std::min(best, e.km);
          }
          sum += best;
        }
        CHECK(sum == doctest::Approx(ref[a * n + b]));
      }
    }
  }
}

TEST_CASE("instance constructor rejects bad data") {
  RoadNetwork net({"A", "B"}, {{0, 1, 90.0}});
  Request r{"r0", 0, 0, {0, 24}, {0, 24}, 0, 0, 1.0};
  CHECK_THROWS_AS(Instance(1, net, {r}, {{"v0", 0}}, {{"d0", 0}}), InputError);
  r.delivery_location = 1;
  CHECK_NOTHROW(Instance(1, net, {r}, {{"v0", 0}}, {{"d0", 0}}));
  CHECK_THROWS_AS(Instance(0, net, {r}, {{"v0", 0}}, {{"d0", 0}}), InputError);
  CHECK_THROWS_AS(Instance(1, net, {r}, {{"v0", 5}}, {{"d0", 0}}), InputError);
  r.pickup_window = {5, 3};
  CHECK_THROWS_AS(Instance(1, net, {r}, {{"v0", 0}}, {{"d0", 0}}), InputError);
}

TEST_CASE("regulation names") {
  CHECK(parse_regulation("L1") == Regulation::L1);
  CHECK(parse_regulation("l1+l3") == Regulation::L1L3);
  CHECK(parse_regulation("l1l2") == Regulation::L1L2);
  CHECK(to_string(Regulation::L1L3) == "l1l3");
  CHECK_THROWS_AS(parse_regulation("l4"), InputError);
}

TEST_CASE("whole-hour helpers") {
  const auto w = daily_windows(1, 3, {8, 10});
  REQUIRE(w.size() == 2);
  CHECK(w[0].begin == 32.0);
  CHECK(w[1].end == 58.0);
  CHECK(window_day(33.0, 1, 3, {8, 10}) == 1);
  CHECK(window_day(40.0, 1, 3, {8, 10}) == -1);
  CHECK(window_day(24.0, 0, 2, {20, 24}) == 0);
  CHECK(window_day(24.0, 0, 2, {0, 4}) == 1);
  CHECK(*first_hour_in(w, 33.5) == 34.0);
  CHECK(*first_hour_in(w, 35.0) == 56.0);
  CHECK_FALSE(first_hour_in(w, 59.0).has_value());
  CHECK(*last_hour_in(w, 55.0) == 34.0);
}

TEST_CASE("workload of an empty route is zero") {
  const CrewProblem p = fixtures::shuttle_day();
  Schedule s = fixtures::shuttle_day_schedule(p);
  s.routes[0].clear();
  for (Hours g : workload(p, s, 0)) CHECK(g == 0.0);
  CHECK(workload(p, s, 0).size() == 25u);
}

TEST_CASE("shuttle leg scheduled latest and counted as work") {
  const CrewProblem p = fixtures::shuttle_day();
  const Schedule s = fixtures::shuttle_day_schedule(p);
  const auto legs = shuttle_legs(p, s, 0);
  REQUIRE(legs.size() == 1);
  CHECK(legs[0].begin == doctest::Approx(34.0));
  CHECK(legs[0].end == doctest::Approx(40.0));
  const auto gamma = workload(p, s, 0);
  CHECK(gamma[24] == doctest::Approx(14.0));
  CHECK(gamma[23] == doctest::Approx(13.0));
  CHECK(w_inf(p, s) == doctest::Approx(3.0));

  const auto v = check_rest(p, s, 0, Regulation::L1);
  bool at24 = false;
  for (const auto& x : v) {
    CHECK(x.kind == ViolationKind::RestL1Daily);
    if (x.detail.find("[24,48]") != std::string::npos) {
      at24 = true;
      CHECK(x.amount == doctest::Approx(2.0));
    }
  }
  CHECK(at24);
}

TEST_CASE("single 14 h interval") {
  const std::vector<Interval> iv{{0, 14}};
  const auto g = sliding_workload(iv, 1);
  REQUIRE(g.size() == 1u);
  CHECK(g[0] == doctest::Approx(14.0));
}

TEST_CASE("12 h on six days with the seventh off satisfies L1") {
  const auto iv = daily_block(6, 0, 12);
  CHECK(rest_violations(iv, 7, Regulation::L1, "d").empty());
  CHECK(evaluate_rest(iv, 7, Regulation::L1).feasible());
  const auto seven = daily_block(7, 0, 12);
  const auto v = rest_violations(seven, 7, Regulation::L1, "d");
  REQUIRE(v.size() == 1u);
  CHECK(v[0].kind == ViolationKind::RestL1WeekOff);
  CHECK_FALSE(evaluate_rest(seven, 7, Regulation::L1).semi_feasible());
}

TEST_CASE("minimum rest between work periods") {
  const std::vector<Interval> ok{{0, 8}, {19, 22}};
  const std::vector<Interval> short_rest{{0, 8}, {18.5, 22}};
  const std::vector<Interval> touching{{0, 4}, {4, 8}};
  CHECK(rest_violations(ok, 1, Regulation::L1L3, "d").empty());
  const auto v = rest_violations(short_rest, 1, Regulation::L1L3, "d");
  REQUIRE(v.size() == 1u);
  CHECK(v[0].kind == ViolationKind::RestL3);
  CHECK(rest_violations(short_rest, 1, Regulation::L1, "d").empty());
  CHECK(evaluate_rest(touching, 1, Regulation::L1L3).gaps);
}

TEST_CASE("weekly cap") {
  const auto iv = daily_block(6, 0, 11);  // 66 h
  CHECK(evaluate_rest(iv, 7, Regulation::L1).feasible());
  CHECK_FALSE(evaluate_rest(iv, 7, Regulation::L1L2).weekly);
  const auto v = rest_violations(iv, 7, Regulation::L1L2, "d");
  REQUIRE(v.size() == 1u);
  CHECK(v[0].kind == ViolationKind::RestL2);
  CHECK(v[0].amount == doctest::Approx(6.0));
}

TEST_CASE("constant 13 h per window over a week") {
  const auto iv = daily_block(7, 0, 13);
  const RestStatus st = evaluate_rest(iv, 7, Regulation::L1);
  CHECK(st.excess == doctest::Approx(145.0));
  for (Hours g : sliding_workload(iv, 7)) CHECK(g == doctest::Approx(13.0));
}

TEST_CASE("excess equals an independent window scan on random timelines") {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    Rng rng(seed);
    const int H = static_cast<int>(rng.uniform_int(1, 3));
    std::vector<Interval> iv;
    double t = rng.uniform01() * 5;
    while (t < 24.0 * H) {
      const double len = 0.5 + rng.uniform01() * 8;
      iv.push_back({t, std::min(t + len, 24.0 * H)});
      t += len + rng.uniform01() * 10;
    }
    double expect = 0.0;
    for (int i = 0; i + 24 <= 24 * H; ++i) {
      double g = 0.0;
      for (const auto& x : iv) g += std::max(0.0, std::min(x.end, i + 24.0) - std::max(x.begin, double(i)));
      expect += std::max(0.0, g - 12.0);
    }
    CHECK(evaluate_rest(iv, H, Regulation::L1).excess == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("stage-2 cost on the two-city tasks") {
  const CrewProblem p = fixtures::two_city({0, 1});
  CHECK(route_cost(p, std::vector<TaskId>{0, 1, 3}, 0) == 0.0);
  CHECK(route_cost(p, std::vector<TaskId>{1}, 1) == doctest::Approx(4.0));
  Schedule s{p.plan().tentative_start, {{0, 1, 3}, {2}}, Regulation::L1};
  CHECK(cost_stage2(p, s) == 0.0);
  CHECK(validate(p, s).empty());

  const Instance empty(1, RoadNetwork({"a", "b"}, {{0, 1, 90}}), {}, {{"v0", 0}}, {{"d0", 0}});
  TaskPlan plan;
  plan.truck_routes = {{}};
  const CrewProblem none(empty, plan);
  CHECK(cost_stage2(none, Schedule{{}, {{}}, Regulation::L1}) == 0.0);
  CHECK(validate(none, Schedule{{}, {{}}, Regulation::L1}).empty());
}

TEST_CASE("stage-1 cost") {
  RoadNetwork net({"A", "B", "C"}, {{0, 1, 180.0}, {1, 2, 270.0}});
  Request r0{"r0", 1, 2, {0, 24}, {0, 24}, 0, 0, 2.0};
  Request r1{"r1", 2, 0, {0, 24}, {0, 24}, 0, 1, 3.0};
  const Instance inst(3, net, {r0, r1}, {{"v0", 0}}, {{"d0", 0}});
  TaskPlan plan;
  plan.tasks = {
      {TaskKind::Trip, 0, 1, 2, 0, -1},     {TaskKind::Pickup, 1, 1, 1, 0, 0},
      {TaskKind::Trip, 1, 2, 3, 0, -1},     {TaskKind::Delivery, 2, 2, 1, 0, 0},
      {TaskKind::Pickup, 2, 2, 1, 0, 1},    {TaskKind::Trip, 2, 1, 3, 0, -1},
      {TaskKind::Trip, 1, 0, 2, 0, -1},     {TaskKind::Delivery, 0, 0, 1, 0, 1},
  };
  plan.truck_routes = {{0, 1, 2, 3, 4, 5, 6, 7}};
  plan.tentative_start = {0, 2, 3, 6, 7, 8, 11, 30};
  plan.delivery_day = {0, 1};
  CHECK(check_plan(inst, plan).empty());
  auto c = cost_stage1(inst, plan, 0.25);
  CHECK(c.z1 == 0.0);
  CHECK(c.z2 == doctest::Approx(180 + 270 + 450));
  plan.delivery_day = {1, 2};
  plan.tentative_start = {0, 2, 3, 30, 31, 32, 35, 50};
  CHECK(check_plan(inst, plan).empty());
  c = cost_stage1(inst, plan, 0.25);
  CHECK(c.z1 == doctest::Approx(2.0 + 3.0));
  CHECK(cost_stage1(inst, plan, 0.0).z12 == doctest::Approx(c.z2));
  CHECK(cost_stage1(inst, plan, 1.0).z12 == doctest::Approx(c.z1));
  CHECK(c.z12 == doctest::Approx(0.25 * c.z1 + 0.75 * c.z2));
}

TEST_CASE("validate names crew and window breaches") {
  const CrewProblem p = fixtures::two_city({0, 0, 0, 1});
  Schedule s{p.plan().tentative_start, {{0, 1, 3}, {0}, {0}, {2}}, Regulation::L1};
  auto v = validate(p, s);
  int over = 0;
  for (const auto& x : v) over += x.kind == ViolationKind::CrewOver;
  CHECK(over == 1);
  CHECK(v.size() == 1u);

  Schedule shifted{p.plan().tentative_start, {{0, 1, 3}, {}, {}, {2}}, Regulation::L1};
  CHECK(validate(p, shifted).empty());
  shifted.start[0] += 24.0 - 2.0;
  v = validate(p, shifted);
  bool window = false;
  for (const auto& x : v) window = window || x.kind == ViolationKind::WindowPickup;
  CHECK(window);

  Schedule missing{p.plan().tentative_start, {{0, 1, 3}, {}, {}, {}}, Regulation::L1};
  v = validate(p, missing);
  REQUIRE(v.size() == 1u);
  CHECK(v[0].kind == ViolationKind::CrewUnder);
  CHECK(v[0].subject == "t2");

  Schedule broken{p.plan().tentative_start, {{0, 2}, {1, 3}, {}, {}}, Regulation::L1};
  v = validate(p, broken);
  bool path = false;
  for (const auto& x : v) path = path || x.kind == ViolationKind::PathBreak;
  CHECK(path);
  CHECK_NOTHROW(validate(p, Schedule{{1.0}, {{7}}, Regulation::L1}));
}
