#include <set>

#include "doctest.h"
#include "vrcsp/netgen.hpp"
#include "vrcsp/oracle.hpp"
#include "vrcsp/stage1.hpp"
#include "vrcsp/stage2.hpp"

using namespace vrcsp;

namespace {

// One task per truck; drivers at the given locations.
CrewProblem trips_problem(int horizon, RoadNetwork net, std::vector<Task> tasks, std::vector<Hours> start,
                          std::vector<LocationId> drivers) {
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
  return CrewProblem(Instance(horizon, std::move(net), {}, std::move(trucks), std::move(crew)), plan);
}

Task trip(LocationId a, LocationId b, Hours d) { return {TaskKind::Trip, a, b, d, 0, -1}; }

SearchConfig cfg_alg(int alg, long iterations, std::uint64_t seed = 1) {
  SearchConfig c = SearchConfig::algorithm(alg);
  c.max_iterations = iterations;
  c.time_limit_s = 30;
  c.seed = seed;
  return c;
}

CrewProblem generated(std::uint64_t seed, int requests, int trucks, int drivers) {
  GenParams gp;
  gp.seed = seed;
  gp.num_requests = requests;
  gp.num_trucks = trucks;
  gp.num_drivers = drivers;
  const Instance inst = generate(gp, default_network());
  return CrewProblem(inst, route_trucks(inst, 0.25, 0.2, seed));
}

}  // namespace

TEST_CASE("algorithm presets") {
  const auto a1 = SearchConfig::algorithm(1);
  const auto a2 = SearchConfig::algorithm(2);
  const auto a3 = SearchConfig::algorithm(3);
  CHECK_FALSE(a1.semi_feasible);
  CHECK_FALSE(a1.perturbation);
  CHECK(a2.semi_feasible);
  CHECK_FALSE(a2.perturbation);
  CHECK(a3.semi_feasible);
  CHECK(a3.perturbation);
  CHECK(a3.alpha == doctest::Approx(0.2));
  CHECK_THROWS_AS(SearchConfig::algorithm(4), InputError);
  SearchConfig bad = a3;
  bad.crew_max = 3;
  CHECK_THROWS_AS(bad.check(), InputError);
}

TEST_CASE("one task with a co-located driver") {
  const CrewProblem p = fixtures::overworked();
  RoadNetwork net({"a", "b"}, {{0, 1, 450}});
  const CrewProblem q = trips_problem(1, net, {trip(0, 1, 5)}, {2}, {0});
  const Construction c = greedy_construct(q, SearchConfig::algorithm(1));
  REQUIRE(c.schedule);
  CHECK(c.schedule->routes[0] == std::vector<TaskId>{0});
  CHECK(cost_stage2(q, *c.schedule) == 0.0);
  CHECK_FALSE(greedy_construct(p, SearchConfig::algorithm(1)).schedule);
}

TEST_CASE("greedy construction on the two-city tasks") {
  const SearchConfig cfg = SearchConfig::algorithm(1);
  const Construction lone = greedy_construct(fixtures::two_city({0}), cfg);
  CHECK_FALSE(lone.schedule);
  CHECK(lone.stuck == 2);

  const CrewProblem p = fixtures::two_city({0, 1});
  const Construction both = greedy_construct(p, cfg);
  REQUIRE(both.schedule);
  CHECK(cost_stage2(p, *both.schedule) == 0.0);
  CHECK(validate(p, *both.schedule).empty());
}

TEST_CASE("semi-greedy with alpha 0 follows the greedy trajectory") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const CrewProblem p = generated(seed, 8, 5, 10);
    SearchConfig cfg = SearchConfig::algorithm(1);
    cfg.alpha = 0.0;
    Rng rng(seed);
    const Construction g = greedy_construct(p, cfg);
    const Construction s = semi_greedy_construct(p, cfg, rng);
    CHECK(g.schedule == s.schedule);
    CHECK(g.stuck == s.stuck);
  }
}

TEST_CASE("semi-greedy with alpha 1 can pick every candidate") {
  RoadNetwork net({"A", "B", "C"}, {{0, 1, 90}, {1, 2, 90}});
  const CrewProblem p = trips_problem(1, net, {trip(0, 1, 1)}, {10}, {0, 1, 2});
  SearchConfig cfg = SearchConfig::algorithm(1);
  cfg.alpha = 1.0;
  Rng rng(3);
  std::set<DriverId> chosen;
  for (int k = 0; k < 1000; ++k) {
    const Construction c = semi_greedy_construct(p, cfg, rng);
    REQUIRE(c.schedule);
    for (DriverId d = 0; d < 3; ++d) {
      if (!c.schedule->routes[d].empty()) chosen.insert(d);
    }
  }
  CHECK(chosen.size() == 3u);
}

TEST_CASE("empty candidate list falls back to the smallest excess increase") {
  // A-B 900 km, B-E 720 km, D-B 450 km.
  RoadNetwork net({"A", "B", "D", "E"}, {{0, 1, 900}, {2, 1, 450}, {1, 3, 720}});
  const CrewProblem p = trips_problem(1, net, {trip(0, 1, 10), trip(1, 3, 8)}, {0, 10}, {0, 2});
  SearchConfig cfg = SearchConfig::algorithm(2);
  Rng rng(1);
  const Construction c = semi_greedy_construct(p, cfg, rng);
  REQUIRE(c.schedule);
  CHECK(c.schedule->routes[0] == std::vector<TaskId>{0});
  CHECK(c.schedule->routes[1] == std::vector<TaskId>{1});

  // Recompute the increase for both drivers.
  Schedule via0{p.plan().tentative_start, {{0, 1}, {}}, Regulation::L1};
  Schedule via1{p.plan().tentative_start, {{0}, {1}}, Regulation::L1};
  const double base = w_inf(p, Schedule{p.plan().tentative_start, {{0}, {}}, Regulation::L1});
  CHECK(w_inf(p, via0) - base == doctest::Approx(6.0));
  CHECK(w_inf(p, via1) - base == doctest::Approx(1.0));
  CHECK(w_inf(p, *c.schedule) == doctest::Approx(1.0));

  CHECK_FALSE(greedy_construct(p, SearchConfig::algorithm(1)).schedule);
}

TEST_CASE("move rejections") {
  const CrewProblem p = fixtures::two_city({0, 1});
  const Schedule s{p.plan().tentative_start, {{0, 1, 3}, {2}}, Regulation::L1};
  const SearchConfig cfg = SearchConfig::algorithm(3);
  MoveArgs rm;
  rm.move = Move::Remove;
  rm.d1 = 1;
  rm.pos1 = 0;
  CHECK(apply_move(p, s, rm, cfg).rejection == "crewUnder");

  MoveArgs ins;
  ins.move = Move::Insert;
  ins.task = 0;
  ins.d2 = 1;
  CHECK(apply_move(p, s, ins, cfg).rejection == "pathBreak");
  ins.task = 3;
  const MoveResult r = apply_move(p, s, ins, cfg);
  REQUIRE(r.schedule);
  CHECK(r.schedule->routes[1] == std::vector<TaskId>{2, 3});
  CHECK(validate(p, *r.schedule).empty());
  SearchConfig single = cfg;
  single.crew_max = 1;
  CHECK(apply_move(p, s, ins, single).rejection == "crewOver");

  MoveArgs bad;
  bad.move = Move::Relocate;
  bad.d1 = 0;
  bad.pos1 = 7;
  bad.d2 = 1;
  CHECK(apply_move(p, s, bad, cfg).rejection == "invalid arguments");
}

TEST_CASE("inserting the missing trip repairs the shuttle day") {
  const CrewProblem p = fixtures::missing_trip();
  const Schedule s = fixtures::missing_trip_schedule(p);
  CHECK(workload(p, s, 0)[24] == doctest::Approx(13.0));
  CHECK(w_inf(p, s) > 0.0);
  MoveArgs m;
  m.move = Move::Insert;
  m.task = 1;
  m.d2 = 0;
  const MoveResult r = apply_move(p, s, m, SearchConfig::algorithm(3));
  REQUIRE(r.schedule);
  CHECK(r.schedule->routes[0] == std::vector<TaskId>{0, 1, 2});
  CHECK(w_inf(p, *r.schedule) == 0.0);
  CHECK(validate(p, *r.schedule).empty());

  const auto repaired = repair(p, s, SearchConfig::algorithm(3));
  REQUIRE(repaired);
  CHECK(w_inf(p, *repaired) == 0.0);
  CHECK(validate(p, *repaired).empty());
}

TEST_CASE("retiming range between truck neighbours") {
  // Chain A-B-C-D, 180 km legs; one truck running A->B at 3, B->C at 6, C->D at 10.
  RoadNetwork net({"A", "B", "C", "D"}, {{0, 1, 180}, {1, 2, 180}, {2, 3, 180}});
  TaskPlan plan;
  plan.tasks = {trip(0, 1, 2), trip(1, 2, 2), trip(2, 3, 2)};
  plan.truck_routes = {{0, 1, 2}};
  plan.tentative_start = {3, 6, 10};
  const CrewProblem p(Instance(1, net, {}, {{"v0", 0}}, {{"d0", 0}, {"d1", 1}, {"d2", 2}}), plan);
  const Schedule s{plan.tentative_start, {{0}, {1}, {2}}, Regulation::L1};
  REQUIRE(validate(p, s).empty());
  CHECK(retime_candidates(p, s, 1) == std::vector<Hours>{5, 6, 7, 8});
  MoveArgs m;
  m.move = Move::Retime;
  m.task = 1;
  m.value = 9;
  CHECK(apply_move(p, s, m, SearchConfig::algorithm(3)).rejection ==
        "start time outside the feasible range");
  m.value = 8;
  const MoveResult r = apply_move(p, s, m, SearchConfig::algorithm(3));
  REQUIRE(r.schedule);
  CHECK(r.schedule->start[1] == 8.0);
  CHECK(validate(p, *r.schedule).empty());
}

TEST_CASE("descent from a local optimum accepts nothing") {
  const CrewProblem p = fixtures::two_city({0, 1});
  const Schedule s{p.plan().tentative_start, {{0, 1, 3}, {2}}, Regulation::L1};
  const SearchConfig cfg = SearchConfig::algorithm(3);
  VndTrace trace;
  const Schedule out = vnd(p, s, Objective::Cost, cfg.vnd_order_improve, cfg, &trace);
  CHECK(out == s);
  CHECK(trace.accepted == 0);
}

TEST_CASE("relocation removes a shuttle") {
  const CrewProblem p = fixtures::two_city({0, 1, 0});
  const Schedule s{p.plan().tentative_start, {{0, 3}, {2}, {1}}, Regulation::L1};
  REQUIRE(validate(p, s).empty());
  CHECK(cost_stage2(p, s) == doctest::Approx(4.0));
  MoveArgs m;
  m.move = Move::Relocate;
  m.d1 = 0;
  m.pos1 = 1;
  m.d2 = 2;
  const MoveResult r = apply_move(p, s, m, SearchConfig::algorithm(3));
  REQUIRE(r.schedule);
  CHECK(cost_stage2(p, *r.schedule) == 0.0);

  const SearchConfig cfg = SearchConfig::algorithm(3);
  VndTrace trace;
  const Schedule out = vnd(p, s, Objective::Cost, cfg.vnd_order_improve, cfg, &trace);
  CHECK(cost_stage2(p, out) == 0.0);
  REQUIRE(trace.objective.size() >= 2u);
  CHECK(trace.objective[0] - trace.objective[1] == doctest::Approx(4.0));
}

TEST_CASE("descent traces strictly decrease") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const CrewProblem p = generated(seed, 10, 5, 10);
    SearchConfig cfg = SearchConfig::algorithm(3);
    Rng rng(seed);
    cfg.alpha = 1.0;
    const Construction c = semi_greedy_construct(p, cfg, rng);
    if (!c.schedule || w_inf(p, *c.schedule) > 0) continue;
    VndTrace trace;
    const Schedule out = vnd(p, *c.schedule, Objective::Cost, cfg.vnd_order_improve, cfg, &trace);
    for (std::size_t k = 1; k < trace.objective.size(); ++k) {
      CHECK(trace.objective[k] < trace.objective[k - 1]);
    }
    CHECK(validate(p, out).empty());
    CHECK(cost_stage2(p, out) == doctest::Approx(trace.objective.back()));
  }
}

TEST_CASE("repair keeps feasible input and gives up when hopeless") {
  const CrewProblem p = fixtures::two_city({0, 1});
  const Schedule s{p.plan().tentative_start, {{0, 1, 3}, {2}}, Regulation::L1};
  const auto same = repair(p, s, SearchConfig::algorithm(3));
  REQUIRE(same);
  CHECK(*same == s);

  const CrewProblem o = fixtures::overworked();
  const Schedule lone{o.plan().tentative_start, {{0}}, Regulation::L1};
  CHECK_FALSE(repair(o, lone, SearchConfig::algorithm(3)));
  CHECK_FALSE(brute_stage2(o, Regulation::L1).z3);
}

TEST_CASE("perturbation keeps cost and feasibility") {
  // Rigid: singleton windows pin pickup, trip and delivery.
  RoadNetwork net({"P", "Q"}, {{0, 1, 270}});
  Request r{"r0", 0, 1, {2, 2}, {6, 6}, 0, 0, 1.0};
  const Instance inst(1, net, {r}, {{"v0", 0}}, {{"d0", 0}});
  const TaskPlan plan = route_trucks(inst, 0.25, 0.2, 1);
  REQUIRE(plan.tasks.size() == 3u);
  const CrewProblem rigid(inst, plan);
  const Schedule rs{plan.tentative_start, {{0, 1, 2}}, Regulation::L1};
  REQUIRE(validate(rigid, rs).empty());
  Rng rng(9);
  CHECK(perturb(rigid, rs, rng) == rs);

  const CrewProblem p = generated(3, 10, 5, 10);
  SearchConfig cfg = cfg_alg(3, 10);
  const GraspResult g = grasp(p, cfg);
  REQUIRE(g.best);
  const double z3 = cost_stage2(p, *g.best);
  Schedule cur = *g.best;
  bool moved = false;
  for (int k = 0; k < 100; ++k) {
    cur = perturb(p, cur, rng);
    CHECK(validate(p, cur).empty());
    CHECK(cost_stage2(p, cur) == doctest::Approx(z3));
    moved = moved || cur.start != g.best->start;
  }
  CHECK(moved);
}

TEST_CASE("perturbation round count") {
  CHECK(perturbation_rounds(0, 0) == 1);
  CHECK(perturbation_rounds(0, 41) == 1);
  CHECK(perturbation_rounds(10, 9) == 25);
  CHECK(perturbation_rounds(5, 9) == 5);
  CHECK(perturbation_rounds(1, 0, 4.0) == 4);
}

TEST_CASE("search reaches a known zero optimum") {
  const CrewProblem p = fixtures::two_city({0, 1});
  REQUIRE(brute_stage2(p, Regulation::L1).z3 == 0.0);
  SearchConfig cfg = SearchConfig::algorithm(3);
  cfg.time_limit_s = 10;
  cfg.max_iterations = 200;
  const double t0 = steady_seconds();
  const GraspResult g = grasp(p, cfg);
  REQUIRE(g.best);
  CHECK(cost_stage2(p, *g.best) == 0.0);
  CHECK(steady_seconds() - t0 < 10.0);
  REQUIRE(g.stats.best_z3);
  CHECK(*g.stats.best_z3 == 0.0);
}

TEST_CASE("single crews never share a task") {
  const CrewProblem p = generated(2, 10, 5, 10);
  SearchConfig cfg = cfg_alg(3, 15);
  cfg.crew_max = 1;
  const GraspResult g = grasp(p, cfg);
  REQUIRE(g.best);
  std::vector<int> cover(static_cast<std::size_t>(p.num_tasks()), 0);
  for (const auto& route : g.best->routes)
    for (TaskId t : route) ++cover[t];
  for (int c : cover) CHECK(c == 1);
  CHECK(validate(p, *g.best).empty());
}

TEST_CASE("iteration-bounded runs are reproducible") {
  const CrewProblem p = generated(5, 12, 6, 12);
  for (int alg = 1; alg <= 3; ++alg) {
    const SearchConfig cfg = cfg_alg(alg, 25, 17);
    const GraspResult a = grasp(p, cfg);
    const GraspResult b = grasp(p, cfg);
    CHECK(a.best == b.best);
    CHECK(a.stats.iterations == b.stats.iterations);
    CHECK(a.stats.fails == b.stats.fails);
    CHECK(a.stats.best_z3 == b.stats.best_z3);
    CHECK(a.stats.iteration_to_best == b.stats.iteration_to_best);
    CHECK(a.stats.repairs_attempted == b.stats.repairs_attempted);
  }
  SearchConfig multi = cfg_alg(3, 10, 4);
  multi.restarts = 3;
  const GraspResult a = grasp(p, multi);
  const GraspResult b = grasp(p, multi);
  CHECK(a.best == b.best);
  CHECK(a.z3_min == b.z3_min);
  CHECK(a.restarts.size() == 3u);
  CHECK(a.stats.iterations == 30);
  if (a.best) {
    CHECK(validate(p, *a.best).empty());
    CHECK(*a.z3_min == doctest::Approx(cost_stage2(p, *a.best)));
    CHECK(*a.z3_min <= *a.z3_avg);
    CHECK(*a.z3_avg <= *a.z3_max);
  }
}
