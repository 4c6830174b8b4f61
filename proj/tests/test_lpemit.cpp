#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "vrcsp/lpemit.hpp"
#include "vrcsp/netgen.hpp"
#include "vrcsp/oracle.hpp"
#include "vrcsp/stage1.hpp"
#include "vrcsp/stage2.hpp"

using namespace vrcsp;

namespace {

Instance one_by_one() {
  RoadNetwork net({"A", "B", "C"}, {{0, 1, 180.0}, {1, 2, 270.0}});
  Request r{"r0", 1, 2, {4, 9}, {10, 20}, 0, 1, 2.0};
  return Instance(3, net, {r}, {{"v0", 0}}, {{"d0", 0}});
}

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

// Exact Z12 recomputed from the plan.
Rational exact_z12(const Instance& inst, const TaskPlan& plan, double lambda) {
  Rational z1 = 0, z2 = 0;
  for (std::size_t r = 0; r < inst.requests().size(); ++r) {
    const Request& q = inst.requests()[r];
    z1 += exact(q.late_penalty) * (plan.delivery_day[r] - q.delivery_day);
  }
  for (const auto& route : plan.truck_routes) {
    if (route.empty()) continue;
    LocationId at = inst.trucks()[plan.tasks[route.front()].truck].location;
    for (TaskId t : route) {
      const Task& task = plan.tasks[t];
      if (task.kind == TaskKind::Trip) continue;
      if (task.kind == TaskKind::Pickup) z2 += exact(inst.travel_dist(at, task.origin));
      if (task.kind == TaskKind::Delivery) {
        const Request& q = inst.requests()[task.request];
        z2 += exact(inst.travel_dist(q.pickup_location, q.delivery_location));
      }
      at = task.destination;
    }
  }
  return exact(lambda) * z1 + (1 - exact(lambda)) * z2;
}

}  // namespace

TEST_CASE("exact conversion of doubles") {
  CHECK(exact(0.5) == Rational(1, 2));
  CHECK(exact(3.0) == 3);
  CHECK(exact(0.1) != Rational(1, 10));
  CHECK(exact(0.1) == Rational(3602879701896397, 36028797018963968));
}

TEST_CASE("one truck, one request: variables and row families") {
  const LinearModel m = emit_stage1(one_by_one(), 0.25);
  CHECK(m.count(VarType::Binary) == 3u);
  CHECK(m.count(VarType::Integer) == 4u);
  CHECK(m.index("x_v0_r0") >= 0);
  CHECK(m.index("x_v0_s") >= 0);
  CHECK(m.index("x_r0_s") >= 0);
  for (const char* v : {"dp_r0", "hp_r0", "dd_r0", "hd_r0"}) CHECK(m.index(v) >= 0);
  CHECK(m.count("fulfil") == 1u);
  CHECK(m.count("depart") == 1u);
  CHECK(m.count("flow") == 1u);
  CHECK(m.count("pickup_before_delivery") == 1u);
  CHECK(m.count("first_reach") == 1u);
  CHECK(m.count("chain") == 0u);
  CHECK(m.rows().size() == 5u);

  const auto& vars = m.variables();
  const Variable& hp = vars[m.index("hp_r0")];
  CHECK(hp.lower == 4);
  CHECK(hp.upper == 9);
  const Variable& dd = vars[m.index("dd_r0")];
  CHECK(dd.lower == 1);
  CHECK(dd.upper == 2);
}

TEST_CASE("family sizes grow with requests and trucks") {
  GenParams gp;
  gp.num_requests = 5;
  gp.num_trucks = 3;
  const LinearModel m = emit_stage1(generate(gp, default_network()), 0.25);
  CHECK(m.count(VarType::Binary) == 3u * 5 + 5 * 4 + 3 + 5);
  CHECK(m.count(VarType::Integer) == 20u);
  CHECK(m.count("fulfil") == 5u);
  CHECK(m.count("depart") == 3u);
  CHECK(m.count("flow") == 5u);
  CHECK(m.count("first_reach") == 15u);
  CHECK(m.count("chain") == 20u);
}

TEST_CASE("lambda 0 leaves only distance terms") {
  const LinearModel m = emit_stage1(one_by_one(), 0.0);
  for (const Term& t : m.objective()) CHECK(m.variables()[t.var].name.rfind("x_", 0) == 0);
  CHECK(m.objective_constant() == 0);
  const LinearModel one = emit_stage1(one_by_one(), 1.0);
  for (const Term& t : one.objective()) CHECK(one.variables()[t.var].name.rfind("dd_", 0) == 0);
}

TEST_CASE("LP text layout") {
  const std::string lp = emit_stage1(one_by_one(), 0.25).to_lp();
  for (const char* section : {"Minimize", "Subject To", "Bounds", "General", "Binary", "End"}) {
    CHECK(lp.find(section) != std::string::npos);
  }
  CHECK(lp.find("fulfil_r0:") != std::string::npos);
  // Scaled to integers: no decimal point inside the constraint block.
  const auto from = lp.find("Subject To"), to = lp.find("Bounds");
  CHECK(lp.substr(from, to - from).find('.') == std::string::npos);
}

TEST_CASE("heuristic truck routes satisfy the routing model") {
  int checked = 0;
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    GenParams gp;
    gp.seed = seed;
    gp.num_requests = 6;
    gp.num_trucks = 4;
    const Instance inst = generate(gp, default_network());
    TaskPlan plan;
    try {
      plan = route_trucks(inst, 0.25, 0.2, seed);
    } catch (const InfeasibleError&) {
      continue;
    }
    const LinearModel m = emit_stage1(inst, 0.25);
    const Evaluation e = evaluate(m, stage1_assignment(m, inst, plan));
    for (const auto& v : e.violated) INFO(v);
    CHECK(e.feasible);
    CHECK(e.objective == exact_z12(inst, plan, 0.25));
    CHECK(std::abs(e.objective.convert_to<double>() - cost_stage1(inst, plan, 0.25).z12) <= 1e-9);
    ++checked;
  }
  CHECK(checked >= 10);
}

TEST_CASE("evaluator reports unbound variables, bounds and integrality") {
  const LinearModel m = emit_stage1(one_by_one(), 0.25);
  Assignment a;
  CHECK_THROWS_AS(evaluate(m, a), InputError);
  for (const Variable& v : m.variables()) a[v.name] = 0;
  a["hp_r0"] = Rational(9, 2);
  const Evaluation e = evaluate(m, a);
  CHECK_FALSE(e.feasible);
  CHECK(contains(e.violated, "integrality:hp_r0"));
  CHECK(contains(e.violated, "fulfil_r0"));
  CHECK(contains(e.violated, "bound:dd_r0"));
}

TEST_CASE("crew model accepts the zero-cost two-city schedule") {
  const CrewProblem p = fixtures::two_city({0, 1});
  const LinearModel m = emit_stage2(p.instance(), p.plan());
  const Schedule s{p.plan().tentative_start, {{0, 1, 3}, {2}}, Regulation::L1};
  const Evaluation e = evaluate(m, stage2_assignment(m, p, s));
  for (const auto& v : e.violated) INFO(v);
  CHECK(e.feasible);
  CHECK(e.objective == 0);
  CHECK(m.count("cover") == 8u);

  const CrewProblem q = fixtures::two_city({0, 1, 0});
  const LinearModel mq = emit_stage2(q.instance(), q.plan());
  const Schedule costly{q.plan().tentative_start, {{0, 3}, {2}, {1}}, Regulation::L1};
  const Evaluation f = evaluate(mq, stage2_assignment(mq, q, costly));
  CHECK(f.feasible);
  CHECK(f.objective.convert_to<double>() == doctest::Approx(4.0));
}

TEST_CASE("cover rows catch missing and excess crews") {
  RoadNetwork net({"a", "b"}, {{0, 1, 450}});
  TaskPlan plan;
  plan.tasks = {{TaskKind::Trip, 0, 1, 5, 0, -1}};
  plan.truck_routes = {{0}};
  plan.tentative_start = {2};
  const Instance inst(1, net, {}, {{"v0", 0}}, {{"d0", 0}, {"d1", 0}, {"d2", 0}});
  const CrewProblem p(inst, plan);
  const LinearModel m = emit_stage2(inst, plan);

  const Evaluation empty = evaluate(m, stage2_assignment(m, p, Schedule{{2}, {{}, {}, {}}, Regulation::L1}));
  CHECK_FALSE(empty.feasible);
  CHECK(contains(empty.violated, "cover_ge_t0"));

  const Evaluation three = evaluate(m, stage2_assignment(m, p, Schedule{{2}, {{0}, {0}, {0}}, Regulation::L1}));
  CHECK_FALSE(three.feasible);
  CHECK(contains(three.violated, "cover_le_t0"));

  const Evaluation two = evaluate(m, stage2_assignment(m, p, Schedule{{2}, {{0}, {0}, {}}, Regulation::L1}));
  CHECK(two.feasible);
}

TEST_CASE("search results satisfy the crew model") {
  int checked = 0;
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    GenParams gp;
    gp.seed = seed;
    gp.num_requests = 4;
    gp.num_trucks = 3;
    gp.num_drivers = 6;
    const Instance inst = generate(gp, default_network());
    TaskPlan plan;
    try {
      plan = route_trucks(inst, 0.25, 0.2, seed);
    } catch (const InfeasibleError&) {
      continue;
    }
    const CrewProblem p(inst, plan);
    SearchConfig cfg = SearchConfig::algorithm(3);
    cfg.max_iterations = 5;
    const GraspResult g = grasp(p, cfg);
    if (!g.best) continue;
    const LinearModel m = emit_stage2(inst, plan);
    const Evaluation e = evaluate(m, stage2_assignment(m, p, *g.best));
    for (const auto& v : e.violated) INFO(v);
    CHECK(e.feasible);
    CHECK(std::abs(e.objective.convert_to<double>() - cost_stage2(p, *g.best)) <= 1e-9);
    ++checked;
  }
  CHECK(checked >= 4);
}
