#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "vrcsp/io.hpp"
#include "vrcsp/lpemit.hpp"
#include "vrcsp/netgen.hpp"
#include "vrcsp/report.hpp"
#include "vrcsp/stage1.hpp"
#include "vrcsp/stage2.hpp"

namespace py = pybind11;
using namespace vrcsp;

namespace {

CrewProblem load_problem(const std::string& instance, const std::string& plan) {
  Instance inst = parse_instance(instance);
  TaskPlan p = parse_plan(inst, plan);
  return CrewProblem(std::move(inst), std::move(p));
}

}  // namespace

PYBIND11_MODULE(_vrcsp, m) {
  m.doc() = "Vehicle routing and crew scheduling (JSON documents in, JSON documents out)";

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<InfeasibleError>(m, "InfeasibleError", PyExc_RuntimeError);

  m.def(
      "generate",
      [](int horizon_days, int requests, int trucks, int drivers, std::uint64_t seed, double co_location,
         double late_penalty) {
        GenParams gp;
        gp.horizon_days = horizon_days;
        gp.num_requests = requests;
        gp.num_trucks = trucks;
        gp.num_drivers = drivers;
        gp.seed = seed;
        gp.co_location_prob = co_location;
        gp.late_penalty = late_penalty;
        return dump_instance(generate(gp, default_network()));
      },
      py::arg("horizon_days") = 7, py::arg("requests") = 10, py::arg("trucks") = 3, py::arg("drivers") = 6,
      py::arg("seed") = 1, py::arg("co_location") = 0.8, py::arg("late_penalty") = 1.0);

  m.def(
      "route",
      [](const std::string& instance, double lambda, double alpha1, std::uint64_t seed) {
        const Instance inst = parse_instance(instance);
        return dump_plan(inst, route_trucks(inst, lambda, alpha1, seed));
      },
      py::arg("instance"), py::arg("lam") = 0.25, py::arg("alpha1") = 0.2, py::arg("seed") = 1);

  m.def(
      "cost_stage1",
      [](const std::string& instance, const std::string& plan, double lambda) {
        const Instance inst = parse_instance(instance);
        const Stage1Cost c = cost_stage1(inst, parse_plan(inst, plan), lambda);
        return py::dict(py::arg("z1") = c.z1, py::arg("z2") = c.z2, py::arg("z12") = c.z12);
      },
      py::arg("instance"), py::arg("plan"), py::arg("lam") = 0.25);

  m.def(
      "schedule",
      [](const std::string& instance, const std::string& plan, int alg, double time_limit, long max_iterations,
         std::uint64_t seed, const std::string& regulation, int crew_max, int restarts) {
        const CrewProblem problem = load_problem(instance, plan);
        SearchConfig cfg = SearchConfig::algorithm(alg);
        cfg.time_limit_s = time_limit;
        cfg.max_iterations = max_iterations;
        cfg.seed = seed;
        cfg.regulation = parse_regulation(regulation);
        cfg.crew_max = crew_max;
        cfg.restarts = restarts;
        cfg.check();
        GraspResult result;
        {
          py::gil_scoped_release release;
          result = grasp(problem, cfg);
        }
        std::optional<std::string> schedule;
        if (result.best) schedule = dump_schedule(problem, *result.best);
        return std::make_pair(schedule, stats_json(result));
      },
      py::arg("instance"), py::arg("plan"), py::arg("alg") = 3, py::arg("time_limit") = 10.0,
      py::arg("max_iterations") = -1, py::arg("seed") = 1, py::arg("regulation") = "l1",
      py::arg("crew_max") = 2, py::arg("restarts") = 1);

  m.def(
      "validate",
      [](const std::string& instance, const std::string& plan, const std::string& schedule) {
        const CrewProblem problem = load_problem(instance, plan);
        std::vector<std::tuple<std::string, std::string, std::string>> out;
        for (const Violation& v : validate(problem, parse_schedule(problem, schedule))) {
          out.emplace_back(to_string(v.kind), v.subject, v.detail);
        }
        return out;
      },
      py::arg("instance"), py::arg("plan"), py::arg("schedule"));

  m.def(
      "cost_stage2",
      [](const std::string& instance, const std::string& plan, const std::string& schedule) {
        const CrewProblem problem = load_problem(instance, plan);
        return cost_stage2(problem, parse_schedule(problem, schedule));
      },
      py::arg("instance"), py::arg("plan"), py::arg("schedule"));

  m.def(
      "emit_lp",
      [](const std::string& instance, int stage, const std::optional<std::string>& plan, double lambda) {
        const Instance inst = parse_instance(instance);
        if (stage == 1) return emit_stage1(inst, lambda).to_lp();
        if (stage != 2) throw InputError("stage must be 1 or 2");
        if (!plan) throw InputError("stage 2 needs a plan");
        return emit_stage2(inst, parse_plan(inst, *plan)).to_lp();
      },
      py::arg("instance"), py::arg("stage") = 1, py::arg("plan") = py::none(), py::arg("lam") = 0.25);

  m.def(
      "gantt_svg",
      [](const std::string& instance, const std::string& plan, const std::string& schedule) {
        const CrewProblem problem = load_problem(instance, plan);
        return gantt_svg(problem, parse_schedule(problem, schedule));
      },
      py::arg("instance"), py::arg("plan"), py::arg("schedule"));
}
