#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "vrcsp/errors.hpp"
#include "vrcsp/io.hpp"
#include "vrcsp/lpemit.hpp"
#include "vrcsp/netgen.hpp"
#include "vrcsp/oracle.hpp"
#include "vrcsp/report.hpp"
#include "vrcsp/stage1.hpp"
#include "vrcsp/stage2.hpp"

namespace fs = std::filesystem;
using namespace vrcsp;

namespace {

enum Exit { kOk = 0, kFailure = 1, kInput = 2, kStage1 = 3, kNoSchedule = 4, kInvalid = 5 };

struct GenOpts {
  GenParams params;
  std::string network;
};

struct RouteOpts {
  double lambda = 0.25;
  double alpha1 = 0.2;
  std::uint64_t seed = 1;
  int runs = 1;
};

struct ScheduleOpts {
  int alg = 3;
  double time_limit = 10.0;
  long max_iterations = -1;
  std::uint64_t seed = 1;
  std::string regulation = "l1";
  int crew_max = 2;
  int restarts = 1;
};

void add_gen_flags(CLI::App* cmd, GenOpts& o) {
  cmd->add_option("--horizon", o.params.horizon_days, "planning horizon in days")->check(CLI::Range(4, 366));
  cmd->add_option("--requests", o.params.num_requests)->check(CLI::PositiveNumber);
  cmd->add_option("--trucks", o.params.num_trucks)->check(CLI::PositiveNumber);
  cmd->add_option("--drivers", o.params.num_drivers)->check(CLI::PositiveNumber);
  cmd->add_option("--gen-seed", o.params.seed, "instance seed");
  cmd->add_option("--co-location", o.params.co_location_prob)->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--late-penalty", o.params.late_penalty)->check(CLI::NonNegativeNumber);
  cmd->add_option("--network", o.network, "road network JSON (default: built-in)")->check(CLI::ExistingFile);
}

void add_route_flags(CLI::App* cmd, RouteOpts& o) {
  cmd->add_option("--lambda", o.lambda, "weight of the delay term")->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--alpha1", o.alpha1, "RCL quality for truck routing")->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--route-seed", o.seed);
}

void add_schedule_flags(CLI::App* cmd, ScheduleOpts& o) {
  cmd->add_option("--alg", o.alg, "1 feasible-only, 2 +repair, 3 +perturbation")->check(CLI::Range(1, 3));
  cmd->add_option("--time-limit", o.time_limit, "seconds")->check(CLI::PositiveNumber);
  cmd->add_option("--max-iterations", o.max_iterations, "iteration bound (negative: none)");
  cmd->add_option("--seed", o.seed);
  cmd->add_option("--regulation", o.regulation)->check(CLI::IsMember({"l1", "l1l2", "l1l3"}, CLI::ignore_case));
  cmd->add_option("--crew-max", o.crew_max)->check(CLI::Range(1, 2));
  cmd->add_option("--restarts", o.restarts)->check(CLI::PositiveNumber);
}

SearchConfig make_config(const ScheduleOpts& o) {
  SearchConfig c = SearchConfig::algorithm(o.alg);
  c.time_limit_s = o.time_limit;
  c.max_iterations = o.max_iterations;
  c.seed = o.seed;
  c.regulation = parse_regulation(o.regulation);
  c.crew_max = o.crew_max;
  c.restarts = o.restarts;
  c.check();
  return c;
}

Instance generate_instance(const GenOpts& o) {
  const RoadNetwork net = o.network.empty() ? default_network() : parse_network(read_text(o.network));
  return generate(o.params, net);
}

std::string cost_report(const Instance& instance, const TaskPlan& plan, double lambda) {
  const Stage1Cost c = cost_stage1(instance, plan, lambda);
  nlohmann::ordered_json j;
  j["z1"] = c.z1;
  j["z2"] = c.z2;
  j["z12"] = c.z12;
  j["tasks"] = plan.tasks.size();
  return j.dump();
}

void print_violations(const std::vector<Violation>& violations) {
  for (const Violation& v : violations) {
    std::cout << to_string(v.kind) << ' ' << v.subject << ": " << v.detail << '\n';
  }
}

// Runs the search, writes the outputs and returns the exit code.
int run_schedule(const CrewProblem& problem, const ScheduleOpts& o, const fs::path& out,
                 const std::string& stats_path) {
  const GraspResult result = grasp(problem, make_config(o));
  const std::string stats = stats_json(result);
  if (!stats_path.empty()) write_text(stats_path, stats);
  std::cout << stats;
  if (!result.best) {
    std::cerr << "no feasible schedule found\n";
    return kNoSchedule;
  }
  write_text(out, dump_schedule(problem, *result.best));
  const auto violations = validate(problem, *result.best);
  if (!violations.empty()) {
    print_violations(violations);
    return kInvalid;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Vehicle routing and crew scheduling"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML/INI file; sections name subcommands, flags win");

  GenOpts gen_opts;
  RouteOpts route_opts;
  ScheduleOpts sched_opts;
  std::string instance_path, plan_path, schedule_path, out_path, stats_path, out_dir = ".";
  std::string regulation_override;
  int stage = 1;

  auto* gen = app.add_subcommand("gen", "generate a random instance");
  add_gen_flags(gen, gen_opts);
  gen->add_option("-o,--out", out_path, "instance file")->required();

  auto* route = app.add_subcommand("route", "truck routing: instance -> plan");
  route->add_option("instance", instance_path)->required()->check(CLI::ExistingFile);
  route->add_option("-o,--out", out_path, "plan file")->required();
  add_route_flags(route, route_opts);
  route->add_option("--runs", route_opts.runs, "independent runs; files get a _<k> suffix")->check(CLI::PositiveNumber);

  auto* schedule = app.add_subcommand("schedule", "crew scheduling: plan -> schedule");
  schedule->add_option("instance", instance_path)->required()->check(CLI::ExistingFile);
  schedule->add_option("plan", plan_path)->required()->check(CLI::ExistingFile);
  schedule->add_option("-o,--out", out_path, "schedule file")->required();
  schedule->add_option("--stats", stats_path, "stats report file");
  add_schedule_flags(schedule, sched_opts);

  auto* solve = app.add_subcommand("solve", "generate or load, route, schedule");
  solve->add_option("--instance", instance_path, "existing instance (otherwise generated)")->check(CLI::ExistingFile);
  solve->add_option("--out-dir", out_dir);
  add_gen_flags(solve, gen_opts);
  add_route_flags(solve, route_opts);
  add_schedule_flags(solve, sched_opts);

  auto* valid = app.add_subcommand("validate", "list violations of a schedule");
  valid->add_option("instance", instance_path)->required()->check(CLI::ExistingFile);
  valid->add_option("plan", plan_path)->required()->check(CLI::ExistingFile);
  valid->add_option("schedule", schedule_path)->required()->check(CLI::ExistingFile);
  valid->add_option("--regulation", regulation_override, "override the file's regulation")
      ->check(CLI::IsMember({"l1", "l1l2", "l1l3"}, CLI::ignore_case));

  auto* emit = app.add_subcommand("emit-lp", "write the MILP of stage 1 or 2");
  emit->add_option("instance", instance_path)->required()->check(CLI::ExistingFile);
  emit->add_option("--stage", stage)->check(CLI::Range(1, 2));
  emit->add_option("--plan", plan_path, "required for stage 2")->check(CLI::ExistingFile);
  emit->add_option("--lambda", route_opts.lambda)->check(CLI::Range(0.0, 1.0));
  emit->add_option("-o,--out", out_path, "default <instance>_<stage>.lp");

  auto* plot = app.add_subcommand("plot", "SVG Gantt chart of a schedule");
  plot->add_option("instance", instance_path)->required()->check(CLI::ExistingFile);
  plot->add_option("plan", plan_path)->required()->check(CLI::ExistingFile);
  plot->add_option("schedule", schedule_path)->required()->check(CLI::ExistingFile);
  plot->add_option("-o,--out", out_path)->required();

  // Exhaustive reference for tiny problems.
  auto* oracle = app.add_subcommand("oracle", "")->group("");
  oracle->add_option("instance", instance_path)->required()->check(CLI::ExistingFile);
  oracle->add_option("plan", plan_path)->required()->check(CLI::ExistingFile);
  oracle->add_option("--regulation", sched_opts.regulation);
  oracle->add_option("--crew-max", sched_opts.crew_max)->check(CLI::Range(1, 2));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInput;
  }

  try {
    if (*gen) {
      write_text(out_path, dump_instance(generate_instance(gen_opts)));
      return kOk;
    }
    if (*route) {
      const Instance instance = load_instance(instance_path);
      for (int k = 0; k < route_opts.runs; ++k) {
        const TaskPlan plan = route_trucks(instance, route_opts.lambda, route_opts.alpha1,
                                           route_opts.seed + static_cast<std::uint64_t>(k));
        fs::path out = out_path;
        if (route_opts.runs > 1) {
          out = out.parent_path() /
                (out.stem().string() + "_" + std::to_string(k) + out.extension().string());
        }
        write_text(out, dump_plan(instance, plan));
        std::cout << cost_report(instance, plan, route_opts.lambda) << '\n';
      }
      return kOk;
    }
    if (*schedule) {
      const Instance instance = load_instance(instance_path);
      const TaskPlan plan = load_plan(instance, plan_path);
      return run_schedule(CrewProblem(instance, plan), sched_opts, out_path, stats_path);
    }
    if (*solve) {
      const Instance instance =
          instance_path.empty() ? generate_instance(gen_opts) : load_instance(instance_path);
      fs::create_directories(out_dir);
      const fs::path dir = out_dir;
      if (instance_path.empty()) write_text(dir / "instance.json", dump_instance(instance));
      const TaskPlan plan = route_trucks(instance, route_opts.lambda, route_opts.alpha1, route_opts.seed);
      write_text(dir / "plan.json", dump_plan(instance, plan));
      std::cout << cost_report(instance, plan, route_opts.lambda) << '\n';
      return run_schedule(CrewProblem(instance, plan), sched_opts, dir / "schedule.json",
                          (dir / "stats.json").string());
    }
    if (*valid) {
      const Instance instance = load_instance(instance_path);
      const TaskPlan plan = load_plan(instance, plan_path);
      const CrewProblem problem(instance, plan);
      Schedule s = load_schedule(problem, schedule_path);
      if (!regulation_override.empty()) s.regulation = parse_regulation(regulation_override);
      const auto violations = validate(problem, s);
      print_violations(violations);
      if (!violations.empty()) return kInvalid;
      std::cout << "valid, z3 = " << cost_stage2(problem, s) << '\n';
      return kOk;
    }
    if (*emit) {
      const Instance instance = load_instance(instance_path);
      fs::path out = out_path;
      if (out.empty()) {
        out = fs::path(instance_path).replace_extension().string() + "_" + std::to_string(stage) + ".lp";
      }
      if (stage == 1) {
        write_text(out, emit_stage1(instance, route_opts.lambda).to_lp());
      } else {
        if (plan_path.empty()) throw InputError("stage 2 needs --plan");
        write_text(out, emit_stage2(instance, load_plan(instance, plan_path)).to_lp());
      }
      std::cout << out.string() << '\n';
      return kOk;
    }
    if (*plot) {
      const Instance instance = load_instance(instance_path);
      const TaskPlan plan = load_plan(instance, plan_path);
      const CrewProblem problem(instance, plan);
      write_text(out_path, gantt_svg(problem, load_schedule(problem, schedule_path)));
      return kOk;
    }
    if (*oracle) {
      const Instance instance = load_instance(instance_path);
      const TaskPlan plan = load_plan(instance, plan_path);
      const Stage2Optimum opt = brute_stage2(CrewProblem(instance, plan),
                                             parse_regulation(sched_opts.regulation), sched_opts.crew_max);
      nlohmann::ordered_json j;
      j["z3"] = opt.z3 ? nlohmann::ordered_json(*opt.z3) : nlohmann::ordered_json(nullptr);
      j["start_combinations"] = opt.start_combinations;
      std::cout << j.dump() << '\n';
      return opt.z3 ? kOk : kNoSchedule;
    }
  } catch (const ParseError& e) {
    std::cerr << e.what() << '\n';
    return kInput;
  } catch (const InputError& e) {
    std::cerr << e.what() << '\n';
    return kInput;
  } catch (const InfeasibleError& e) {
    std::cerr << e.what() << '\n';
    return kStage1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kFailure;
}
