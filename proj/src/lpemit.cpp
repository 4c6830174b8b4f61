#include "vrcsp/lpemit.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <set>
#include <sstream>

namespace vrcsp {

namespace {

using boost::multiprecision::cpp_int;

std::string decimal(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.17g", r.convert_to<double>());
  return buffer;
}

std::string sanitize(const std::string& id) {
  std::string out;
  for (char c : id) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
    out.push_back(ok ? c : '_');
  }
  return out.empty() ? "_" : out;
}

// Sanitised ids, or "<prefix><index>" for all of them when that would clash.
template <class T>
std::vector<std::string> safe_ids(const std::vector<T>& items, const std::string& prefix,
                                  std::set<std::string>& taken) {
  std::vector<std::string> out;
  std::set<std::string> mine;
  bool clash = false;
  for (const T& item : items) {
    out.push_back(sanitize(item.id));
    clash = clash || !mine.insert(out.back()).second || taken.count(out.back());
  }
  if (clash) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = prefix + std::to_string(i);
  }
  taken.insert(out.begin(), out.end());
  return out;
}

Rational hours(double km, double speed) { return exact(km) / exact(speed); }

Row make_row(std::string name, std::string family, Sense sense, Rational rhs) {
  Row row;
  row.name = std::move(name);
  row.family = std::move(family);
  row.sense = sense;
  row.rhs = std::move(rhs);
  return row;
}

void add_term(Row& row, int var, const Rational& coef) {
  if (var >= 0 && coef != 0) row.terms.push_back({var, coef});
}

void write_terms(std::ostringstream& os, const std::vector<Term>& terms,
                 const std::vector<Rational>& coefs, const LinearModel& model) {
  int on_line = 0;
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const Rational& c = coefs[k];
    const Rational mag = c < 0 ? Rational(-c) : c;
    if (k == 0) {
      if (c < 0) os << "- ";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    if (mag != 1) os << decimal(mag) << ' ';
    os << model.variables()[terms[k].var].name;
    if (++on_line == 8 && k + 1 < terms.size()) {
      os << "\n   ";
      on_line = 0;
    }
  }
}

struct Stage1Names {
  std::vector<std::string> truck, request;
};

Stage1Names stage1_names(const Instance& instance) {
  std::set<std::string> taken{"s"};
  Stage1Names n;
  n.truck = safe_ids(instance.trucks(), "v", taken);
  n.request = safe_ids(instance.requests(), "r", taken);
  return n;
}

struct Stage2Names {
  std::vector<std::string> driver;
};

Stage2Names stage2_names(const Instance& instance) {
  std::set<std::string> taken;
  return {safe_ids(instance.drivers(), "d", taken)};
}

std::string task_node(TaskId t) { return "t" + std::to_string(t); }

}  // namespace

Rational exact(double value) {
  if (!std::isfinite(value)) throw InputError("non-finite number in model data");
  return Rational(value);
}

int LinearModel::add_variable(const std::string& name, VarType type, Rational lower, Rational upper) {
  if (index_.count(name)) throw ContractError("duplicate variable " + name);
  const int id = static_cast<int>(vars_.size());
  vars_.push_back({name, type, std::move(lower), std::move(upper)});
  index_.emplace(name, id);
  return id;
}

void LinearModel::add_row(Row row) { rows_.push_back(std::move(row)); }

void LinearModel::add_objective(int var, const Rational& coef) {
  if (coef != 0) objective_.push_back({var, coef});
}

int LinearModel::index(const std::string& name) const {
  auto it = index_.find(name);
  return it == index_.end() ? -1 : it->second;
}

std::size_t LinearModel::count(const std::string& family) const {
  return static_cast<std::size_t>(std::count_if(rows_.begin(), rows_.end(),
                                                [&](const Row& r) { return r.family == family; }));
}

std::size_t LinearModel::count(VarType type) const {
  return static_cast<std::size_t>(std::count_if(vars_.begin(), vars_.end(),
                                                [&](const Variable& v) { return v.type == type; }));
}

std::string LinearModel::to_lp() const {
  std::ostringstream os;
  os << "\\ Problem: " << name_ << "\n";
  os << "Minimize\n obj: ";
  {
    std::vector<Rational> coefs;
    for (const Term& t : objective_) coefs.push_back(t.coef);
    write_terms(os, objective_, coefs, *this);
    if (objective_.empty()) os << "0 " << (vars_.empty() ? "dummy" : vars_.front().name);
    if (constant_ != 0) os << (constant_ < 0 ? " - " : " + ") << decimal(constant_ < 0 ? Rational(-constant_) : constant_);
    os << "\n";
  }

  os << "Subject To\n";
  const cpp_int limit = cpp_int(1) << 62;
  for (const Row& row : rows_) {
    // Clear denominators when the scaled row stays within 64-bit integers.
    cpp_int scale = 1;
    for (const Term& t : row.terms) scale = boost::multiprecision::lcm(scale, denominator(t.coef));
    scale = boost::multiprecision::lcm(scale, denominator(row.rhs));
    bool fits = scale < limit;
    std::vector<Rational> coefs;
    for (const Term& t : row.terms) {
      coefs.push_back(t.coef * Rational(scale));
      fits = fits && boost::multiprecision::abs(numerator(coefs.back())) < limit;
    }
    Rational rhs = row.rhs * Rational(scale);
    fits = fits && boost::multiprecision::abs(numerator(rhs)) < limit;
    if (!fits) {
      coefs.clear();
      for (const Term& t : row.terms) coefs.push_back(t.coef);
      rhs = row.rhs;
    }
    os << " " << row.name << ": ";
    if (row.terms.empty()) {
      os << "0 " << (vars_.empty() ? "dummy" : vars_.front().name);
    } else {
      write_terms(os, row.terms, coefs, *this);
    }
    switch (row.sense) {
      case Sense::LessEqual: os << " <= "; break;
      case Sense::GreaterEqual: os << " >= "; break;
      case Sense::Equal: os << " = "; break;
    }
    os << (rhs < 0 ? "-" : "") << decimal(rhs < 0 ? Rational(-rhs) : rhs) << "\n";
  }

  os << "Bounds\n";
  for (const Variable& v : vars_) {
    if (v.type == VarType::Binary) continue;
    os << " " << decimal(v.lower) << " <= " << v.name << " <= " << decimal(v.upper) << "\n";
  }
  const auto section = [&](const char* title, VarType type) {
    if (count(type) == 0) return;
    os << title << "\n";
    int on_line = 0;
    for (const Variable& v : vars_) {
      if (v.type != type) continue;
      os << (on_line == 0 ? " " : " ") << v.name;
      if (++on_line == 10) {
        os << "\n";
        on_line = 0;
      }
    }
    if (on_line != 0) os << "\n";
  };
  section("General", VarType::Integer);
  section("Binary", VarType::Binary);
  os << "End\n";
  return os.str();
}

Evaluation evaluate(const LinearModel& model, const Assignment& assignment) {
  const auto& vars = model.variables();
  std::vector<Rational> value(vars.size());
  for (std::size_t i = 0; i < vars.size(); ++i) {
    auto it = assignment.find(vars[i].name);
    if (it == assignment.end()) throw InputError("variable " + vars[i].name + " is not bound");
    value[i] = it->second;
  }
  Evaluation out;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    const Variable& v = vars[i];
    if (value[i] < v.lower || value[i] > v.upper) out.violated.push_back("bound:" + v.name);
    if (v.type != VarType::Continuous && denominator(value[i]) != 1) {
      out.violated.push_back("integrality:" + v.name);
    }
  }
  for (const Row& row : model.rows()) {
    Rational lhs = 0;
    for (const Term& t : row.terms) lhs += t.coef * value[t.var];
    const bool ok = row.sense == Sense::LessEqual      ? lhs <= row.rhs
                    : row.sense == Sense::GreaterEqual ? lhs >= row.rhs
                                                       : lhs == row.rhs;
    if (!ok) out.violated.push_back(row.name);
  }
  out.objective = model.objective_constant();
  for (const Term& t : model.objective()) out.objective += t.coef * value[t.var];
  out.feasible = out.violated.empty();
  return out;
}

// --- stage 1 --------------------------------------------------------------

LinearModel emit_stage1(const Instance& instance, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw InputError("lambda must lie in [0, 1]");
  const auto names = stage1_names(instance);
  const auto& requests = instance.requests();
  const auto& trucks = instance.trucks();
  const int H = instance.horizon_days();
  const double speed = instance.truck_speed();
  const std::size_t R = requests.size(), V = trucks.size();

  const auto dist = [&](LocationId a, LocationId b) { return exact(instance.travel_dist(a, b)); };
  const auto tt = [&](LocationId a, LocationId b) { return hours(instance.travel_dist(a, b), speed); };

  LinearModel model("stage1");
  // Arc variables and weights.
  std::vector<std::vector<int>> x_vr(V, std::vector<int>(R, -1)), x_rr(R, std::vector<int>(R, -1));
  std::vector<int> x_vs(V, -1), x_rs(R, -1);
  std::vector<std::vector<Rational>> w_vr(V, std::vector<Rational>(R)), w_rr(R, std::vector<Rational>(R));
  Rational total_w = 0;
  for (std::size_t v = 0; v < V; ++v) {
    for (std::size_t r = 0; r < R; ++r) {
      x_vr[v][r] = model.add_binary("x_" + names.truck[v] + "_" + names.request[r]);
      w_vr[v][r] = dist(trucks[v].location, requests[r].pickup_location) +
                   dist(requests[r].pickup_location, requests[r].delivery_location);
      total_w += w_vr[v][r];
    }
  }
  for (std::size_t a = 0; a < R; ++a) {
    for (std::size_t b = 0; b < R; ++b) {
      if (a == b) continue;
      x_rr[a][b] = model.add_binary("x_" + names.request[a] + "_" + names.request[b]);
      w_rr[a][b] = dist(requests[a].delivery_location, requests[b].pickup_location) +
                   dist(requests[b].pickup_location, requests[b].delivery_location);
      total_w += w_rr[a][b];
    }
  }
  for (std::size_t v = 0; v < V; ++v) x_vs[v] = model.add_binary("x_" + names.truck[v] + "_s");
  for (std::size_t r = 0; r < R; ++r) x_rs[r] = model.add_binary("x_" + names.request[r] + "_s");

  std::vector<int> dp(R), dd(R), hp(R), hd(R);
  for (std::size_t r = 0; r < R; ++r) {
    const Request& q = requests[r];
    const std::string& n = names.request[r];
    dp[r] = model.add_variable("dp_" + n, VarType::Integer, q.pickup_day, H - 1);
    dd[r] = model.add_variable("dd_" + n, VarType::Integer, q.delivery_day, H - 1);
    hp[r] = model.add_variable("hp_" + n, VarType::Integer, exact(q.pickup_window.open),
                               exact(q.pickup_window.close));
    hd[r] = model.add_variable("hd_" + n, VarType::Integer, exact(q.delivery_window.open),
                               exact(q.delivery_window.close));
  }

  const Rational M = Rational(24 * H) + total_w;
  const Rational lam = exact(lambda);
  const Rational one_minus = 1 - lam;

  // Objective: lambda * sum c (dd - day^d) + (1 - lambda) * sum w x.
  for (std::size_t r = 0; r < R; ++r) {
    const Rational c = exact(requests[r].late_penalty);
    model.add_objective(dd[r], lam * c);
    model.add_objective_constant(-lam * c * requests[r].delivery_day);
  }
  for (std::size_t v = 0; v < V; ++v) {
    for (std::size_t r = 0; r < R; ++r) model.add_objective(x_vr[v][r], one_minus * w_vr[v][r]);
  }
  for (std::size_t a = 0; a < R; ++a) {
    for (std::size_t b = 0; b < R; ++b) {
      if (a != b) model.add_objective(x_rr[a][b], one_minus * w_rr[a][b]);
    }
  }

  for (std::size_t r = 0; r < R; ++r) {
    Row row = make_row("fulfil_" + names.request[r], "fulfil", Sense::Equal, 1);
    for (std::size_t v = 0; v < V; ++v) add_term(row, x_vr[v][r], 1);
    for (std::size_t a = 0; a < R; ++a) {
      if (a != r) add_term(row, x_rr[a][r], 1);
    }
    model.add_row(std::move(row));
  }
  for (std::size_t v = 0; v < V; ++v) {
    Row row = make_row("depart_" + names.truck[v], "depart", Sense::Equal, 1);
    for (std::size_t r = 0; r < R; ++r) add_term(row, x_vr[v][r], 1);
    add_term(row, x_vs[v], 1);
    model.add_row(std::move(row));
  }
  for (std::size_t r = 0; r < R; ++r) {
    Row row = make_row("flow_" + names.request[r], "flow", Sense::Equal, 0);
    for (std::size_t v = 0; v < V; ++v) add_term(row, x_vr[v][r], 1);
    for (std::size_t a = 0; a < R; ++a) {
      if (a != r) add_term(row, x_rr[a][r], 1);
    }
    for (std::size_t b = 0; b < R; ++b) {
      if (b != r) add_term(row, x_rr[r][b], -1);
    }
    add_term(row, x_rs[r], -1);
    model.add_row(std::move(row));
  }
  for (std::size_t r = 0; r < R; ++r) {
    const Request& q = requests[r];
    Row row = make_row("pickup_before_delivery_" + names.request[r], "pickup_before_delivery",
                       Sense::LessEqual, -1 - tt(q.pickup_location, q.delivery_location));
    add_term(row, dp[r], 24);
    add_term(row, hp[r], 1);
    add_term(row, dd[r], -24);
    add_term(row, hd[r], -1);
    model.add_row(std::move(row));
  }
  for (std::size_t v = 0; v < V; ++v) {
    for (std::size_t r = 0; r < R; ++r) {
      Row row = make_row("first_reach_" + names.truck[v] + "_" + names.request[r], "first_reach",
                         Sense::LessEqual, M - tt(trucks[v].location, requests[r].pickup_location));
      add_term(row, dp[r], -24);
      add_term(row, hp[r], -1);
      add_term(row, x_vr[v][r], M);
      model.add_row(std::move(row));
    }
  }
  for (std::size_t a = 0; a < R; ++a) {
    for (std::size_t b = 0; b < R; ++b) {
      if (a == b) continue;
      Row row = make_row("chain_" + names.request[a] + "_" + names.request[b], "chain", Sense::LessEqual,
                         M - 1 - tt(requests[a].delivery_location, requests[b].pickup_location));
      add_term(row, dd[a], 24);
      add_term(row, hd[a], 1);
      add_term(row, dp[b], -24);
      add_term(row, hp[b], -1);
      add_term(row, x_rr[a][b], M);
      model.add_row(std::move(row));
    }
  }
  return model;
}

Assignment stage1_assignment(const LinearModel& model, const Instance& instance, const TaskPlan& plan) {
  const auto names = stage1_names(instance);
  const auto& requests = instance.requests();
  Assignment a;
  for (const Variable& v : model.variables()) a[v.name] = 0;

  std::vector<Hours> pickup_at(requests.size(), 0.0), delivery_at(requests.size(), 0.0);
  for (std::size_t t = 0; t < plan.tasks.size(); ++t) {
    const Task& task = plan.tasks[t];
    if (task.kind == TaskKind::Pickup) pickup_at[task.request] = plan.tentative_start[t];
    if (task.kind == TaskKind::Delivery) delivery_at[task.request] = plan.tentative_start[t];
  }
  for (std::size_t v = 0; v < plan.truck_routes.size(); ++v) {
    std::string from = names.truck[v];
    for (TaskId t : plan.truck_routes[v]) {
      const Task& task = plan.tasks[t];
      if (task.kind != TaskKind::Pickup) continue;
      a["x_" + from + "_" + names.request[task.request]] = 1;
      from = names.request[task.request];
    }
    a["x_" + from + "_s"] = 1;
  }
  for (std::size_t r = 0; r < requests.size(); ++r) {
    const Request& q = requests[r];
    const std::string& n = names.request[r];
    int day = window_day(pickup_at[r], q.pickup_day, instance.horizon_days(), q.pickup_window);
    if (day < 0) day = static_cast<int>(std::floor(pickup_at[r] / 24.0));
    a["dp_" + n] = day;
    a["hp_" + n] = exact(pickup_at[r]) - 24 * day;
    const int dday = plan.delivery_day[r];
    a["dd_" + n] = dday;
    a["hd_" + n] = exact(delivery_at[r]) - 24 * dday;
  }
  return a;
}

// --- stage 2 --------------------------------------------------------------

LinearModel emit_stage2(const Instance& instance, const TaskPlan& plan) {
  const CrewProblem problem(instance, plan);
  const auto names = stage2_names(instance);
  const int T = problem.num_tasks();
  const int D = problem.num_drivers();
  const int H = instance.horizon_days();
  const double sspeed = instance.shuttle_speed();
  const auto tts = [&](LocationId a, LocationId b) {
    return a == b ? Rational(0) : hours(instance.travel_dist(a, b), sspeed);
  };
  const auto duration = [&](TaskId t) {
    const Task& task = problem.task(t);
    if (task.kind != TaskKind::Trip) return Rational(1);
    return hours(instance.travel_dist(task.origin, task.destination), instance.truck_speed());
  };
  const auto weight = [&](LocationId a, LocationId b) { return a == b ? Rational(0) : tts(a, b) + 1; };

  // Static start-time bounds used to prune impossible arcs.
  std::vector<Rational> lb(T), ub(T);
  for (TaskId t = 0; t < T; ++t) {
    const Task& task = problem.task(t);
    if (task.kind == TaskKind::Trip) {
      lb[t] = 0;
      ub[t] = Rational(24 * H) - duration(t);
    } else {
      const Request& q = instance.requests()[task.request];
      if (task.kind == TaskKind::Pickup) {
        lb[t] = Rational(24 * q.pickup_day) + exact(q.pickup_window.open);
        ub[t] = Rational(24 * (H - 1)) + exact(q.pickup_window.close);
      } else {
        const int day = plan.delivery_day[task.request];
        lb[t] = Rational(24 * day) + exact(q.delivery_window.open);
        ub[t] = Rational(24 * day) + exact(q.delivery_window.close);
      }
    }
  }
  std::vector<int> truck_pos(T, 0);
  for (const auto& route : plan.truck_routes) {
    for (std::size_t k = 0; k < route.size(); ++k) truck_pos[route[k]] = static_cast<int>(k);
  }
  const auto arc_possible = [&](TaskId a, TaskId b) {
    if (a == b) return false;
    const Task& ta = problem.task(a);
    const Task& tb = problem.task(b);
    if (ta.truck == tb.truck && truck_pos[b] < truck_pos[a]) return false;
    return lb[a] + duration(a) + tts(ta.destination, tb.origin) <= ub[b];
  };

  Rational max_tts = 0;
  for (LocationId a = 0; a < static_cast<LocationId>(instance.network().size()); ++a) {
    for (LocationId b = 0; b < static_cast<LocationId>(instance.network().size()); ++b) {
      if (a != b && instance.network().connected(a, b)) max_tts = std::max(max_tts, tts(a, b));
    }
  }
  const Rational M = Rational(24 * H + 1) + max_tts;

  LinearModel model("stage2");
  std::vector<int> delta(T);
  for (TaskId t = 0; t < T; ++t) {
    delta[t] = model.add_variable("delta_" + task_node(t), VarType::Integer, lb[t], ub[t]);
  }

  std::vector<LocationId> sources;
  for (DriverId d = 0; d < D; ++d) sources.push_back(problem.driver_location(d));
  std::sort(sources.begin(), sources.end());
  sources.erase(std::unique(sources.begin(), sources.end()), sources.end());

  // y variables.
  std::map<std::pair<LocationId, TaskId>, int> y_src;
  std::map<std::pair<TaskId, TaskId>, int> y_tt;
  for (LocationId l : sources) {
    for (TaskId t = 0; t < T; ++t) {
      if (tts(l, problem.task(t).origin) <= ub[t]) {
        y_src[{l, t}] = model.add_binary("y_l" + std::to_string(l) + "_" + task_node(t));
      }
    }
  }
  for (TaskId a = 0; a < T; ++a) {
    for (TaskId b = 0; b < T; ++b) {
      if (arc_possible(a, b)) y_tt[{a, b}] = model.add_binary("y_" + task_node(a) + "_" + task_node(b));
    }
  }

  // x variables per driver.
  struct DriverArcs {
    std::vector<int> src;                    // per task, -1 when absent
    int src_sink = -1;
    std::vector<int> sink;                   // per task
    std::map<std::pair<TaskId, TaskId>, int> between;
  };
  std::vector<DriverArcs> x(D);
  for (DriverId d = 0; d < D; ++d) {
    const std::string& dn = names.driver[d];
    const LocationId home = problem.driver_location(d);
    DriverArcs& arcs = x[d];
    arcs.src.assign(T, -1);
    arcs.sink.assign(T, -1);
    for (TaskId t = 0; t < T; ++t) {
      if (y_src.count({home, t})) {
        arcs.src[t] = model.add_binary("x_" + dn + "_src_" + task_node(t));
        model.add_objective(arcs.src[t], weight(home, problem.task(t).origin));
      }
    }
    for (const auto& [key, y] : y_tt) {
      const int var = model.add_binary("x_" + dn + "_" + task_node(key.first) + "_" + task_node(key.second));
      arcs.between[key] = var;
      model.add_objective(var, weight(problem.task(key.first).destination, problem.task(key.second).origin));
    }
    for (TaskId t = 0; t < T; ++t) arcs.sink[t] = model.add_binary("x_" + dn + "_" + task_node(t) + "_snk");
    arcs.src_sink = model.add_binary("x_" + dn + "_src_snk");
  }

  // Crew size.
  for (TaskId t = 0; t < T; ++t) {
    Row ge = make_row("cover_ge_" + task_node(t), "cover", Sense::GreaterEqual, 1);
    for (DriverId d = 0; d < D; ++d) {
      add_term(ge, x[d].src[t], 1);
      for (const auto& [key, var] : x[d].between) {
        if (key.second == t) add_term(ge, var, 1);
      }
    }
    Row le = ge;
    le.name = "cover_le_" + task_node(t);
    le.sense = Sense::LessEqual;
    le.rhs = 2;
    model.add_row(std::move(ge));
    model.add_row(std::move(le));
  }

  for (DriverId d = 0; d < D; ++d) {
    const std::string& dn = names.driver[d];
    Row start = make_row("start_" + dn, "driver_start", Sense::Equal, 1);
    Row end = make_row("end_" + dn, "driver_end", Sense::Equal, 1);
    for (TaskId t = 0; t < T; ++t) {
      add_term(start, x[d].src[t], 1);
      add_term(end, x[d].sink[t], 1);
    }
    add_term(start, x[d].src_sink, 1);
    add_term(end, x[d].src_sink, 1);
    model.add_row(std::move(start));
    model.add_row(std::move(end));

    for (TaskId t = 0; t < T; ++t) {
      Row flow = make_row("flow_" + dn + "_" + task_node(t), "flow", Sense::Equal, 0);
      add_term(flow, x[d].src[t], 1);
      for (const auto& [key, var] : x[d].between) {
        if (key.second == t) add_term(flow, var, 1);
        if (key.first == t) add_term(flow, var, -1);
      }
      add_term(flow, x[d].sink[t], -1);
      model.add_row(std::move(flow));
    }

    const LocationId home = problem.driver_location(d);
    for (TaskId t = 0; t < T; ++t) {
      if (x[d].src[t] < 0) continue;
      Row link = make_row("use_" + dn + "_src_" + task_node(t), "arc_use", Sense::LessEqual, 0);
      add_term(link, x[d].src[t], 1);
      add_term(link, y_src.at({home, t}), -1);
      model.add_row(std::move(link));
    }
    for (const auto& [key, var] : x[d].between) {
      Row link = make_row("use_" + dn + "_" + task_node(key.first) + "_" + task_node(key.second),
                          "arc_use", Sense::LessEqual, 0);
      add_term(link, var, 1);
      add_term(link, y_tt.at(key), -1);
      model.add_row(std::move(link));
    }
  }

  for (const auto& [key, y] : y_src) {
    const Rational need = tts(key.first, problem.task(key.second).origin);
    if (need == 0) continue;
    Row row = make_row("reach_l" + std::to_string(key.first) + "_" + task_node(key.second),
                       "source_shuttle", Sense::LessEqual, 0);
    add_term(row, y, need);
    add_term(row, delta[key.second], -1);
    model.add_row(std::move(row));
  }

  for (const auto& route : plan.truck_routes) {
    for (std::size_t k = 1; k < route.size(); ++k) {
      const TaskId a = route[k - 1], b = route[k];
      Row row = make_row("truck_" + task_node(a) + "_" + task_node(b), "truck_precedence",
                         Sense::LessEqual, -duration(a));
      add_term(row, delta[a], 1);
      add_term(row, delta[b], -1);
      model.add_row(std::move(row));
    }
  }

  for (const auto& [key, y] : y_tt) {
    const auto [a, b] = key;
    if (problem.truck_next(a) == b) continue;  // covered by truck precedence
    Row row = make_row("gap_" + task_node(a) + "_" + task_node(b), "sequence", Sense::LessEqual,
                       M - duration(a) - tts(problem.task(a).destination, problem.task(b).origin));
    add_term(row, delta[a], 1);
    add_term(row, delta[b], -1);
    add_term(row, y, M);
    model.add_row(std::move(row));
  }

  // Pickup day selectors.
  for (TaskId t = 0; t < T; ++t) {
    const Task& task = problem.task(t);
    if (task.kind != TaskKind::Pickup) continue;
    const Request& q = instance.requests()[task.request];
    Row pick = make_row("day_" + task_node(t), "pickup_window", Sense::Equal, 1);
    Row lo = make_row("pick_lo_" + task_node(t), "pickup_window", Sense::GreaterEqual, 0);
    Row hi = make_row("pick_hi_" + task_node(t), "pickup_window", Sense::LessEqual, 0);
    add_term(lo, delta[t], 1);
    add_term(hi, delta[t], 1);
    for (int day = q.pickup_day; day < H; ++day) {
      const int z = model.add_binary("z_" + task_node(t) + "_" + std::to_string(day));
      add_term(pick, z, 1);
      add_term(lo, z, -(Rational(24 * day) + exact(q.pickup_window.open)));
      add_term(hi, z, -(Rational(24 * day) + exact(q.pickup_window.close)));
    }
    model.add_row(std::move(pick));
    model.add_row(std::move(lo));
    model.add_row(std::move(hi));
  }
  return model;
}

Assignment stage2_assignment(const LinearModel& model, const CrewProblem& problem,
                             const Schedule& schedule) {
  const auto names = stage2_names(problem.instance());
  Assignment a;
  for (const Variable& v : model.variables()) a[v.name] = 0;
  const auto set = [&](const std::string& name) {
    if (!a.count(name)) throw InputError("schedule uses arc " + name + " absent from the model");
    a[name] = 1;
  };
  for (TaskId t = 0; t < problem.num_tasks(); ++t) {
    a["delta_" + task_node(t)] = exact(schedule.start[t]);
    const Task& task = problem.task(t);
    if (task.kind == TaskKind::Pickup) {
      const Request& q = problem.instance().requests()[task.request];
      const int day = window_day(schedule.start[t], q.pickup_day, problem.horizon_days(), q.pickup_window);
      if (day >= 0) a["z_" + task_node(t) + "_" + std::to_string(day)] = 1;
    }
  }
  for (DriverId d = 0; d < problem.num_drivers(); ++d) {
    const std::string& dn = names.driver[d];
    const auto& route = schedule.routes[d];
    const std::string home = "l" + std::to_string(problem.driver_location(d));
    if (route.empty()) {
      set("x_" + dn + "_src_snk");
      continue;
    }
    set("x_" + dn + "_src_" + task_node(route.front()));
    set("y_" + home + "_" + task_node(route.front()));
    for (std::size_t k = 1; k < route.size(); ++k) {
      const std::string arc = task_node(route[k - 1]) + "_" + task_node(route[k]);
      set("x_" + dn + "_" + arc);
      set("y_" + arc);
    }
    set("x_" + dn + "_" + task_node(route.back()) + "_snk");
  }
  return a;
}

}  // namespace vrcsp
