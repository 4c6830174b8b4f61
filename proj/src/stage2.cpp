#include "vrcsp/stage2.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <mutex>
#include <numeric>
#include <thread>

#include "vrcsp/taskgraph.hpp"

namespace vrcsp {

namespace {

constexpr double kImprove = 1e-9;

using RouteEdit = std::pair<DriverId, std::vector<TaskId>>;

struct Junction {
  bool ok = false;
  double delta = 0.0;  // change of Z3
  std::string why;
};

Junction reject(std::string why) { return {false, 0.0, std::move(why)}; }

std::vector<TaskId> construction_order(const CrewProblem& problem, std::span<const Hours> start) {
  std::vector<int> position(static_cast<std::size_t>(problem.num_tasks()), 0);
  for (const auto& route : problem.plan().truck_routes) {
    for (std::size_t k = 0; k < route.size(); ++k) position[route[k]] = static_cast<int>(k);
  }
  std::vector<TaskId> order(static_cast<std::size_t>(problem.num_tasks()));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](TaskId a, TaskId b) {
    if (start[a] != start[b]) return start[a] < start[b];
    if (problem.task(a).truck != problem.task(b).truck) return problem.task(a).truck < problem.task(b).truck;
    return position[a] < position[b];
  });
  return order;
}

RestStatus rest_of(const CrewProblem& problem, std::span<const Hours> start,
                   std::span<const TaskId> route, DriverId d, Regulation regulation) {
  return evaluate_rest(work_intervals(problem, start, route, problem.driver_location(d)),
                       problem.horizon_days(), regulation);
}

// Integer retiming range of t given the drivers covering it and their route
// positions.
std::vector<Hours> retime_values(const CrewProblem& problem, std::span<const Hours> start,
                                 const std::vector<std::vector<TaskId>>& routes, TaskId t) {
  const Task& task = problem.task(t);
  double lo = 0.0;
  double hi = problem.horizon_hours() - task.duration;
  if (const TaskId prev = problem.truck_prev(t); prev >= 0) {
    lo = std::max(lo, start[prev] + problem.task(prev).duration);
  }
  if (const TaskId next = problem.truck_next(t); next >= 0) {
    hi = std::min(hi, start[next] - task.duration);
  }
  for (DriverId d = 0; d < static_cast<DriverId>(routes.size()); ++d) {
    const auto& route = routes[d];
    const auto it = std::find(route.begin(), route.end(), t);
    if (it == route.end()) continue;
    const auto pos = it - route.begin();
    if (pos > 0) {
      const Task& u = problem.task(route[pos - 1]);
      lo = std::max(lo, start[route[pos - 1]] + u.duration + problem.shuttle_time(u.destination, task.origin));
    } else {
      lo = std::max(lo, problem.shuttle_time(problem.driver_location(d), task.origin));
    }
    if (pos + 1 < static_cast<long>(route.size())) {
      const TaskId v = route[pos + 1];
      hi = std::min(hi, start[v] - problem.shuttle_time(task.destination, problem.task(v).origin) -
                            task.duration);
    }
  }
  std::vector<Hours> out;
  for (double v = ceil_hour(lo); v <= floor_hour(hi); v += 1.0) {
    if (problem.in_start_domain(t, v)) out.push_back(v);
  }
  return out;
}

class Engine {
 public:
  Engine(const CrewProblem& problem, const SearchConfig& config, Schedule schedule)
      : p_(problem), cfg_(config), s_(std::move(schedule)) {
    s_.regulation = cfg_.regulation;
    cost_.resize(static_cast<std::size_t>(p_.num_drivers()));
    rest_.resize(static_cast<std::size_t>(p_.num_drivers()));
    for (DriverId d = 0; d < p_.num_drivers(); ++d) refresh(d);
    refresh_cover();
  }

  const Schedule& schedule() const { return s_; }
  Schedule take() { return std::move(s_); }

  double z3() const { return std::accumulate(cost_.begin(), cost_.end(), 0.0); }
  double excess() const {
    double total = 0.0;
    for (const RestStatus& r : rest_) total += r.excess;
    return total;
  }

  Junction check(const MoveArgs& m) const;
  std::vector<DriverId> affected(const MoveArgs& m) const;
  std::vector<RouteEdit> build(const MoveArgs& m) const;

  // Rest status of the touched drivers after the move; empty optional when a
  // route would not be a path (never for checked moves).
  std::vector<RestStatus> rest_after(const MoveArgs& m, const std::vector<RouteEdit>& edits,
                                     const std::vector<DriverId>& drivers) const;

  void commit(const MoveArgs& m, const std::vector<RouteEdit>& edits);

  bool try_move(const MoveArgs& m, Objective objective);
  bool scan(Move move, Objective objective);
  int descend(Objective objective, const std::vector<Move>& order, double deadline, VndTrace* trace);

  void perturb(Rng& rng);

 private:
  Node node(DriverId d, int k) const {
    const auto& r = s_.routes[d];
    if (k < 0) return Node::source(p_.driver_location(d));
    if (k >= static_cast<int>(r.size())) return Node::sink();
    return Node::task(r[k]);
  }
  std::optional<double> arc(Node a, Node b) const { return arc_exists(p_, s_.start, a, b); }
  // Weight of the existing arc entering position k of d's route.
  double current(DriverId d, int k) const { return arc(node(d, k - 1), node(d, k)).value_or(0.0); }
  int insertion_index(DriverId d, TaskId t) const {
    const auto& r = s_.routes[d];
    const auto it = std::lower_bound(r.begin(), r.end(), s_.start[t],
                                     [&](TaskId u, Hours v) { return s_.start[u] < v; });
    return static_cast<int>(it - r.begin());
  }
  bool covers(DriverId d, TaskId t) const {
    return std::find(cover_[t].begin(), cover_[t].end(), d) != cover_[t].end();
  }
  bool valid_driver(DriverId d) const { return d >= 0 && d < p_.num_drivers(); }
  bool valid_pos(DriverId d, int k) const {
    return valid_driver(d) && k >= 0 && k < static_cast<int>(s_.routes[d].size());
  }

  std::vector<DriverId> driver_order(Objective objective) const {
    std::vector<DriverId> order(static_cast<std::size_t>(p_.num_drivers()));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](DriverId a, DriverId b) {
      if (objective == Objective::Cost) return cost_[a] > cost_[b];
      return rest_[a].excess > rest_[b].excess;
    });
    return order;
  }

  void refresh(DriverId d) {
    cost_[d] = route_cost(p_, s_.routes[d], p_.driver_location(d));
    rest_[d] = rest_of(p_, s_.start, s_.routes[d], d, cfg_.regulation);
  }
  void refresh_cover() {
    cover_.assign(static_cast<std::size_t>(p_.num_tasks()), {});
    for (DriverId d = 0; d < p_.num_drivers(); ++d) {
      for (TaskId t : s_.routes[d]) cover_[t].push_back(d);
    }
  }

  const CrewProblem& p_;
  const SearchConfig& cfg_;
  Schedule s_;
  std::vector<double> cost_;
  std::vector<RestStatus> rest_;
  std::vector<std::vector<DriverId>> cover_;
  mutable std::vector<Hours> scratch_;
};

Junction Engine::check(const MoveArgs& m) const {
  switch (m.move) {
    case Move::Relocate: {
      if (!valid_pos(m.d1, m.pos1) || !valid_driver(m.d2) || m.d1 == m.d2) return reject("invalid arguments");
      const TaskId t = s_.routes[m.d1][m.pos1];
      if (covers(m.d2, t)) return reject("crewOver");
      const auto bridge = arc(node(m.d1, m.pos1 - 1), node(m.d1, m.pos1 + 1));
      if (!bridge) return reject("pathBreak");
      const int k = insertion_index(m.d2, t);
      const auto in = arc(node(m.d2, k - 1), Node::task(t));
      const auto out = arc(Node::task(t), node(m.d2, k));
      if (!in || !out) return reject("pathBreak");
      const double delta = *bridge - current(m.d1, m.pos1) - current(m.d1, m.pos1 + 1) + *in + *out -
                           current(m.d2, k);
      return {true, delta, ""};
    }
    case Move::SwapTasks: {
      if (!valid_pos(m.d1, m.pos1) || !valid_pos(m.d2, m.pos2) || m.d1 == m.d2) {
        return reject("invalid arguments");
      }
      const TaskId a = s_.routes[m.d1][m.pos1], b = s_.routes[m.d2][m.pos2];
      if (a == b || covers(m.d2, a) || covers(m.d1, b)) return reject("crewOver");
      const auto a1 = arc(node(m.d1, m.pos1 - 1), Node::task(b));
      const auto a2 = arc(Node::task(b), node(m.d1, m.pos1 + 1));
      const auto b1 = arc(node(m.d2, m.pos2 - 1), Node::task(a));
      const auto b2 = arc(Node::task(a), node(m.d2, m.pos2 + 1));
      if (!a1 || !a2 || !b1 || !b2) return reject("pathBreak");
      const double delta = *a1 + *a2 + *b1 + *b2 - current(m.d1, m.pos1) - current(m.d1, m.pos1 + 1) -
                           current(m.d2, m.pos2) - current(m.d2, m.pos2 + 1);
      return {true, delta, ""};
    }
    case Move::SwapArcs: {
      if (!valid_driver(m.d1) || !valid_driver(m.d2) || m.d1 == m.d2) return reject("invalid arguments");
      const int n1 = static_cast<int>(s_.routes[m.d1].size());
      const int n2 = static_cast<int>(s_.routes[m.d2].size());
      if (m.pos1 < 0 || m.pos1 > n1 || m.pos2 < 0 || m.pos2 > n2) return reject("invalid arguments");
      if (m.pos1 == n1 && m.pos2 == n2) return reject("invalid arguments");
      const auto x = arc(node(m.d1, m.pos1 - 1), node(m.d2, m.pos2));
      const auto y = arc(node(m.d2, m.pos2 - 1), node(m.d1, m.pos1));
      if (!x || !y) return reject("pathBreak");
      return {true, *x + *y - current(m.d1, m.pos1) - current(m.d2, m.pos2), ""};
    }
    case Move::Insert: {
      if (m.task < 0 || m.task >= p_.num_tasks() || !valid_driver(m.d2)) return reject("invalid arguments");
      if (cfg_.crew_max < 2 || cover_[m.task].size() != 1 || covers(m.d2, m.task)) {
        return reject("crewOver");
      }
      const int k = insertion_index(m.d2, m.task);
      const auto in = arc(node(m.d2, k - 1), Node::task(m.task));
      const auto out = arc(Node::task(m.task), node(m.d2, k));
      if (!in || !out) return reject("pathBreak");
      return {true, *in + *out - current(m.d2, k), ""};
    }
    case Move::Remove: {
      if (!valid_pos(m.d1, m.pos1)) return reject("invalid arguments");
      const TaskId t = s_.routes[m.d1][m.pos1];
      if (cover_[t].size() != 2) return reject("crewUnder");
      const auto bridge = arc(node(m.d1, m.pos1 - 1), node(m.d1, m.pos1 + 1));
      if (!bridge) return reject("pathBreak");
      return {true, *bridge - current(m.d1, m.pos1) - current(m.d1, m.pos1 + 1), ""};
    }
    case Move::Retime: {
      if (m.task < 0 || m.task >= p_.num_tasks()) return reject("invalid arguments");
      const auto values = retime_values(p_, s_.start, s_.routes, m.task);
      if (std::find(values.begin(), values.end(), m.value) == values.end()) {
        return reject("start time outside the feasible range");
      }
      return {true, 0.0, ""};
    }
  }
  return reject("invalid arguments");
}

std::vector<DriverId> Engine::affected(const MoveArgs& m) const {
  switch (m.move) {
    case Move::Relocate:
    case Move::SwapTasks:
    case Move::SwapArcs: return {m.d1, m.d2};
    case Move::Insert: return {m.d2};
    case Move::Remove: return {m.d1};
    case Move::Retime: return cover_[m.task];
  }
  return {};
}

std::vector<RouteEdit> Engine::build(const MoveArgs& m) const {
  std::vector<RouteEdit> out;
  switch (m.move) {
    case Move::Relocate: {
      auto r1 = s_.routes[m.d1];
      auto r2 = s_.routes[m.d2];
      const TaskId t = r1[m.pos1];
      r1.erase(r1.begin() + m.pos1);
      r2.insert(r2.begin() + insertion_index(m.d2, t), t);
      out.emplace_back(m.d1, std::move(r1));
      out.emplace_back(m.d2, std::move(r2));
      break;
    }
    case Move::SwapTasks: {
      auto r1 = s_.routes[m.d1];
      auto r2 = s_.routes[m.d2];
      std::swap(r1[m.pos1], r2[m.pos2]);
      out.emplace_back(m.d1, std::move(r1));
      out.emplace_back(m.d2, std::move(r2));
      break;
    }
    case Move::SwapArcs: {
      const auto& a = s_.routes[m.d1];
      const auto& b = s_.routes[m.d2];
      std::vector<TaskId> r1(a.begin(), a.begin() + m.pos1);
      r1.insert(r1.end(), b.begin() + m.pos2, b.end());
      std::vector<TaskId> r2(b.begin(), b.begin() + m.pos2);
      r2.insert(r2.end(), a.begin() + m.pos1, a.end());
      out.emplace_back(m.d1, std::move(r1));
      out.emplace_back(m.d2, std::move(r2));
      break;
    }
    case Move::Insert: {
      auto r2 = s_.routes[m.d2];
      r2.insert(r2.begin() + insertion_index(m.d2, m.task), m.task);
      out.emplace_back(m.d2, std::move(r2));
      break;
    }
    case Move::Remove: {
      auto r1 = s_.routes[m.d1];
      r1.erase(r1.begin() + m.pos1);
      out.emplace_back(m.d1, std::move(r1));
      break;
    }
    case Move::Retime: break;
  }
  return out;
}

std::vector<RestStatus> Engine::rest_after(const MoveArgs& m, const std::vector<RouteEdit>& edits,
                                           const std::vector<DriverId>& drivers) const {
  std::span<const Hours> start = s_.start;
  if (m.move == Move::Retime) {
    scratch_ = s_.start;
    scratch_[m.task] = m.value;
    start = scratch_;
  }
  std::vector<RestStatus> out;
  for (DriverId d : drivers) {
    const std::vector<TaskId>* route = &s_.routes[d];
    for (const auto& [e, r] : edits) {
      if (e == d) route = &r;
    }
    out.push_back(rest_of(p_, start, *route, d, cfg_.regulation));
  }
  return out;
}

void Engine::commit(const MoveArgs& m, const std::vector<RouteEdit>& edits) {
  if (m.move == Move::Retime) s_.start[m.task] = m.value;
  for (const auto& [d, r] : edits) s_.routes[d] = r;
  for (DriverId d : affected(m)) refresh(d);
  refresh_cover();
}

bool Engine::try_move(const MoveArgs& m, Objective objective) {
  const Junction j = check(m);
  if (!j.ok) return false;
  if (objective == Objective::Cost && j.delta >= -kImprove) return false;
  const auto drivers = affected(m);
  if (objective == Objective::Excess &&
      std::all_of(drivers.begin(), drivers.end(), [&](DriverId d) { return rest_[d].excess <= 0.0; })) {
    return false;
  }
  const auto edits = build(m);
  const auto after = rest_after(m, edits, drivers);
  if (objective == Objective::Cost) {
    for (const RestStatus& r : after) {
      if (!r.feasible()) return false;
    }
  } else {
    double before = 0.0, now = 0.0;
    for (std::size_t k = 0; k < drivers.size(); ++k) {
      if (!after[k].semi_feasible()) return false;
      before += rest_[drivers[k]].excess;
      now += after[k].excess;
    }
    if (now >= before - kImprove) return false;
  }
  commit(m, edits);
  return true;
}

bool Engine::scan(Move move, Objective objective) {
  const auto order = driver_order(objective);
  const bool excess_mode = objective == Objective::Excess;
  const auto idle = [&](DriverId d) { return excess_mode && rest_[d].excess <= 0.0; };
  const int D = p_.num_drivers();

  switch (move) {
    case Move::Relocate:
      for (DriverId d1 : order) {
        for (int i = 0; i < static_cast<int>(s_.routes[d1].size()); ++i) {
          for (DriverId d2 : order) {
            if (d2 == d1 || (idle(d1) && idle(d2))) continue;
            if (try_move({Move::Relocate, d1, i, d2, -1, -1, 0.0}, objective)) return true;
          }
        }
      }
      return false;
    case Move::SwapTasks:
      for (int a = 0; a < D; ++a) {
        for (int b = a + 1; b < D; ++b) {
          const DriverId d1 = order[a], d2 = order[b];
          if (idle(d1) && idle(d2)) continue;
          for (int i = 0; i < static_cast<int>(s_.routes[d1].size()); ++i) {
            for (int j = 0; j < static_cast<int>(s_.routes[d2].size()); ++j) {
              if (try_move({Move::SwapTasks, d1, i, d2, j, -1, 0.0}, objective)) return true;
            }
          }
        }
      }
      return false;
    case Move::SwapArcs:
      for (int a = 0; a < D; ++a) {
        for (int b = a + 1; b < D; ++b) {
          const DriverId d1 = order[a], d2 = order[b];
          if (idle(d1) && idle(d2)) continue;
          for (int i = 0; i <= static_cast<int>(s_.routes[d1].size()); ++i) {
            for (int j = 0; j <= static_cast<int>(s_.routes[d2].size()); ++j) {
              if (try_move({Move::SwapArcs, d1, i, d2, j, -1, 0.0}, objective)) return true;
            }
          }
        }
      }
      return false;
    case Move::Insert:
      if (cfg_.crew_max < 2) return false;
      for (DriverId d1 : order) {
        for (int i = 0; i < static_cast<int>(s_.routes[d1].size()); ++i) {
          const TaskId t = s_.routes[d1][i];
          if (cover_[t].size() != 1) continue;
          for (DriverId d2 : order) {
            if (d2 == d1 || idle(d2)) continue;
            if (try_move({Move::Insert, -1, -1, d2, -1, t, 0.0}, objective)) return true;
          }
        }
      }
      return false;
    case Move::Remove:
      for (DriverId d1 : order) {
        if (idle(d1)) continue;
        for (int i = 0; i < static_cast<int>(s_.routes[d1].size()); ++i) {
          if (cover_[s_.routes[d1][i]].size() != 2) continue;
          if (try_move({Move::Remove, d1, i, -1, -1, -1, 0.0}, objective)) return true;
        }
      }
      return false;
    case Move::Retime:
      if (!excess_mode) return false;  // never changes Z3
      for (DriverId d1 : order) {
        if (idle(d1)) continue;
        for (int i = 0; i < static_cast<int>(s_.routes[d1].size()); ++i) {
          const TaskId t = s_.routes[d1][i];
          for (Hours v : retime_values(p_, s_.start, s_.routes, t)) {
            if (v == s_.start[t]) continue;
            if (try_move({Move::Retime, -1, -1, -1, -1, t, v}, objective)) return true;
          }
        }
      }
      return false;
  }
  return false;
}

int Engine::descend(Objective objective, const std::vector<Move>& order, double deadline,
                    VndTrace* trace) {
  const auto value = [&] { return objective == Objective::Cost ? z3() : excess(); };
  if (trace) trace->objective.push_back(value());
  int accepted = 0;
  std::size_t k = 0;
  while (k < order.size()) {
    if (steady_seconds() >= deadline) break;
    if (objective == Objective::Excess && excess() <= 0.0) break;
    if (scan(order[k], objective)) {
      ++accepted;
      if (trace) trace->objective.push_back(value());
      k = 0;
    } else {
      ++k;
    }
  }
  if (trace) trace->accepted += accepted;
  return accepted;
}

void Engine::perturb(Rng& rng) {
  std::vector<TaskId> order(static_cast<std::size_t>(p_.num_tasks()));
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);
  for (TaskId t : order) {
    auto values = retime_values(p_, s_.start, s_.routes, t);
    rng.shuffle(values);
    for (Hours v : values) {
      if (v == s_.start[t]) break;
      const MoveArgs m{Move::Retime, -1, -1, -1, -1, t, v};
      const auto after = rest_after(m, {}, cover_[t]);
      if (std::all_of(after.begin(), after.end(), [](const RestStatus& r) { return r.feasible(); })) {
        commit(m, {});
        break;
      }
    }
  }
}

Construction construct(const CrewProblem& problem, const SearchConfig& config, Rng* rng,
                       double alpha, bool semi) {
  Schedule s;
  s.start = problem.plan().tentative_start;
  s.routes.assign(static_cast<std::size_t>(problem.num_drivers()), {});
  s.regulation = config.regulation;
  std::vector<RestStatus> rest(static_cast<std::size_t>(problem.num_drivers()));

  struct Candidate {
    DriverId d;
    double cost;
    RestStatus status;
  };
  std::vector<Candidate> feasible, fallback;
  std::vector<TaskId> route;

  for (TaskId t : construction_order(problem, s.start)) {
    feasible.clear();
    fallback.clear();
    for (DriverId d = 0; d < problem.num_drivers(); ++d) {
      const auto& current = s.routes[d];
      const Node last = current.empty() ? Node::source(problem.driver_location(d)) : Node::task(current.back());
      const auto w = arc_exists(problem, s.start, last, Node::task(t));
      if (!w) continue;
      route.assign(current.begin(), current.end());
      route.push_back(t);
      const RestStatus status = rest_of(problem, s.start, route, d, config.regulation);
      if (status.feasible()) {
        feasible.push_back({d, *w, status});
      } else if (semi && status.semi_feasible()) {
        fallback.push_back({d, status.excess - rest[d].excess, status});
      }
    }

    const Candidate* pick = nullptr;
    if (!feasible.empty()) {
      double lo = feasible.front().cost, hi = lo;
      for (const Candidate& c : feasible) {
        lo = std::min(lo, c.cost);
        hi = std::max(hi, c.cost);
      }
      if (alpha <= 0.0 || rng == nullptr) {
        for (const Candidate& c : feasible) {
          if (c.cost <= lo + kImprove) {
            pick = &c;
            break;
          }
        }
      } else {
        std::vector<const Candidate*> rcl;
        for (const Candidate& c : feasible) {
          if (c.cost <= lo + alpha * (hi - lo) + kImprove) rcl.push_back(&c);
        }
        pick = rcl[rng->index(rcl.size())];
      }
    } else if (!fallback.empty()) {
      double lo = fallback.front().cost;
      for (const Candidate& c : fallback) lo = std::min(lo, c.cost);
      std::vector<const Candidate*> ties;
      for (const Candidate& c : fallback) {
        if (c.cost <= lo + kImprove) ties.push_back(&c);
      }
      pick = rng ? ties[rng->index(ties.size())] : ties.front();
    } else {
      return {std::nullopt, t};
    }
    s.routes[pick->d].push_back(t);
    rest[pick->d] = pick->status;
  }
  return {std::move(s), -1};
}

std::uint64_t derive_seed(std::uint64_t seed, int restart) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(restart + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Best schedule over concurrent restarts; ties go to the lower restart index
// so the outcome does not depend on thread timing.
class BestCell {
 public:
  void offer(double z3, int restart, const Schedule& schedule) {
    std::lock_guard<std::mutex> lock(mutex_);
    if (!best_ || z3 < z3_ - kImprove || (std::abs(z3 - z3_) <= kImprove && restart < restart_)) {
      best_ = schedule;
      z3_ = z3;
      restart_ = restart;
    }
  }
  std::optional<Schedule> get() const { return best_; }
  int restart() const { return restart_; }

 private:
  std::mutex mutex_;
  std::optional<Schedule> best_;
  double z3_ = 0.0;
  int restart_ = -1;
};

RunStats run_one(const CrewProblem& problem, const SearchConfig& config, int restart,
                 BestCell& cell) {
  Rng rng(config.restarts > 1 ? derive_seed(config.seed, restart) : config.seed);
  RunStats st;
  const double began = steady_seconds();
  const double deadline = began + config.time_limit_s;
  const double step = config.beta_step_pct / 100.0;
  double beta = config.beta_init;
  bool anchored = std::isfinite(beta);
  std::optional<Schedule> best;
  double best_z3 = 0.0;

  const auto out_of_time = [&] { return steady_seconds() >= deadline; };
  const auto record = [&](const Schedule& s) {
    const double z = cost_stage2(problem, s);
    if (!best || z < best_z3 - kImprove) {
      best = s;
      best_z3 = z;
      st.iteration_to_best = st.iterations;
      st.time_to_best_s = steady_seconds() - began;
    }
  };

  while (!out_of_time() && (config.max_iterations < 0 || st.iterations < config.max_iterations)) {
    Construction c = semi_greedy_construct(problem, config, rng);
    std::optional<Schedule> s;
    if (c.schedule) {
      const double excess = w_inf(problem, *c.schedule);
      if (excess <= 0.0) {
        s = std::move(c.schedule);
      } else if (excess > beta) {
        beta *= 1.0 + step;
        ++st.repairs_skipped;
      } else {
        ++st.repairs_attempted;
        if (anchored) beta *= 1.0 - step;
        s = repair(problem, std::move(*c.schedule), config, deadline);
        if (s) {
          ++st.repairs_succeeded;
          if (!anchored) {
            beta = excess;
            anchored = true;
          }
        }
      }
    }
    if (!s) {
      ++st.fails;
      ++st.iterations;
      continue;
    }
    Schedule current = vnd(problem, std::move(*s), Objective::Cost, config.vnd_order_improve, config,
                           nullptr, deadline);
    record(current);
    if (config.perturbation) {
      const int rounds = perturbation_rounds(st.fails, st.iterations, config.perturb_base);
      for (int r = 0; r < rounds && !out_of_time(); ++r) {
        current = perturb(problem, std::move(current), rng);
        current = vnd(problem, std::move(current), Objective::Cost, config.vnd_order_improve, config,
                      nullptr, deadline);
        record(current);
      }
    }
    ++st.iterations;
  }
  st.elapsed_s = steady_seconds() - began;
  st.fails_rate = st.iterations > 0 ? static_cast<double>(st.fails) / st.iterations : 0.0;
  if (best) {
    st.best_z3 = best_z3;
    cell.offer(best_z3, restart, *best);
  }
  return st;
}

}  // namespace

double steady_seconds() {
  using namespace std::chrono;
  return duration<double>(steady_clock::now().time_since_epoch()).count();
}

SearchConfig SearchConfig::algorithm(int which) {
  SearchConfig c;
  switch (which) {
    case 1:
      c.semi_feasible = false;
      c.perturbation = false;
      break;
    case 2:
      c.perturbation = false;
      break;
    case 3: break;
    default: throw InputError("algorithm must be 1, 2 or 3");
  }
  return c;
}

void SearchConfig::check() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw InputError("alpha must lie in [0, 1]");
  if (crew_max != 1 && crew_max != 2) throw InputError("crew size must be 1 or 2");
  if (restarts < 1) throw InputError("need at least one restart");
  if (!(time_limit_s >= 0.0)) throw InputError("time limit must be non-negative");
  if (!(perturb_base >= 1.0)) throw InputError("perturbation base must be at least 1");
  if (!(beta_step_pct >= 0.0 && beta_step_pct < 100.0)) throw InputError("beta step must lie in [0, 100)");
}

Construction greedy_construct(const CrewProblem& problem, const SearchConfig& config) {
  return construct(problem, config, nullptr, 0.0, false);
}

Construction semi_greedy_construct(const CrewProblem& problem, const SearchConfig& config, Rng& rng) {
  return construct(problem, config, &rng, config.alpha, config.semi_feasible);
}

MoveResult apply_move(const CrewProblem& problem, const Schedule& schedule, const MoveArgs& args,
                      const SearchConfig& config) {
  if (schedule.start.size() != static_cast<std::size_t>(problem.num_tasks()) ||
      schedule.routes.size() != static_cast<std::size_t>(problem.num_drivers())) {
    return {std::nullopt, "invalid schedule"};
  }
  Engine engine(problem, config, schedule);
  const Junction j = engine.check(args);
  if (!j.ok) return {std::nullopt, j.why};
  const auto drivers = engine.affected(args);
  const auto edits = engine.build(args);
  const auto after = engine.rest_after(args, edits, drivers);
  for (const RestStatus& r : after) {
    if (!r.feasible()) return {std::nullopt, "rest"};
  }
  engine.commit(args, edits);
  return {engine.take(), ""};
}

std::vector<Hours> retime_candidates(const CrewProblem& problem, const Schedule& schedule, TaskId t) {
  return retime_values(problem, schedule.start, schedule.routes, t);
}

Schedule vnd(const CrewProblem& problem, Schedule schedule, Objective objective,
             const std::vector<Move>& order, const SearchConfig& config, VndTrace* trace,
             double deadline_s) {
  Engine engine(problem, config, std::move(schedule));
  engine.descend(objective, order, deadline_s, trace);
  return engine.take();
}

std::optional<Schedule> repair(const CrewProblem& problem, Schedule schedule,
                               const SearchConfig& config, double deadline_s) {
  Engine engine(problem, config, std::move(schedule));
  if (engine.excess() > 0.0) {
    engine.descend(Objective::Excess, config.vnd_order_repair, deadline_s, nullptr);
  }
  if (engine.excess() > 0.0) return std::nullopt;
  return engine.take();
}

Schedule perturb(const CrewProblem& problem, Schedule schedule, Rng& rng) {
  SearchConfig config;
  config.regulation = schedule.regulation;
  Engine engine(problem, config, std::move(schedule));
  engine.perturb(rng);
  return engine.take();
}

int perturbation_rounds(long fails, long iteration, double base) {
  const double gamma = static_cast<double>(fails) / static_cast<double>(iteration + 1);
  return static_cast<int>(std::ceil(std::pow(base, gamma) - 1e-9));
}

GraspResult grasp(const CrewProblem& problem, const SearchConfig& config) {
  config.check();
  BestCell cell;
  std::vector<RunStats> runs(static_cast<std::size_t>(config.restarts));
  if (config.restarts == 1) {
    runs[0] = run_one(problem, config, 0, cell);
  } else {
    std::vector<std::thread> threads;
    for (int k = 0; k < config.restarts; ++k) {
      threads.emplace_back([&, k] { runs[k] = run_one(problem, config, k, cell); });
    }
    for (auto& th : threads) th.join();
  }

  GraspResult out;
  out.best = cell.get();
  out.restarts = runs;
  RunStats& total = out.stats;
  double sum = 0.0;
  int found = 0;
  for (const RunStats& r : runs) {
    total.iterations += r.iterations;
    total.fails += r.fails;
    total.repairs_attempted += r.repairs_attempted;
    total.repairs_succeeded += r.repairs_succeeded;
    total.repairs_skipped += r.repairs_skipped;
    total.elapsed_s = std::max(total.elapsed_s, r.elapsed_s);
    if (r.best_z3) {
      sum += *r.best_z3;
      ++found;
      out.z3_min = out.z3_min ? std::min(*out.z3_min, *r.best_z3) : *r.best_z3;
      out.z3_max = out.z3_max ? std::max(*out.z3_max, *r.best_z3) : *r.best_z3;
    }
  }
  if (found > 0) out.z3_avg = sum / found;
  total.fails_rate = total.iterations > 0 ? static_cast<double>(total.fails) / total.iterations : 0.0;
  if (cell.restart() >= 0) {
    const RunStats& winner = runs[cell.restart()];
    total.best_z3 = winner.best_z3;
    total.iteration_to_best = winner.iteration_to_best;
    total.time_to_best_s = winner.time_to_best_s;
  }
  return out;
}

}  // namespace vrcsp
