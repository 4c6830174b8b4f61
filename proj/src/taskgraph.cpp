#include "vrcsp/taskgraph.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace vrcsp {

std::optional<double> arc_exists(const CrewProblem& problem, std::span<const Hours> start,
                                 Node from, Node to) {
  using K = Node::Kind;
  if (from.kind == K::Sink || to.kind == K::Source) return std::nullopt;
  if (to.kind == K::Sink) return 0.0;
  const Task& next = problem.task(to.index);
  if (from.kind == K::Source) {
    if (problem.shuttle_time(from.index, next.origin) > start[to.index] + kTimeEps) return std::nullopt;
    return problem.shuttle_cost(from.index, next.origin);
  }
  if (from.index == to.index) return std::nullopt;
  const Task& prev = problem.task(from.index);
  const Hours ready = start[from.index] + prev.duration + problem.shuttle_time(prev.destination, next.origin);
  if (ready > start[to.index] + kTimeEps) return std::nullopt;
  return problem.shuttle_cost(prev.destination, next.origin);
}

CompatGraph::CompatGraph(std::vector<LocationId> sources, int num_tasks, std::vector<Arc> arcs)
    : sources_(std::move(sources)), num_tasks_(num_tasks), arcs_(std::move(arcs)) {
  out_.assign(sources_.size() + num_tasks_ + 1, {});
  for (const Arc& a : arcs_) out_[slot(a.from)].emplace_back(slot(a.to), a.weight);
}

std::size_t CompatGraph::slot(Node n) const {
  switch (n.kind) {
    case Node::Kind::Source: {
      auto it = std::find(sources_.begin(), sources_.end(), n.index);
      if (it == sources_.end()) throw ContractError("unknown source node");
      return static_cast<std::size_t>(it - sources_.begin());
    }
    case Node::Kind::Task:
      if (n.index < 0 || n.index >= num_tasks_) throw ContractError("unknown task node");
      return sources_.size() + n.index;
    case Node::Kind::Sink: return sources_.size() + num_tasks_;
  }
  return 0;
}

std::vector<Node> CompatGraph::nodes() const {
  std::vector<Node> out;
  for (LocationId l : sources_) out.push_back(Node::source(l));
  for (TaskId t = 0; t < num_tasks_; ++t) out.push_back(Node::task(t));
  out.push_back(Node::sink());
  return out;
}

std::optional<double> CompatGraph::weight(Node from, Node to) const {
  const std::size_t a = slot(from), b = slot(to);
  for (auto [v, w] : out_[a]) {
    if (v == b) return w;
  }
  return std::nullopt;
}

bool CompatGraph::acyclic() const {
  std::vector<int> indegree(out_.size(), 0);
  for (const auto& list : out_) {
    for (auto [v, w] : list) ++indegree[v];
  }
  std::deque<std::size_t> ready;
  for (std::size_t u = 0; u < out_.size(); ++u) {
    if (indegree[u] == 0) ready.push_back(u);
  }
  std::size_t seen = 0;
  while (!ready.empty()) {
    const std::size_t u = ready.front();
    ready.pop_front();
    ++seen;
    for (auto [v, w] : out_[u]) {
      if (--indegree[v] == 0) ready.push_back(v);
    }
  }
  return seen == out_.size();
}

std::string CompatGraph::to_dot(const CrewProblem& problem) const {
  const auto label = [&](Node n) -> std::string {
    switch (n.kind) {
      case Node::Kind::Source: return "s_" + problem.instance().network().name(n.index);
      case Node::Kind::Task: return problem.task_name(n.index);
      case Node::Kind::Sink: return "sink";
    }
    return "";
  };
  std::ostringstream os;
  os << "digraph compat {\n";
  for (const Arc& a : arcs_) {
    os << "  \"" << label(a.from) << "\" -> \"" << label(a.to) << "\"";
    if (a.weight > 0.0) os << " [label=\"" << a.weight << "\", style=dashed]";
    os << ";\n";
  }
  os << "}\n";
  return os.str();
}

CompatGraph build_graph(const CrewProblem& problem, std::span<const Hours> start) {
  const auto bad = start_violations(problem, start);
  if (!bad.empty()) {
    throw ContractError("start times break " + to_string(bad.front().kind) + " at " +
                        bad.front().subject);
  }
  std::vector<LocationId> sources;
  for (DriverId d = 0; d < problem.num_drivers(); ++d) sources.push_back(problem.driver_location(d));
  std::sort(sources.begin(), sources.end());
  sources.erase(std::unique(sources.begin(), sources.end()), sources.end());

  std::vector<Node> from, to;
  for (LocationId l : sources) from.push_back(Node::source(l));
  for (TaskId t = 0; t < problem.num_tasks(); ++t) {
    from.push_back(Node::task(t));
    to.push_back(Node::task(t));
  }
  to.push_back(Node::sink());

  std::vector<Arc> arcs;
  for (Node u : from) {
    for (Node v : to) {
      if (auto w = arc_exists(problem, start, u, v)) arcs.push_back({u, v, *w});
    }
  }
  return CompatGraph(std::move(sources), problem.num_tasks(), std::move(arcs));
}

bool check_transitive(const CompatGraph& graph) {
  for (const Arc& a : graph.arcs()) {
    if (a.to.kind == Node::Kind::Sink) continue;
    for (const Arc& b : graph.arcs()) {
      if (b.from != a.to) continue;
      if (!graph.has_arc(a.from, b.to)) return false;
    }
  }
  return true;
}

std::vector<Node> route_path(std::span<const TaskId> route, LocationId driver_location) {
  std::vector<Node> out{Node::source(driver_location)};
  for (TaskId t : route) out.push_back(Node::task(t));
  out.push_back(Node::sink());
  return out;
}

}  // namespace vrcsp
