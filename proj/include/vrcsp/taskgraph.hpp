#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vrcsp/model.hpp"

namespace vrcsp {

// Node of the compatibility digraph: a driver start location, a task, or the sink.
struct Node {
  enum class Kind { Source, Task, Sink };
  Kind kind = Kind::Sink;
  int index = 0;  // location id for sources, task id for tasks

  static Node source(LocationId l) { return {Kind::Source, l}; }
  static Node task(TaskId t) { return {Kind::Task, t}; }
  static Node sink() { return {Kind::Sink, 0}; }

  bool operator==(const Node&) const = default;
  auto operator<=>(const Node&) const = default;
};

struct Arc {
  Node from;
  Node to;
  double weight = 0.0;

  bool operator==(const Arc&) const = default;
};

// Weight of the arc (from, to) under the start times, or nullopt when the
// arc does not exist. Computed on demand; no graph is materialised.
std::optional<double> arc_exists(const CrewProblem& problem, std::span<const Hours> start,
                                 Node from, Node to);

// Materialised graph, used by tests and the dot dump.
class CompatGraph {
 public:
  CompatGraph(std::vector<LocationId> sources, int num_tasks, std::vector<Arc> arcs);

  const std::vector<LocationId>& sources() const { return sources_; }
  int num_tasks() const { return num_tasks_; }
  const std::vector<Arc>& arcs() const { return arcs_; }
  std::vector<Node> nodes() const;

  std::optional<double> weight(Node from, Node to) const;
  bool has_arc(Node from, Node to) const { return weight(from, to).has_value(); }

  // Kahn's algorithm over the arc list.
  bool acyclic() const;

  std::string to_dot(const CrewProblem& problem) const;

 private:
  std::size_t slot(Node n) const;

  std::vector<LocationId> sources_;
  int num_tasks_;
  std::vector<Arc> arcs_;
  std::vector<std::vector<std::pair<std::size_t, double>>> out_;
};

// Sources are the distinct driver start locations. ContractError when the
// start times break a window, the frozen delivery day or truck precedence.
CompatGraph build_graph(const CrewProblem& problem, std::span<const Hours> start);

// Whether (u1,u2) and (u2,u3) always imply (u1,u3).
bool check_transitive(const CompatGraph& graph);

// Graph path for a driver route: s_l, tasks..., sink.
std::vector<Node> route_path(std::span<const TaskId> route, LocationId driver_location);

}  // namespace vrcsp
