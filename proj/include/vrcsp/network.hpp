#pragma once

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace vrcsp {

using LocationId = int;

struct RoadEdge {
  LocationId from = 0;
  LocationId to = 0;
  double km = 0.0;

  bool operator==(const RoadEdge&) const = default;
};

// Undirected weighted road graph with all-pairs shortest paths precomputed at
// construction (one Dijkstra per source). Unreachable pairs have infinite
// distance.
class RoadNetwork {
 public:
  RoadNetwork() = default;
  RoadNetwork(std::vector<std::string> names, std::vector<RoadEdge> edges);

  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<RoadEdge>& edges() const { return edges_; }
  const std::string& name(LocationId id) const;

  // Throws InputError for an unknown name.
  LocationId find(std::string_view name) const;
  bool contains(LocationId id) const { return id >= 0 && static_cast<std::size_t>(id) < size(); }

  bool connected(LocationId a, LocationId b) const;
  // Shortest-path distance; InputError for unknown or disconnected locations.
  double distance(LocationId a, LocationId b) const;
  // Location sequence of a shortest path, both endpoints included.
  std::vector<LocationId> path(LocationId a, LocationId b) const;

  bool operator==(const RoadNetwork& other) const {
    return names_ == other.names_ && edges_ == other.edges_;
  }

 private:
  void check(LocationId id) const;

  std::vector<std::string> names_;
  std::vector<RoadEdge> edges_;
  std::unordered_map<std::string, LocationId> index_;
  std::vector<double> dist_;          // row-major size x size
  std::vector<LocationId> parent_;    // parent_[src * n + v]: predecessor of v on a path from src
};

}  // namespace vrcsp
