#include "vrcsp/network.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>

#include "vrcsp/errors.hpp"

namespace vrcsp {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

RoadNetwork::RoadNetwork(std::vector<std::string> names, std::vector<RoadEdge> edges)
    : names_(std::move(names)), edges_(std::move(edges)) {
  const std::size_t n = names_.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (!index_.emplace(names_[i], static_cast<LocationId>(i)).second) {
      throw InputError("duplicate location '" + names_[i] + "'");
    }
  }

  std::vector<std::vector<std::pair<LocationId, double>>> adjacency(n);
  for (const RoadEdge& e : edges_) {
    check(e.from);
    check(e.to);
    if (e.from == e.to) throw InputError("road edge loops on '" + names_[e.from] + "'");
    if (!(e.km > 0.0) || !std::isfinite(e.km)) {
      throw InputError("road edge " + names_[e.from] + "-" + names_[e.to] +
                       " must have a positive length");
    }
    adjacency[e.from].emplace_back(e.to, e.km);
    adjacency[e.to].emplace_back(e.from, e.km);
  }

  dist_.assign(n * n, kInf);
  parent_.assign(n * n, -1);
  using Item = std::pair<double, LocationId>;
  for (std::size_t src = 0; src < n; ++src) {
    double* dist = &dist_[src * n];
    LocationId* parent = &parent_[src * n];
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    dist[src] = 0.0;
    queue.emplace(0.0, static_cast<LocationId>(src));
    while (!queue.empty()) {
      auto [d, u] = queue.top();
      queue.pop();
      if (d > dist[u]) continue;
      for (auto [v, km] : adjacency[u]) {
        const double candidate = d + km;
        // Ties go to the lower-numbered predecessor so paths are reproducible.
        if (candidate < dist[v] || (candidate == dist[v] && parent[v] > u)) {
          const bool improved = candidate < dist[v];
          dist[v] = candidate;
          parent[v] = u;
          if (improved) queue.emplace(candidate, v);
        }
      }
    }
  }
}

void RoadNetwork::check(LocationId id) const {
  if (!contains(id)) throw InputError("unknown location id " + std::to_string(id));
}

const std::string& RoadNetwork::name(LocationId id) const {
  check(id);
  return names_[id];
}

LocationId RoadNetwork::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) throw InputError("unknown location '" + std::string(name) + "'");
  return it->second;
}

bool RoadNetwork::connected(LocationId a, LocationId b) const {
  check(a);
  check(b);
  return std::isfinite(dist_[a * size() + b]);
}

double RoadNetwork::distance(LocationId a, LocationId b) const {
  if (!connected(a, b)) {
    throw InputError("no road between '" + names_[a] + "' and '" + names_[b] + "'");
  }
  return dist_[a * size() + b];
}

std::vector<LocationId> RoadNetwork::path(LocationId a, LocationId b) const {
  distance(a, b);
  std::vector<LocationId> out{b};
  const LocationId* parent = &parent_[a * size()];
  for (LocationId v = b; v != a;) {
    v = parent[v];
    out.push_back(v);
  }
  std::reverse(out.begin(), out.end());
  return out;
}

}  // namespace vrcsp
