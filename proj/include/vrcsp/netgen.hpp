#pragma once

#include <cstdint>
#include <vector>

#include "vrcsp/model.hpp"
#include "vrcsp/random.hpp"

namespace vrcsp {

struct GenParams {
  int horizon_days = 7;
  int num_requests = 10;
  int num_trucks = 3;
  int num_drivers = 6;
  std::uint64_t seed = 1;
  double co_location_prob = 0.8;
  double late_penalty = 1.0;
  double truck_speed = 90.0;
  double shuttle_speed = 90.0;
};

// Fifteen cities of the Argentine north-east linked by a sparse road graph.
// Distances are rounded placeholders (km), not surveyed values; the same data
// ships as data/default_network.json.
RoadNetwork default_network();

struct DriverPlacement {
  std::vector<LocationId> locations;
  int co_located = 0;  // trucks that received a driver at their own location
};

// One driver per truck at the truck's location with probability `prob` (while
// drivers remain); every other driver goes to a uniform random location.
DriverPlacement place_drivers(const std::vector<LocationId>& truck_locations, int num_drivers,
                              int num_locations, double prob, Rng& rng);

// Random instance over `network`; a pure function of (params, network).
Instance generate(const GenParams& params, const RoadNetwork& network);

}  // namespace vrcsp
