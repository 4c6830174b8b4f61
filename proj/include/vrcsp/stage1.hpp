#pragma once

#include <cstdint>
#include <vector>

#include "vrcsp/model.hpp"

namespace vrcsp {

struct RouteOptions {
  double lambda = 0.25;
  double alpha1 = 0.2;
  std::uint64_t seed = 1;
};

// Semi-greedy truck routing. Requests are inserted by ascending delivery day
// (random tie-break), each appended to a truck drawn from the restricted
// candidate list of Z12 increments. Throws InfeasibleError when some request
// fits no truck within the horizon.
TaskPlan route_trucks(const Instance& instance, const RouteOptions& options);

inline TaskPlan route_trucks(const Instance& instance, double lambda, double alpha1,
                             std::uint64_t seed) {
  return route_trucks(instance, RouteOptions{lambda, alpha1, seed});
}

struct Segmentation {
  std::vector<TaskId> pickups;
  std::vector<TaskId> deliveries;
  std::vector<TaskId> trips;
  std::vector<RequestId> request;  // per task, -1 for trips
};

Segmentation segment(const TaskPlan& plan);

// One trip per edge of the shortest truck path from `from` to `to`.
std::vector<Task> trips_along(const Instance& instance, LocationId from, LocationId to,
                              TruckId truck);

}  // namespace vrcsp
