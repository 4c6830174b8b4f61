#include "vrcsp/netgen.hpp"

namespace vrcsp {

RoadNetwork default_network() {
  std::vector<std::string> names = {
      "Buenos Aires", "Rosario",    "Santa Fe",   "Parana",     "Cordoba",
      "Santiago del Estero",        "Tucuman",    "Salta",      "Jujuy",
      "Resistencia",  "Corrientes", "Posadas",    "Formosa",    "Saenz Pena",
      "Concordia"};
  // Placeholder distances, rounded to multiples of 90 km so every leg is a
  // whole number of hours at the default speed.
  std::vector<RoadEdge> edges = {
      {0, 1, 270},  {1, 2, 180},  {2, 3, 90},   {1, 4, 360},  {4, 5, 450},  {5, 6, 180},
      {6, 7, 270},  {7, 8, 90},   {2, 9, 540},  {9, 10, 90},  {10, 11, 360}, {9, 12, 180},
      {9, 13, 180}, {13, 7, 630}, {0, 14, 450}, {14, 11, 450}, {3, 14, 270}, {4, 2, 360}};
  return RoadNetwork(std::move(names), std::move(edges));
}

DriverPlacement place_drivers(const std::vector<LocationId>& truck_locations, int num_drivers,
                              int num_locations, double prob, Rng& rng) {
  DriverPlacement out;
  for (LocationId l : truck_locations) {
    if (static_cast<int>(out.locations.size()) >= num_drivers) break;
    if (rng.bernoulli(prob)) {
      out.locations.push_back(l);
      ++out.co_located;
    }
  }
  while (static_cast<int>(out.locations.size()) < num_drivers) {
    out.locations.push_back(static_cast<LocationId>(rng.uniform_int(0, num_locations - 1)));
  }
  return out;
}

Instance generate(const GenParams& params, const RoadNetwork& network) {
  const int H = params.horizon_days;
  if (H < 4) throw InputError("generation needs a horizon of at least 4 days");
  if (params.num_requests < 0 || params.num_trucks < 1 || params.num_drivers < 1) {
    throw InputError("need at least one truck and one driver");
  }
  if (!(params.co_location_prob >= 0.0 && params.co_location_prob <= 1.0)) {
    throw InputError("co-location probability must lie in [0, 1]");
  }
  const int nloc = static_cast<int>(network.size());
  if (nloc < 2) throw InputError("network needs at least two locations");

  Rng rng(params.seed);
  const auto window = [&rng] {
    const auto open = static_cast<double>(rng.uniform_int(0, 22));
    const auto close = static_cast<double>(rng.uniform_int(static_cast<std::int64_t>(open), 24));
    return TimeWindow{open, close};
  };

  std::vector<Request> requests;
  for (int k = 0; k < params.num_requests; ++k) {
    Request r;
    r.id = "r" + std::to_string(k);
    r.pickup_location = static_cast<LocationId>(rng.uniform_int(0, nloc - 1));
    do {
      r.delivery_location = static_cast<LocationId>(rng.uniform_int(0, nloc - 1));
    } while (r.delivery_location == r.pickup_location);
    r.pickup_day = static_cast<int>(rng.uniform_int(0, H - 4));
    r.pickup_window = window();
    r.delivery_day = static_cast<int>(rng.uniform_int(r.pickup_day, H - 2));
    r.delivery_window = window();
    r.late_penalty = params.late_penalty;
    requests.push_back(r);
  }

  std::vector<Truck> trucks;
  std::vector<LocationId> truck_locations;
  for (int k = 0; k < params.num_trucks; ++k) {
    const auto l = static_cast<LocationId>(rng.uniform_int(0, nloc - 1));
    trucks.push_back({"v" + std::to_string(k), l});
    truck_locations.push_back(l);
  }

  const DriverPlacement placement =
      place_drivers(truck_locations, params.num_drivers, nloc, params.co_location_prob, rng);
  std::vector<Driver> drivers;
  for (std::size_t k = 0; k < placement.locations.size(); ++k) {
    drivers.push_back({"d" + std::to_string(k), placement.locations[k]});
  }

  return Instance(H, network, std::move(requests), std::move(trucks), std::move(drivers),
                  params.truck_speed, params.shuttle_speed);
}

}  // namespace vrcsp
