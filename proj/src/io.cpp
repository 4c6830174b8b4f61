#include "vrcsp/io.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

namespace vrcsp {

namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

json parse_text(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
    int line = 1;
    for (std::size_t i = 0; i + 1 < upto; ++i) line += text[i] == '\n';
    std::string message = e.what();
    const auto column = message.find("column");
    const auto colon = message.find(": ", column == std::string::npos ? 0 : column);
    if (colon != std::string::npos) message = message.substr(colon + 2);
    throw ParseError(message, line, "");
  }
}

std::string child(const std::string& ptr, const std::string& key) { return ptr + "/" + key; }
std::string child(const std::string& ptr, std::size_t index) {
  return ptr + "/" + std::to_string(index);
}

const json& field(const json& obj, const std::string& key, const std::string& ptr) {
  if (!obj.is_object()) throw ParseError("expected an object", 0, ptr.empty() ? "/" : ptr);
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError("missing key", 0, child(ptr, key));
  return *it;
}

double number(const json& v, const std::string& ptr) {
  if (!v.is_number()) throw ParseError("expected a number", 0, ptr);
  return v.get<double>();
}

int integer(const json& v, const std::string& ptr) {
  if (v.is_number_integer()) return v.get<int>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (d == static_cast<int>(d)) return static_cast<int>(d);
  }
  throw ParseError("expected an integer", 0, ptr);
}

std::string text(const json& v, const std::string& ptr) {
  if (!v.is_string()) throw ParseError("expected a string", 0, ptr);
  return v.get<std::string>();
}

const json& array(const json& v, const std::string& ptr) {
  if (!v.is_array()) throw ParseError("expected an array", 0, ptr);
  return v;
}

void check_header(const json& doc, const std::string& kind) {
  const int version = integer(field(doc, "schema_version", ""), "/schema_version");
  if (version != kSchemaVersion) {
    throw ParseError("unsupported schema version " + std::to_string(version), 0, "/schema_version");
  }
  if (doc.contains("kind") && text(doc["kind"], "/kind") != kind) {
    throw ParseError("expected a " + kind + " file", 0, "/kind");
  }
}

ojson header(const std::string& kind) {
  ojson doc;
  doc["schema_version"] = kSchemaVersion;
  doc["kind"] = kind;
  return doc;
}

LocationId location(const RoadNetwork& network, const json& v, const std::string& ptr) {
  const std::string name = text(v, ptr);
  try {
    return network.find(name);
  } catch (const InputError&) {
    throw ParseError("unknown location '" + name + "'", 0, ptr);
  }
}

template <class T>
int lookup(const std::vector<T>& items, const std::string& id, const std::string& what,
           const std::string& ptr) {
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i].id == id) return static_cast<int>(i);
  }
  throw ParseError("unknown " + what + " '" + id + "'", 0, ptr);
}

ojson network_json(const RoadNetwork& network) {
  ojson edges = ojson::array();
  for (const RoadEdge& e : network.edges()) {
    edges.push_back({{"from", network.name(e.from)}, {"to", network.name(e.to)}, {"km", e.km}});
  }
  ojson out;
  out["locations"] = network.names();
  out["edges"] = std::move(edges);
  return out;
}

RoadNetwork network_from(const json& doc) {
  std::vector<std::string> names;
  const json& locs = array(field(doc, "locations", ""), "/locations");
  for (std::size_t i = 0; i < locs.size(); ++i) names.push_back(text(locs[i], child("/locations", i)));
  std::map<std::string, LocationId> index;
  for (std::size_t i = 0; i < names.size(); ++i) index.emplace(names[i], static_cast<LocationId>(i));

  std::vector<RoadEdge> edges;
  const json& list = array(field(doc, "edges", ""), "/edges");
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string ptr = child("/edges", i);
    RoadEdge e;
    for (const char* end : {"from", "to"}) {
      const std::string name = text(field(list[i], end, ptr), child(ptr, end));
      auto it = index.find(name);
      if (it == index.end()) throw ParseError("unknown location '" + name + "'", 0, child(ptr, end));
      (std::string(end) == "from" ? e.from : e.to) = it->second;
    }
    e.km = number(field(list[i], "km", ptr), child(ptr, "km"));
    edges.push_back(e);
  }
  return RoadNetwork(std::move(names), std::move(edges));
}

ojson window_json(const TimeWindow& w) { return ojson::array({w.open, w.close}); }

TimeWindow window_from(const json& v, const std::string& ptr) {
  if (!v.is_array() || v.size() != 2) throw ParseError("expected [open, close]", 0, ptr);
  return {number(v[0], child(ptr, std::size_t{0})), number(v[1], child(ptr, std::size_t{1}))};
}

}  // namespace

std::string dump_network(const RoadNetwork& network) {
  ojson doc = header("network");
  doc.update(network_json(network));
  return doc.dump(2) + "\n";
}

RoadNetwork parse_network(std::string_view data) {
  const json doc = parse_text(data);
  check_header(doc, "network");
  return network_from(doc);
}

std::string dump_instance(const Instance& instance) {
  const RoadNetwork& net = instance.network();
  ojson doc = header("instance");
  doc["horizon_days"] = instance.horizon_days();
  doc.update(network_json(net));
  doc["speeds"] = {{"truck", instance.truck_speed()}, {"shuttle", instance.shuttle_speed()}};
  ojson requests = ojson::array();
  for (const Request& r : instance.requests()) {
    ojson item;
    item["id"] = r.id;
    item["pickup"] = {{"location", net.name(r.pickup_location)},
                      {"day", r.pickup_day},
                      {"window", window_json(r.pickup_window)}};
    item["delivery"] = {{"location", net.name(r.delivery_location)},
                        {"day", r.delivery_day},
                        {"window", window_json(r.delivery_window)}};
    item["late_penalty"] = r.late_penalty;
    requests.push_back(std::move(item));
  }
  doc["requests"] = std::move(requests);
  ojson trucks = ojson::array();
  for (const Truck& v : instance.trucks()) {
    trucks.push_back({{"id", v.id}, {"location", net.name(v.location)}});
  }
  doc["trucks"] = std::move(trucks);
  ojson drivers = ojson::array();
  for (const Driver& d : instance.drivers()) {
    drivers.push_back({{"id", d.id}, {"location", net.name(d.location)}});
  }
  doc["drivers"] = std::move(drivers);
  return doc.dump(2) + "\n";
}

Instance parse_instance(std::string_view data) {
  const json doc = parse_text(data);
  check_header(doc, "instance");
  const int horizon = integer(field(doc, "horizon_days", ""), "/horizon_days");
  RoadNetwork net = network_from(doc);

  double truck_speed = 90.0, shuttle_speed = 90.0;
  if (doc.contains("speeds")) {
    const json& speeds = doc["speeds"];
    truck_speed = number(field(speeds, "truck", "/speeds"), "/speeds/truck");
    shuttle_speed = number(field(speeds, "shuttle", "/speeds"), "/speeds/shuttle");
  }

  std::vector<Request> requests;
  const json& reqs = array(field(doc, "requests", ""), "/requests");
  for (std::size_t i = 0; i < reqs.size(); ++i) {
    const std::string ptr = child("/requests", i);
    Request r;
    r.id = text(field(reqs[i], "id", ptr), child(ptr, "id"));
    const std::string pp = child(ptr, "pickup"), dp = child(ptr, "delivery");
    const json& p = field(reqs[i], "pickup", ptr);
    const json& d = field(reqs[i], "delivery", ptr);
    r.pickup_location = location(net, field(p, "location", pp), child(pp, "location"));
    r.pickup_day = integer(field(p, "day", pp), child(pp, "day"));
    r.pickup_window = window_from(field(p, "window", pp), child(pp, "window"));
    r.delivery_location = location(net, field(d, "location", dp), child(dp, "location"));
    r.delivery_day = integer(field(d, "day", dp), child(dp, "day"));
    r.delivery_window = window_from(field(d, "window", dp), child(dp, "window"));
    if (reqs[i].contains("late_penalty")) {
      r.late_penalty = number(reqs[i]["late_penalty"], child(ptr, "late_penalty"));
    }
    requests.push_back(std::move(r));
  }

  const auto parse_located = [&](const char* key, auto make) {
    const std::string base = std::string("/") + key;
    const json& list = array(field(doc, key, ""), base);
    using Item = decltype(make(std::string{}, LocationId{}));
    std::vector<Item> out;
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string ptr = child(base, i);
      out.push_back(make(text(field(list[i], "id", ptr), child(ptr, "id")),
                         location(net, field(list[i], "location", ptr), child(ptr, "location"))));
    }
    return out;
  };
  auto trucks = parse_located("trucks", [](std::string id, LocationId l) { return Truck{id, l}; });
  auto drivers = parse_located("drivers", [](std::string id, LocationId l) { return Driver{id, l}; });

  return Instance(horizon, std::move(net), std::move(requests), std::move(trucks),
                  std::move(drivers), truck_speed, shuttle_speed);
}

std::string dump_plan(const Instance& instance, const TaskPlan& plan) {
  const RoadNetwork& net = instance.network();
  ojson doc = header("plan");
  ojson tasks = ojson::array();
  for (std::size_t t = 0; t < plan.tasks.size(); ++t) {
    const Task& task = plan.tasks[t];
    ojson item;
    item["id"] = "t" + std::to_string(t);
    item["kind"] = to_string(task.kind);
    item["origin"] = net.name(task.origin);
    item["destination"] = net.name(task.destination);
    item["duration"] = task.duration;
    item["truck"] = instance.trucks().at(task.truck).id;
    if (task.request >= 0) item["request"] = instance.requests().at(task.request).id;
    item["start"] = plan.tentative_start.at(t);
    tasks.push_back(std::move(item));
  }
  doc["tasks"] = std::move(tasks);
  ojson routes = ojson::array();
  for (std::size_t v = 0; v < plan.truck_routes.size(); ++v) {
    ojson ids = ojson::array();
    for (TaskId t : plan.truck_routes[v]) ids.push_back("t" + std::to_string(t));
    routes.push_back({{"truck", instance.trucks()[v].id}, {"tasks", std::move(ids)}});
  }
  doc["truck_routes"] = std::move(routes);
  ojson days = ojson::object();
  for (std::size_t r = 0; r < plan.delivery_day.size(); ++r) {
    days[instance.requests().at(r).id] = plan.delivery_day[r];
  }
  doc["delivery_day"] = std::move(days);
  return doc.dump(2) + "\n";
}

TaskPlan parse_plan(const Instance& instance, std::string_view data) {
  const json doc = parse_text(data);
  check_header(doc, "plan");
  const RoadNetwork& net = instance.network();
  TaskPlan plan;
  std::map<std::string, TaskId> ids;

  const json& tasks = array(field(doc, "tasks", ""), "/tasks");
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const std::string ptr = child("/tasks", i);
    const json& item = tasks[i];
    const std::string id = text(field(item, "id", ptr), child(ptr, "id"));
    if (!ids.emplace(id, static_cast<TaskId>(i)).second) {
      throw ParseError("duplicate task id '" + id + "'", 0, child(ptr, "id"));
    }
    Task task;
    const std::string kind = text(field(item, "kind", ptr), child(ptr, "kind"));
    if (kind == "pickup") task.kind = TaskKind::Pickup;
    else if (kind == "delivery") task.kind = TaskKind::Delivery;
    else if (kind == "trip") task.kind = TaskKind::Trip;
    else throw ParseError("unknown task kind '" + kind + "'", 0, child(ptr, "kind"));
    task.origin = location(net, field(item, "origin", ptr), child(ptr, "origin"));
    task.destination = location(net, field(item, "destination", ptr), child(ptr, "destination"));
    task.duration = number(field(item, "duration", ptr), child(ptr, "duration"));
    task.truck = lookup(instance.trucks(), text(field(item, "truck", ptr), child(ptr, "truck")),
                        "truck", child(ptr, "truck"));
    if (task.kind != TaskKind::Trip) {
      task.request = lookup(instance.requests(),
                            text(field(item, "request", ptr), child(ptr, "request")), "request",
                            child(ptr, "request"));
    }
    plan.tasks.push_back(task);
    plan.tentative_start.push_back(number(field(item, "start", ptr), child(ptr, "start")));
  }

  plan.truck_routes.assign(instance.trucks().size(), {});
  const json& routes = array(field(doc, "truck_routes", ""), "/truck_routes");
  for (std::size_t i = 0; i < routes.size(); ++i) {
    const std::string ptr = child("/truck_routes", i);
    const int v = lookup(instance.trucks(), text(field(routes[i], "truck", ptr), child(ptr, "truck")),
                         "truck", child(ptr, "truck"));
    const json& list = array(field(routes[i], "tasks", ptr), child(ptr, "tasks"));
    for (std::size_t k = 0; k < list.size(); ++k) {
      const std::string tp = child(child(ptr, "tasks"), k);
      auto it = ids.find(text(list[k], tp));
      if (it == ids.end()) throw ParseError("unknown task id", 0, tp);
      plan.truck_routes[v].push_back(it->second);
    }
  }

  plan.delivery_day.assign(instance.requests().size(), 0);
  const json& days = field(doc, "delivery_day", "");
  if (!days.is_object()) throw ParseError("expected an object", 0, "/delivery_day");
  for (std::size_t r = 0; r < instance.requests().size(); ++r) {
    const std::string& id = instance.requests()[r].id;
    plan.delivery_day[r] = integer(field(days, id, "/delivery_day"), child("/delivery_day", id));
  }
  return plan;
}

std::string dump_schedule(const CrewProblem& problem, const Schedule& schedule) {
  ojson doc = header("schedule");
  doc["regulation"] = to_string(schedule.regulation);
  ojson start = ojson::object();
  for (std::size_t t = 0; t < schedule.start.size(); ++t) {
    start[problem.task_name(static_cast<TaskId>(t))] = schedule.start[t];
  }
  doc["start"] = std::move(start);
  ojson routes = ojson::array();
  for (std::size_t d = 0; d < schedule.routes.size(); ++d) {
    ojson ids = ojson::array();
    for (TaskId t : schedule.routes[d]) ids.push_back(problem.task_name(t));
    routes.push_back({{"driver", problem.driver_name(static_cast<DriverId>(d))},
                      {"tasks", std::move(ids)}});
  }
  doc["routes"] = std::move(routes);
  return doc.dump(2) + "\n";
}

Schedule parse_schedule(const CrewProblem& problem, std::string_view data) {
  const json doc = parse_text(data);
  check_header(doc, "schedule");
  Schedule schedule;
  if (doc.contains("regulation")) {
    try {
      schedule.regulation = parse_regulation(text(doc["regulation"], "/regulation"));
    } catch (const ParseError&) {
      throw;
    } catch (const InputError& e) {
      throw ParseError(e.what(), 0, "/regulation");
    }
  }
  std::map<std::string, TaskId> ids;
  for (TaskId t = 0; t < problem.num_tasks(); ++t) ids.emplace(problem.task_name(t), t);

  const json& start = field(doc, "start", "");
  if (!start.is_object()) throw ParseError("expected an object", 0, "/start");
  schedule.start.assign(static_cast<std::size_t>(problem.num_tasks()), 0.0);
  for (TaskId t = 0; t < problem.num_tasks(); ++t) {
    const std::string name = problem.task_name(t);
    schedule.start[t] = number(field(start, name, "/start"), child("/start", name));
  }
  for (auto it = start.begin(); it != start.end(); ++it) {
    if (!ids.count(it.key())) throw ParseError("unknown task id", 0, child("/start", it.key()));
  }

  schedule.routes.assign(static_cast<std::size_t>(problem.num_drivers()), {});
  const json& routes = array(field(doc, "routes", ""), "/routes");
  for (std::size_t i = 0; i < routes.size(); ++i) {
    const std::string ptr = child("/routes", i);
    const int d = lookup(problem.instance().drivers(),
                         text(field(routes[i], "driver", ptr), child(ptr, "driver")), "driver",
                         child(ptr, "driver"));
    const json& list = array(field(routes[i], "tasks", ptr), child(ptr, "tasks"));
    for (std::size_t k = 0; k < list.size(); ++k) {
      const std::string tp = child(child(ptr, "tasks"), k);
      auto it = ids.find(text(list[k], tp));
      if (it == ids.end()) throw ParseError("unknown task id", 0, tp);
      schedule.routes[d].push_back(it->second);
    }
  }
  return schedule;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text(const std::filesystem::path& path, std::string_view data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  out << data;
  if (!out) throw InputError("failed writing '" + path.string() + "'");
}

}  // namespace vrcsp
