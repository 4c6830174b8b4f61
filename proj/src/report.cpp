#include "vrcsp/report.hpp"

#include <cstdio>
#include <sstream>

#include "json.hpp"

namespace vrcsp {

namespace {

nlohmann::ordered_json number_or_null(const std::optional<double>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

const char* fill(TaskKind kind) {
  switch (kind) {
    case TaskKind::Pickup: return "#4c9f70";
    case TaskKind::Delivery: return "#d1495b";
    case TaskKind::Trip: return "#3c6e9f";
  }
  return "#888888";
}

}  // namespace

std::string stats_json(const GraspResult& result) {
  nlohmann::ordered_json j;
  j["iterations"] = result.stats.iterations;
  j["fails"] = result.stats.fails;
  j["fails_rate"] = result.stats.fails_rate;
  j["z3_min"] = number_or_null(result.z3_min);
  j["z3_avg"] = number_or_null(result.z3_avg);
  j["z3_max"] = number_or_null(result.z3_max);
  j["time_to_best_s"] = result.best ? nlohmann::ordered_json(result.stats.time_to_best_s)
                                    : nlohmann::ordered_json(nullptr);
  return j.dump(2) + "\n";
}

std::string gantt_svg(const CrewProblem& problem, const Schedule& schedule) {
  const double px = 8.0;      // per hour
  const double row = 28.0;
  const double left = 90.0;
  const double top = 30.0;
  const double hours = problem.horizon_hours();
  const int drivers = problem.num_drivers();
  const double width = left + hours * px + 20.0;
  const double height = top + row * drivers + 20.0;

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\""
     << num(height) << "\" font-family=\"sans-serif\" font-size=\"10\">\n";
  os << "<defs><pattern id=\"shuttle\" width=\"6\" height=\"6\" patternUnits=\"userSpaceOnUse\" "
        "patternTransform=\"rotate(45)\"><rect width=\"6\" height=\"6\" fill=\"#eeeeee\"/>"
        "<line x1=\"0\" y1=\"0\" x2=\"0\" y2=\"6\" stroke=\"#999999\" stroke-width=\"2\"/>"
        "</pattern></defs>\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (int h = 0; h <= static_cast<int>(hours); h += 6) {
    const double x = left + h * px;
    const bool day = h % 24 == 0;
    os << "<line x1=\"" << num(x) << "\" y1=\"" << num(top - 4) << "\" x2=\"" << num(x)
       << "\" y2=\"" << num(top + row * drivers) << "\" stroke=\"" << (day ? "#777777" : "#dddddd")
       << "\"/>\n";
    if (day) {
      os << "<text x=\"" << num(x + 2) << "\" y=\"" << num(top - 8) << "\">day " << h / 24
         << "</text>\n";
    }
  }

  for (DriverId d = 0; d < drivers; ++d) {
    const double y = top + row * d;
    os << "<text x=\"4\" y=\"" << num(y + row * 0.6) << "\">" << escape(problem.driver_name(d))
       << "</text>\n";
    if (d >= static_cast<int>(schedule.routes.size())) continue;
    if (is_driver_path(problem, schedule.start, schedule.routes[d], problem.driver_location(d))) {
      for (const ShuttleLeg& leg : shuttle_legs(problem, schedule, d)) {
        os << "<rect x=\"" << num(left + leg.begin * px) << "\" y=\"" << num(y + 6) << "\" width=\""
           << num((leg.end - leg.begin) * px) << "\" height=\"" << num(row - 12)
           << "\" fill=\"url(#shuttle)\" stroke=\"#999999\"><title>shuttle "
           << escape(problem.instance().network().name(leg.from)) << " to "
           << escape(problem.instance().network().name(leg.to)) << "</title></rect>\n";
      }
    }
    for (TaskId t : schedule.routes[d]) {
      if (t < 0 || t >= problem.num_tasks() || t >= static_cast<int>(schedule.start.size())) continue;
      const Task& task = problem.task(t);
      const double x = left + schedule.start[t] * px;
      const double w = task.duration * px;
      os << "<rect x=\"" << num(x) << "\" y=\"" << num(y + 4) << "\" width=\"" << num(w)
         << "\" height=\"" << num(row - 8) << "\" fill=\"" << fill(task.kind)
         << "\" fill-opacity=\"0.85\" stroke=\"#333333\"><title>" << problem.task_name(t) << ' '
         << to_string(task.kind) << ' ' << escape(problem.instance().network().name(task.origin))
         << " to " << escape(problem.instance().network().name(task.destination)) << " at "
         << num(schedule.start[t]) << "</title></rect>\n";
      if (w >= 16.0) {
        os << "<text x=\"" << num(x + 2) << "\" y=\"" << num(y + row * 0.6)
           << "\" fill=\"white\">" << problem.task_name(t) << "</text>\n";
      }
    }
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace vrcsp
