#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "vrcsp/model.hpp"

namespace vrcsp {

inline constexpr int kSchemaVersion = 1;

// JSON text for every file kind. Parsers throw ParseError naming the line
// (syntax errors) or the JSON pointer of the offending field.
std::string dump_network(const RoadNetwork& network);
RoadNetwork parse_network(std::string_view text);

std::string dump_instance(const Instance& instance);
Instance parse_instance(std::string_view text);

// Plans and schedules refer to locations, trucks, requests and drivers by the
// ids of the instance.
std::string dump_plan(const Instance& instance, const TaskPlan& plan);
TaskPlan parse_plan(const Instance& instance, std::string_view text);

std::string dump_schedule(const CrewProblem& problem, const Schedule& schedule);
Schedule parse_schedule(const CrewProblem& problem, std::string_view text);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

inline Instance load_instance(const std::filesystem::path& path) {
  return parse_instance(read_text(path));
}
inline TaskPlan load_plan(const Instance& instance, const std::filesystem::path& path) {
  return parse_plan(instance, read_text(path));
}
inline Schedule load_schedule(const CrewProblem& problem, const std::filesystem::path& path) {
  return parse_schedule(problem, read_text(path));
}

}  // namespace vrcsp
