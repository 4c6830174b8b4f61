#pragma once

#include <stdexcept>
#include <string>

namespace vrcsp {

// Bad user input: malformed instance data, unknown ids, out-of-range parameters.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed file. Carries the line (when known) and the JSON pointer of the
// offending field.
class ParseError : public InputError {
 public:
  ParseError(const std::string& message, int line, std::string field)
      : InputError(format(message, line, field)), line_(line), field_(std::move(field)) {}

  int line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  static std::string format(const std::string& message, int line, const std::string& field) {
    std::string out = "parse error";
    if (line > 0) out += " at line " + std::to_string(line);
    if (!field.empty()) out += " in field '" + field + "'";
    return out + ": " + message;
  }

  int line_;
  std::string field_;
};

// No solution exists for the requested stage (e.g. a request no truck can serve
// within the horizon).
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller broke a documented precondition (e.g. asked for the workload of a
// route that is not a valid driver path).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace vrcsp
