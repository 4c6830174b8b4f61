#pragma once

#include <map>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "vrcsp/model.hpp"

namespace vrcsp {

using Rational = boost::multiprecision::cpp_rational;

// Exact value of a double (every finite double is a dyadic rational).
Rational exact(double value);

enum class VarType { Continuous, Integer, Binary };
enum class Sense { LessEqual, GreaterEqual, Equal };

struct Term {
  int var = 0;
  Rational coef;
};

struct Variable {
  std::string name;
  VarType type = VarType::Continuous;
  Rational lower = 0;
  Rational upper = 1;
};

struct Row {
  std::string name;
  std::string family;
  std::vector<Term> terms;
  Sense sense = Sense::LessEqual;
  Rational rhs = 0;
};

// A mixed-integer linear model with exact rational data and a writer for the
// CPLEX LP text format.
class LinearModel {
 public:
  explicit LinearModel(std::string name) : name_(std::move(name)) {}

  int add_variable(const std::string& name, VarType type, Rational lower, Rational upper);
  int add_binary(const std::string& name) { return add_variable(name, VarType::Binary, 0, 1); }
  void add_row(Row row);
  void add_objective(int var, const Rational& coef);
  void add_objective_constant(const Rational& value) { constant_ += value; }

  const std::string& name() const { return name_; }
  const std::vector<Variable>& variables() const { return vars_; }
  const std::vector<Row>& rows() const { return rows_; }
  const std::vector<Term>& objective() const { return objective_; }
  const Rational& objective_constant() const { return constant_; }

  int index(const std::string& name) const;  // -1 when absent
  std::size_t count(const std::string& family) const;
  std::size_t count(VarType type) const;

  std::string to_lp() const;

 private:
  std::string name_;
  std::vector<Variable> vars_;
  std::map<std::string, int> index_;
  std::vector<Row> rows_;
  std::vector<Term> objective_;
  Rational constant_ = 0;
};

using Assignment = std::map<std::string, Rational>;

struct Evaluation {
  bool feasible = true;
  Rational objective = 0;
  std::vector<std::string> violated;  // row names, bound:<var>, integrality:<var>
};

// Exact substitution. Throws InputError when a variable is unbound.
Evaluation evaluate(const LinearModel& model, const Assignment& assignment);

// Truck-routing model: arcs between trucks, requests and the sink; pickup and
// delivery split into day and hour variables; objective lambda*Z1 + (1-lambda)*Z2.
LinearModel emit_stage1(const Instance& instance, double lambda);

// Crew model for a frozen plan (no rest rows).
LinearModel emit_stage2(const Instance& instance, const TaskPlan& plan);

// Variable values for a heuristic solution; every model variable is bound.
Assignment stage1_assignment(const LinearModel& model, const Instance& instance, const TaskPlan& plan);
Assignment stage2_assignment(const LinearModel& model, const CrewProblem& problem,
                             const Schedule& schedule);

}  // namespace vrcsp
