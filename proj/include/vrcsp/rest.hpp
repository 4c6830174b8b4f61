#pragma once

#include <span>
#include <vector>

#include "vrcsp/model.hpp"

namespace vrcsp {

// Summary of a driver's timeline against the rest rules. Rules that the
// regulation does not activate are reported as satisfied.
struct RestStatus {
  double excess = 0.0;    // sum over windows of max(0, Gamma - 12)
  bool day_off = true;    // one work-free calendar day in every 7 consecutive days
  bool weekly = true;     // L2
  bool gaps = true;       // L3

  // Everything except the 12 h per 24 h rule.
  bool semi_feasible() const { return day_off && weekly && gaps; }
  bool feasible() const { return excess == 0.0 && semi_feasible(); }
};

// `intervals` must be sorted by begin and pairwise non-overlapping.
RestStatus evaluate_rest(std::span<const Interval> intervals, int horizon_days,
                         Regulation regulation);

// Gamma[i] for i = 0 .. 24H-24 from the same intervals.
std::vector<Hours> sliding_workload(std::span<const Interval> intervals, int horizon_days);

// Detailed violations for one driver (used by check_rest / validate).
std::vector<Violation> rest_violations(std::span<const Interval> intervals, int horizon_days,
                                       Regulation regulation, const std::string& subject);

}  // namespace vrcsp
