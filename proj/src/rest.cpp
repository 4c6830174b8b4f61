#include "vrcsp/rest.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace vrcsp {

namespace {

constexpr int kDayHours = 24;
constexpr int kWeekHours = 168;

// Hours worked inside each unit slot [h, h+1] of the horizon.
void fill_buckets(std::span<const Interval> intervals, int hours, std::vector<double>& buckets) {
  buckets.assign(static_cast<std::size_t>(hours), 0.0);
  for (const Interval& iv : intervals) {
    const double b = std::max(iv.begin, 0.0);
    const double e = std::min(iv.end, static_cast<double>(hours));
    if (e <= b) continue;
    const int first = static_cast<int>(std::floor(b));
    const int last = std::min(static_cast<int>(std::ceil(e)), hours);
    for (int h = first; h < last; ++h) {
      const double lo = std::max(b, static_cast<double>(h));
      const double hi = std::min(e, static_cast<double>(h + 1));
      if (hi > lo) buckets[h] += hi - lo;
    }
  }
}

double sum_range(const std::vector<double>& buckets, int from, int to) {
  double s = 0.0;
  for (int h = from; h < to; ++h) s += buckets[h];
  return s;
}

std::vector<double>& scratch() {
  thread_local std::vector<double> buffer;
  return buffer;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

std::vector<Hours> sliding_workload(std::span<const Interval> intervals, int horizon_days) {
  const int hours = kDayHours * horizon_days;
  auto& buckets = scratch();
  fill_buckets(intervals, hours, buckets);
  std::vector<Hours> gamma(static_cast<std::size_t>(hours - kDayHours + 1));
  for (int i = 0; i + kDayHours <= hours; ++i) gamma[i] = sum_range(buckets, i, i + kDayHours);
  return gamma;
}

RestStatus evaluate_rest(std::span<const Interval> intervals, int horizon_days,
                         Regulation regulation) {
  RestStatus status;
  const int hours = kDayHours * horizon_days;
  auto& buckets = scratch();
  fill_buckets(intervals, hours, buckets);

  for (int i = 0; i + kDayHours <= hours; ++i) {
    const double window = sum_range(buckets, i, i + kDayHours);
    if (window > kMaxDailyWork + kTimeEps) status.excess += window - kMaxDailyWork;
  }

  if (horizon_days >= 7) {
    int run = 0;
    for (int day = 0; day < horizon_days && status.day_off; ++day) {
      const bool worked = sum_range(buckets, day * kDayHours, (day + 1) * kDayHours) > kTimeEps;
      run = worked ? run + 1 : 0;
      if (run >= 7) status.day_off = false;
    }
  }

  if (regulation == Regulation::L1L2) {
    for (int from = 0; from < hours; from += kWeekHours) {
      if (sum_range(buckets, from, std::min(from + kWeekHours, hours)) >
          kMaxWeeklyWork + kTimeEps) {
        status.weekly = false;
        break;
      }
    }
  }

  if (regulation == Regulation::L1L3 && !intervals.empty()) {
    double end = intervals.front().end;
    for (std::size_t k = 1; k < intervals.size(); ++k) {
      const double gap = intervals[k].begin - end;
      if (gap > kTimeEps && gap < kMinRestBetweenPeriods - kTimeEps) {
        status.gaps = false;
        break;
      }
      end = std::max(end, intervals[k].end);
    }
  }
  return status;
}

std::vector<Violation> rest_violations(std::span<const Interval> intervals, int horizon_days,
                                       Regulation regulation, const std::string& subject) {
  std::vector<Violation> out;
  const int hours = kDayHours * horizon_days;
  std::vector<double> buckets;
  fill_buckets(intervals, hours, buckets);

  for (int i = 0; i + kDayHours <= hours; ++i) {
    const double gamma = sum_range(buckets, i, i + kDayHours);
    if (gamma > kMaxDailyWork + kTimeEps) {
      out.push_back({ViolationKind::RestL1Daily, subject,
                     "works " + fmt(gamma) + " h in [" + std::to_string(i) + "," +
                         std::to_string(i + kDayHours) + "]",
                     gamma - kMaxDailyWork});
    }
  }

  if (horizon_days >= 7) {
    std::vector<bool> worked(static_cast<std::size_t>(horizon_days));
    for (int day = 0; day < horizon_days; ++day) {
      worked[day] = sum_range(buckets, day * kDayHours, (day + 1) * kDayHours) > kTimeEps;
    }
    for (int first = 0; first + 7 <= horizon_days; ++first) {
      if (std::all_of(worked.begin() + first, worked.begin() + first + 7, [](bool w) { return w; })) {
        out.push_back({ViolationKind::RestL1WeekOff, subject,
                       "no day off in days " + std::to_string(first) + ".." +
                           std::to_string(first + 6),
                       7.0});
      }
    }
  }

  if (regulation == Regulation::L1L2) {
    for (int from = 0; from < hours; from += kWeekHours) {
      const double total = sum_range(buckets, from, std::min(from + kWeekHours, hours));
      if (total > kMaxWeeklyWork + kTimeEps) {
        out.push_back({ViolationKind::RestL2, subject,
                       "works " + fmt(total) + " h in week starting at hour " +
                           std::to_string(from),
                       total - kMaxWeeklyWork});
      }
    }
  }

  if (regulation == Regulation::L1L3 && !intervals.empty()) {
    double end = intervals.front().end;
    for (std::size_t k = 1; k < intervals.size(); ++k) {
      const double gap = intervals[k].begin - end;
      if (gap > kTimeEps && gap < kMinRestBetweenPeriods - kTimeEps) {
        out.push_back({ViolationKind::RestL3, subject,
                       "rest of " + fmt(gap) + " h in [" + fmt(end) + "," +
                           fmt(intervals[k].begin) + "]",
                       kMinRestBetweenPeriods - gap});
      }
      end = std::max(end, intervals[k].end);
    }
  }
  return out;
}

}  // namespace vrcsp
