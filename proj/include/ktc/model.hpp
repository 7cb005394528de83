#pragma once

#include <cstddef>
#include <sstream>
#include <string>
#include <vector>

#include "ktc/errors.hpp"
#include "ktc/geometry.hpp"

namespace ktc {

/// Absolute slack used when comparing recomputed costs against recorded ones.
constexpr double cost_slack = 1e-9;

/// A k-tour cover instance: points in the plane, a depot (origin), and the
/// capacity k = maximum number of points a single tour may visit.
struct Instance {
  Point origin{0.0, 0.0};
  std::vector<Point> points;
  int capacity = 1;

  int n() const { return int(points.size()); }

  /// Distance from the depot to point i.
  double radius(int i) const { return dist(origin, points[i]); }
};

/// One tour: the depot, the listed points in order, back to the depot.
/// Entries are indices into Instance::points.
struct Tour {
  std::vector<int> indices;

  int size() const { return int(indices.size()); }
  bool empty() const { return indices.empty(); }
};

struct Solution {
  std::vector<Tour> tours;
  double cost = 0.0;
};

/// Length of the closed walk depot -> indices... -> depot.
/// An empty tour has length zero.
inline double tour_cost(const Instance& inst, const Tour& tour) {
  if (tour.empty()) return 0.0;
  for (int idx : tour.indices) {
    if (idx < 0 || idx >= inst.n())
      fail(errc::invalid_input, "tour references point " + std::to_string(idx) +
                                    " outside [0, " + std::to_string(inst.n()) + ")");
  }
  StableSum sum;
  sum.add(inst.radius(tour.indices.front()));
  for (std::size_t i = 0; i + 1 < tour.indices.size(); ++i)
    sum.add(dist(inst.points[tour.indices[i]], inst.points[tour.indices[i + 1]]));
  sum.add(inst.radius(tour.indices.back()));
  return sum.value();
}

inline double solution_cost(const Instance& inst, const std::vector<Tour>& tours) {
  StableSum sum;
  for (const Tour& t : tours) sum.add(tour_cost(inst, t));
  return sum.value();
}

/// Builds a Solution with the cost recomputed from the instance.
inline Solution make_solution(const Instance& inst, std::vector<Tour> tours) {
  Solution sol;
  sol.cost = solution_cost(inst, tours);
  sol.tours = std::move(tours);
  return sol;
}

/// Radial lower bound: (2/k) * sum of depot distances. Every point must be
/// reached by a tour that also returns, and a tour serves at most k points,
/// so no cover can cost less than this.
inline double radial_cost(const Instance& inst) {
  if (inst.capacity < 1) fail(errc::invalid_input, "capacity must be at least 1");
  StableSum sum;
  for (int i = 0; i < inst.n(); ++i) sum.add(inst.radius(i));
  return 2.0 / double(inst.capacity) * sum.value();
}

enum class violation_kind {
  empty_tour,
  capacity_exceeded,
  invalid_index,
  duplicate_index,
  missing_index,
  cost_mismatch,
};

struct Violation {
  violation_kind kind;
  int tour = -1;   ///< offending tour, or -1 when not tied to one tour
  int index = -1;  ///< offending point index, or -1
  std::string detail;

  std::string to_string() const {
    std::ostringstream out;
    switch (kind) {
      case violation_kind::empty_tour: out << "empty tour"; break;
      case violation_kind::capacity_exceeded: out << "capacity exceeded"; break;
      case violation_kind::invalid_index: out << "invalid point index"; break;
      case violation_kind::duplicate_index: out << "point visited twice"; break;
      case violation_kind::missing_index: out << "point not covered"; break;
      case violation_kind::cost_mismatch: out << "cost mismatch"; break;
    }
    if (tour >= 0) out << " [tour " << tour << "]";
    if (index >= 0) out << " [point " << index << "]";
    if (!detail.empty()) out << ": " << detail;
    return out.str();
  }
};

/// Feasibility report for a solution against an instance.
struct ValidationReport {
  std::vector<Violation> violations;
  double recomputed_cost = 0.0;

  bool ok() const { return violations.empty(); }

  std::string to_string() const {
    if (ok()) return "feasible";
    std::ostringstream out;
    out << violations.size() << " violation(s)";
    for (const Violation& v : violations) out << "\n  - " << v.to_string();
    return out.str();
  }
};

/// Checks that a solution is a feasible cover: every point visited exactly
/// once, no tour longer than k, no empty tours, and the recorded cost matches
/// the recomputed one within `cost_slack`.
inline ValidationReport validate(const Instance& inst, const Solution& sol) {
  ValidationReport report;
  std::vector<int> seen(inst.n(), 0);
  StableSum total;
  for (std::size_t t = 0; t < sol.tours.size(); ++t) {
    const Tour& tour = sol.tours[t];
    if (tour.empty()) {
      report.violations.push_back({violation_kind::empty_tour, int(t), -1, ""});
      continue;
    }
    if (tour.size() > inst.capacity) {
      report.violations.push_back({violation_kind::capacity_exceeded, int(t), -1,
                                   std::to_string(tour.size()) + " points, capacity " +
                                       std::to_string(inst.capacity)});
    }
    bool indices_ok = true;
    for (int idx : tour.indices) {
      if (idx < 0 || idx >= inst.n()) {
        report.violations.push_back({violation_kind::invalid_index, int(t), idx, ""});
        indices_ok = false;
      } else if (++seen[idx] == 2) {
        // report each re-visited point once
        report.violations.push_back({violation_kind::duplicate_index, int(t), idx, ""});
      }
    }
    if (indices_ok) total.add(tour_cost(inst, tour));
  }
  for (int i = 0; i < inst.n(); ++i)
    if (seen[i] == 0)
      report.violations.push_back({violation_kind::missing_index, -1, i, ""});

  report.recomputed_cost = total.value();
  if (report.violations.empty() &&
      std::abs(report.recomputed_cost - sol.cost) > cost_slack) {
    std::ostringstream detail;
    detail.precision(17);
    detail << "recorded " << sol.cost << ", recomputed " << report.recomputed_cost;
    report.violations.push_back({violation_kind::cost_mismatch, -1, -1, detail.str()});
  }
  return report;
}

}  // namespace ktc
