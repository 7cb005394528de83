#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "ktc/discretize.hpp"
#include "ktc/errors.hpp"
#include "ktc/heuristics.hpp"
#include "ktc/model.hpp"

namespace ktc {

/// Grouping of consecutive circles into rings of a fixed width (the last
/// ring may be narrower). A full-width ring's outer/inner radius ratio is at
/// least 6/eps, which is what makes crossing one expensive.
struct RingLayout {
  int width = 0;        ///< circles per ring
  int ring_count = 0;
  int circle_count = 0;

  int ring_of(int circle) const { return circle / width; }
  int first_circle(int ring) const { return ring * width; }
  int last_circle(int ring) const { return std::min((ring + 1) * width, circle_count) - 1; }
  int circles_in(int ring) const { return last_circle(ring) - first_circle(ring) + 1; }
};

inline RingLayout build_rings(const LocationGrid& grid, double eps) {
  check_epsilon(eps);
  if (grid.circle_count < 1) fail(errc::invalid_input, "grid has no circles");
  RingLayout rings;
  rings.width = int(std::ceil(std::log(6.0 / eps) / std::log(grid.growth)));
  rings.circle_count = grid.circle_count;
  rings.ring_count = (grid.circle_count + rings.width - 1) / rings.width;
  if (std::pow(grid.growth, rings.width) < 6.0 / eps * (1.0 - 1e-9))
    fail(errc::internal, "ring width too small for the 6/eps radius ratio");
  return rings;
}

/// Marking period a: every a-th ring gets marked.
inline int marking_period(double eps) {
  check_epsilon(eps);
  return int(std::ceil(24.0 / eps));
}

/// A chosen marking: rings congruent to the residue (mod period) are marked.
struct RingPartition {
  RingLayout layout;
  int period = 0;   ///< a
  int residue = 0;  ///< b in {1..a}

  bool is_marked(int ring) const { return period > 0 && ring % period == residue % period; }

  std::vector<int> marked_rings() const {
    std::vector<int> out;
    for (int j = 0; j < layout.ring_count; ++j)
      if (is_marked(j)) out.push_back(j);
    return out;
  }
};

/// select_marking's outcome: the marking plus the heuristic cover of the
/// marked points (tours over local indices of the snapped universe, priced
/// on the snapped coordinates).
struct MarkingChoice {
  RingPartition marking;
  Solution cover;
  std::vector<double> residue_costs;  ///< cover cost per candidate b (index b-1)
};

/// Tries every residue b in {1..a}, covers the points of the would-be marked
/// rings with the heuristic, and keeps the cheapest. Residues whose rings
/// hold no points cost zero. Ties break to the lowest b.
inline MarkingChoice select_marking(const SnappedInstance& sn, const RingLayout& rings, double eps) {
  const int a = marking_period(eps);
  MarkingChoice out;
  out.marking.layout = rings;
  out.marking.period = a;
  out.marking.residue = 1;
  out.residue_costs.assign(a, 0.0);

  std::vector<std::vector<int>> by_class(a);
  for (int i = 0; i < sn.n(); ++i) {
    const int ring = rings.ring_of(sn.location_of[i].circle);
    by_class[ring % a].push_back(i);
  }

  double best_cost = std::numeric_limits<double>::infinity();
  for (int b = 1; b <= a; ++b) {
    const std::vector<int>& ids = by_class[b % a];
    Solution cover;
    if (!ids.empty()) {
      Instance sub;
      sub.origin = sn.points.origin;
      sub.capacity = sn.points.capacity;
      for (int id : ids) sub.points.push_back(sn.points.points[id]);
      cover = cover_heuristic(sub);
      for (Tour& t : cover.tours)
        for (int& idx : t.indices) idx = ids[idx];
    }
    out.residue_costs[b - 1] = cover.cost;
    if (cover.cost < best_cost) {
      best_cost = cover.cost;
      out.marking.residue = b;
      out.cover = std::move(cover);
    }
  }
  return out;
}

/// An independent subproblem: the points of one maximal run of unmarked
/// rings, re-capped against the run's own location count. Solving it and
/// lifting through instance.to_source gives tours over source indices;
/// trivial_tours (already in source indices) cover what the cap removed.
struct SegmentProblem {
  int index = 0;
  int first_ring = 0;
  int last_ring = 0;
  long long location_budget = 0;  ///< segment-local location count
  SnappedInstance instance;
  std::vector<Tour> trivial_tours;
  std::vector<Location> trivial_locations;
};

/// Splits the unmarked rings into maximal runs, ordered inside-out. Runs
/// without points yield no segment.
inline std::vector<SegmentProblem> extract_segments(const SnappedInstance& sn,
                                                    const RingPartition& marking) {
  const RingLayout& rings = marking.layout;
  std::vector<SegmentProblem> segments;
  if (sn.n() == 0) return segments;

  std::vector<std::vector<int>> ring_pts(rings.ring_count);
  for (int i = 0; i < sn.n(); ++i)
    ring_pts[rings.ring_of(sn.location_of[i].circle)].push_back(i);

  int run_start = -1;
  for (int j = 0; j <= rings.ring_count; ++j) {
    const bool marked = j == rings.ring_count || marking.is_marked(j);
    if (!marked) {
      if (run_start < 0) run_start = j;
      continue;
    }
    if (run_start >= 0) {
      std::vector<int> ids;
      long long circles = 0;
      for (int ring = run_start; ring < j; ++ring) {
        ids.insert(ids.end(), ring_pts[ring].begin(), ring_pts[ring].end());
        circles += rings.circles_in(ring);
      }
      if (!ids.empty()) {
        std::sort(ids.begin(), ids.end());
        SnappedInstance sub = detail::restrict_to(sn, ids);
        const long long budget = circles * sn.grid.ray_count;
        CapResult cap = cap_locations(sub, budget, sn.points.capacity);
        SegmentProblem seg;
        seg.index = int(segments.size());
        seg.first_ring = run_start;
        seg.last_ring = j - 1;
        seg.location_budget = budget;
        for (Tour t : cap.trivial_tours) {
          for (int& idx : t.indices) idx = sub.to_source[idx];
          seg.trivial_tours.push_back(std::move(t));
        }
        seg.trivial_locations = cap.trivial_locations;
        seg.instance = std::move(cap.reduced);
        segments.push_back(std::move(seg));
      }
      run_start = -1;
    }
  }
  return segments;
}

/// True when no tour visits two points separated by a marked ring (points
/// strictly inside and strictly outside the same marked ring).
inline bool is_ring_respecting(const SnappedInstance& sn, const Solution& sol,
                               const RingPartition& marking) {
  const std::vector<int> marked = marking.marked_rings();
  for (const Tour& t : sol.tours) {
    if (t.empty()) continue;
    int cmin = std::numeric_limits<int>::max(), cmax = -1;
    for (int idx : t.indices) {
      cmin = std::min(cmin, sn.location_of[idx].circle);
      cmax = std::max(cmax, sn.location_of[idx].circle);
    }
    for (int j : marked)
      if (cmin < marking.layout.first_circle(j) && cmax > marking.layout.last_circle(j))
        return false;
  }
  return true;
}

/// Lemma-2 transform made executable: drop marked-ring points (their cover
/// is accounted separately), then, from the outermost marked ring inward,
/// split every tour that straddles the ring into its maximal inside/outside
/// runs, each closed through the depot.
///
/// Cost accounting per removed straddling edge (u inside at radius < c_f,
/// x outside at radius >= (6/eps)*c_f, c_f the ring's inner radius): the two
/// new depot legs |Ou| + |Ox| exceed the removed edge |ux| >= |x| - |u| by
/// at most 2|u| <= 2*c_f <= (2*eps/(6-eps)) * |ux| <= (eps/2) * |ux|. Every
/// removed edge is an original edge (new edges are depot legs, which never
/// straddle anything by definition), so the total stays within
/// (1 + eps/2) * input cost; asserted below.
inline Solution ring_respecting_transform(const SnappedInstance& sn, const Solution& sol,
                                          const RingPartition& marking, double eps) {
  check_epsilon(eps);
  const ValidationReport report = validate(sn.points, sol);
  if (!report.ok())
    fail(errc::validation, "ring transform needs a feasible solution: " + report.to_string());

  const RingLayout& rings = marking.layout;
  const std::vector<int> marked = marking.marked_rings();

  // shortcut past marked-ring points; cost only shrinks
  std::vector<std::vector<int>> pieces;
  for (const Tour& t : sol.tours) {
    std::vector<int> seq;
    for (int idx : t.indices)
      if (!marking.is_marked(rings.ring_of(sn.location_of[idx].circle))) seq.push_back(idx);
    if (!seq.empty()) pieces.push_back(std::move(seq));
  }

  // outermost marked ring first; split straddling pieces into side runs
  for (int mi = int(marked.size()) - 1; mi >= 0; --mi) {
    const int first = rings.first_circle(marked[mi]);
    const int last = rings.last_circle(marked[mi]);
    std::vector<std::vector<int>> next;
    for (std::vector<int>& piece : pieces) {
      int cmin = std::numeric_limits<int>::max(), cmax = -1;
      for (int idx : piece) {
        cmin = std::min(cmin, sn.location_of[idx].circle);
        cmax = std::max(cmax, sn.location_of[idx].circle);
      }
      if (!(cmin < first && cmax > last)) {
        next.push_back(std::move(piece));
        continue;
      }
      std::vector<int> run;
      bool run_inside = false;
      for (int idx : piece) {
        const bool inside = sn.location_of[idx].circle < first;
        if (!run.empty() && inside != run_inside) {
          next.push_back(std::move(run));
          run.clear();
        }
        run_inside = inside;
        run.push_back(idx);
      }
      if (!run.empty()) next.push_back(std::move(run));
    }
    pieces = std::move(next);
  }

  std::vector<Tour> tours;
  tours.reserve(pieces.size());
  for (std::vector<int>& piece : pieces) tours.push_back({std::move(piece)});
  Solution out = make_solution(sn.points, std::move(tours));

  if (!is_ring_respecting(sn, out, marking))
    fail(errc::internal, "ring transform left a straddling tour");
  if (out.cost > sol.cost * (1.0 + eps / 2.0) + cost_slack)
    fail(errc::internal, "ring transform exceeded its cost budget");
  return out;
}

/// Concatenates tour collections over the source instance into one cover,
/// verifying that every point is covered exactly once and that the result
/// validates. Parts typically come from stripped 1-tours, cap trivial tours,
/// the marked-ring cover, and lifted segment solutions.
inline Solution merge_parts(const Instance& source, const std::vector<std::vector<Tour>>& parts) {
  std::vector<int> seen(source.n(), 0);
  std::vector<Tour> tours;
  for (const std::vector<Tour>& part : parts)
    for (const Tour& t : part) {
      for (int idx : t.indices) {
        if (idx < 0 || idx >= source.n())
          fail(errc::structural, "merge: point " + std::to_string(idx) + " outside the instance");
        if (++seen[idx] > 1)
          fail(errc::structural, "merge: point " + std::to_string(idx) + " covered twice");
      }
      tours.push_back(t);
    }
  for (int i = 0; i < source.n(); ++i)
    if (!seen[i]) fail(errc::structural, "merge: point " + std::to_string(i) + " left uncovered");
  Solution out = make_solution(source, std::move(tours));
  const ValidationReport report = validate(source, out);
  if (!report.ok()) fail(errc::structural, "merged solution is infeasible: " + report.to_string());
  return out;
}

}  // namespace ktc
