#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "ktc/discretize.hpp"
#include "ktc/errors.hpp"
#include "ktc/exact.hpp"
#include "ktc/heuristics.hpp"
#include "ktc/model.hpp"
#include "ktc/rings.hpp"

namespace ktc {

enum class Strategy { exact, heuristic };

/// Which solver runs on each segment, and the size ceilings for the exact
/// oracles. The exact base refuses segments above max_points_dp rather than
/// silently degrading.
struct BaseSolverChoice {
  enum class Kind { exact_oracle, cover_heuristic };
  Kind kind = Kind::cover_heuristic;
  OracleLimits limits;
};

/// Everything worth reporting about a reduction, for logs and solution
/// metadata. Counts are over source points.
struct Provenance {
  double epsilon = 0.0;
  double span = 0.0;
  double strip_threshold = 0.0;
  int circle_count = 0;
  int ray_count = 0;
  long long location_count = 0;  ///< T
  int ring_width = 0;
  int ring_count = 0;
  int period = 0;   ///< a
  int residue = 0;  ///< b
  int stripped_points = 0;
  int marked_points = 0;
  int capped_points = 0;
  long long segment_points = 0;
  int segment_count = 0;
  double stripped_cost = 0.0;
  double stripped_bound = 0.0;
  double marked_cover_cost = 0.0;  ///< priced on snapped coordinates
  std::vector<int> segment_sizes;
};

/// Immutable snapshot of a full reduction. Mandatory tours (stripped
/// 1-tours, cap trivial tours, the marked-ring cover) are already in source
/// indices; segment solutions must be lifted to source indices before merge.
struct ReductionResult {
  Instance source;
  double epsilon = 0.0;
  SnappedInstance snapped;
  RingPartition marking;
  std::vector<Tour> stripped_tours;
  std::vector<Tour> trivial_tours;
  std::vector<Tour> marked_cover_tours;
  std::vector<SegmentProblem> segments;
  Provenance provenance;
};

namespace detail {

template <typename Fn>
auto stage(const char* name, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.code(), std::string(name) + ": " + e.what());
  }
}

}  // namespace detail

/// Runs strip -> snap -> rings -> marking -> segment extraction and checks
/// that every source point lands in exactly one bucket.
inline ReductionResult reduce(const Instance& inst, double eps) {
  check_epsilon(eps);
  if (inst.capacity < 1) fail(errc::invalid_input, "capacity must be at least 1");

  ReductionResult red;
  red.source = inst;
  red.epsilon = eps;
  red.snapped = detail::stage("snap", [&] { return discretize(inst, eps); });

  Provenance& prov = red.provenance;
  prov.epsilon = eps;
  prov.span = red.snapped.grid.span;
  prov.strip_threshold = red.snapped.grid.inner_radius;
  prov.stripped_points = int(red.snapped.stripped.size());
  prov.stripped_cost = red.snapped.stripped_cost;
  prov.stripped_bound = 2.0 * red.snapped.grid.span * eps;
  for (const auto& [src, r] : red.snapped.stripped) red.stripped_tours.push_back({{src}});

  if (red.snapped.n() == 0) {
    // everything was within the strip threshold; nothing to mark or split
    red.marking.period = marking_period(eps);
    red.marking.residue = 1;
    prov.period = red.marking.period;
    prov.residue = red.marking.residue;
    return red;
  }

  prov.circle_count = red.snapped.grid.circle_count;
  prov.ray_count = red.snapped.grid.ray_count;
  prov.location_count = red.snapped.grid.location_count();

  const RingLayout rings =
      detail::stage("rings", [&] { return build_rings(red.snapped.grid, eps); });
  MarkingChoice choice =
      detail::stage("marking", [&] { return select_marking(red.snapped, rings, eps); });
  red.marking = choice.marking;
  prov.ring_width = rings.width;
  prov.ring_count = rings.ring_count;
  prov.period = red.marking.period;
  prov.residue = red.marking.residue;
  prov.marked_cover_cost = choice.cover.cost;
  for (Tour t : choice.cover.tours) {
    for (int& idx : t.indices) idx = red.snapped.to_source[idx];
    prov.marked_points += t.size();
    red.marked_cover_tours.push_back(std::move(t));
  }

  red.segments =
      detail::stage("segments", [&] { return extract_segments(red.snapped, red.marking); });
  prov.segment_count = int(red.segments.size());
  for (const SegmentProblem& seg : red.segments) {
    prov.segment_sizes.push_back(seg.instance.n());
    prov.segment_points += seg.instance.n();
    for (const Tour& t : seg.trivial_tours) {
      prov.capped_points += t.size();
      red.trivial_tours.push_back(t);
    }
  }

  const long long total = prov.stripped_points + prov.marked_points + prov.capped_points +
                          prov.segment_points;
  if (total != inst.n())
    fail(errc::internal, "reduction lost points: " + std::to_string(total) + " of " +
                             std::to_string(inst.n()) + " accounted for");
  return red;
}

/// Solves each segment with the chosen base solver and lifts the result to
/// source indices. Threads only change wall time: results are written by
/// segment index and errors are reported for the lowest failing index.
inline std::vector<Solution> solve_segments(const ReductionResult& red,
                                            const BaseSolverChoice& base = {}, int threads = 1) {
  const int q = int(red.segments.size());
  std::vector<Solution> out(q);
  std::vector<std::exception_ptr> errors(q);

  auto work = [&](int i) {
    try {
      const SegmentProblem& seg = red.segments[i];
      Solution local;
      if (base.kind == BaseSolverChoice::Kind::exact_oracle) {
        if (seg.instance.n() > base.limits.max_points_dp)
          fail(errc::capability,
               "segment " + std::to_string(i) + " has " + std::to_string(seg.instance.n()) +
                   " points, above the exact ceiling of " +
                   std::to_string(base.limits.max_points_dp) + "; use the heuristic base");
        local = exact_ktc(seg.instance.points, base.limits);
      } else {
        local = cover_heuristic(seg.instance.points);
      }
      out[i] = lift_solution(seg.instance, local);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };

  if (threads < 1) fail(errc::invalid_input, "thread count must be at least 1");
  const int workers = std::min(threads, std::max(q, 1));
  if (workers <= 1) {
    for (int i = 0; i < q; ++i) work(i);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t)
      pool.emplace_back([&] {
        for (int i; (i = next.fetch_add(1)) < q;) work(i);
      });
    for (std::thread& th : pool) th.join();
  }

  for (int i = 0; i < q; ++i)
    if (errors[i]) std::rethrow_exception(errors[i]);
  return out;
}

/// Stitches the mandatory tours and the (lifted) segment solutions into one
/// validated cover of the source instance.
inline Solution merge(const ReductionResult& red, const std::vector<Solution>& segment_solutions) {
  if (segment_solutions.size() != red.segments.size())
    fail(errc::invalid_input, "expected " + std::to_string(red.segments.size()) +
                                  " segment solutions, got " +
                                  std::to_string(segment_solutions.size()));
  std::vector<std::vector<Tour>> parts;
  parts.push_back(red.stripped_tours);
  parts.push_back(red.trivial_tours);
  parts.push_back(red.marked_cover_tours);
  for (const Solution& s : segment_solutions) parts.push_back(s.tours);
  return detail::stage("merge", [&] { return merge_parts(red.source, parts); });
}

/// Full pipeline: reduce, solve the segments, merge. The result is a
/// feasible cover of the input whose cost the tests compare against the
/// exact optimum and the radial lower bound.
inline Solution solve(const Instance& inst, double eps, const BaseSolverChoice& base = {},
                      int threads = 1) {
  const ReductionResult red = reduce(inst, eps);
  const std::vector<Solution> seg_solutions = solve_segments(red, base, threads);
  Solution out = merge(red, seg_solutions);
  if (radial_cost(inst) > out.cost + cost_slack)
    fail(errc::internal, "solution beat the radial lower bound");
  return out;
}

/// Bypasses the reduction: one solver over the whole instance.
inline Solution solve_direct(const Instance& inst, Strategy strategy,
                             const OracleLimits& limits = {}) {
  if (strategy == Strategy::exact) return exact_ktc(inst, limits);
  return cover_heuristic(inst);
}

}  // namespace ktc
