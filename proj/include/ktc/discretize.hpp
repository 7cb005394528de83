#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ktc/errors.hpp"
#include "ktc/model.hpp"

namespace ktc {

/// Position on the grid: circle index (0 = innermost) and ray index.
struct Location {
  int circle = 0;
  int ray = 0;

  friend bool operator==(const Location&, const Location&) = default;
  friend auto operator<=>(const Location&, const Location&) = default;
};

/// Concentric-circle / ray grid around the depot.
///
/// Circle radii grow geometrically from inner_radius = span*eps/n by the
/// factor growth = 1 + eps/k; rays are ray_count equally spaced directions,
/// ray_count = ceil(2*pi*k/eps). Snapping a point to the nearest
/// circle-and-ray intersection then displaces it by at most (eps/k) times
/// its depot distance.
struct LocationGrid {
  double inner_radius = 0.0;
  double growth = 1.0;
  double span = 0.0;    ///< largest depot distance the grid must reach
  double epsilon = 0.0;
  int capacity = 0;     ///< k used in the formulas
  int source_n = 0;     ///< point count used in the formulas
  int circle_count = 0;
  int ray_count = 0;

  long long location_count() const { return (long long)circle_count * ray_count; }
  double radius(int circle) const { return inner_radius * std::pow(growth, circle); }
  double ray_angle(int ray) const { return two_pi * ray / ray_count; }

  Point location_point(Point origin, Location loc) const {
    const double r = radius(loc.circle);
    const double a = ray_angle(loc.ray);
    return {origin.x + r * std::cos(a), origin.y + r * std::sin(a)};
  }
};

inline void check_epsilon(double eps) {
  if (!(eps > 0.0 && eps <= 0.5))
    fail(errc::invalid_input, "epsilon must lie in (0, 1/2], got " + std::to_string(eps));
}

inline LocationGrid build_grid(double span, int n, int k, double eps) {
  if (!(span > 0.0))
    fail(errc::invalid_input, "grid span must be positive; strip an all-depot instance first");
  if (n < 1) fail(errc::invalid_input, "grid needs at least one point");
  if (k < 1) fail(errc::invalid_input, "capacity must be at least 1");
  check_epsilon(eps);
  LocationGrid grid;
  grid.span = span;
  grid.epsilon = eps;
  grid.capacity = k;
  grid.source_n = n;
  grid.inner_radius = span * eps / n;
  grid.growth = 1.0 + eps / k;
  grid.circle_count = int(std::ceil(std::log(n / eps) / std::log(grid.growth))) + 1;
  // the formula guarantees coverage mathematically; guard against rounding
  while (grid.radius(grid.circle_count - 1) < span * (1.0 - 1e-9)) ++grid.circle_count;
  grid.ray_count = int(std::ceil(two_pi * k / eps));
  return grid;
}

/// Result of removing points too close to the depot to matter: each is
/// served by its own out-and-back tour, whose total cost is provably at most
/// 2*span*eps (<= eps * optimum).
struct StripResult {
  Instance kept;
  std::vector<int> kept_to_source;             ///< kept index -> source index
  std::vector<std::pair<int, double>> stripped;  ///< (source index, 1-tour cost)
  double stripped_cost = 0.0;
  double stripped_bound = 0.0;  ///< 2 * span * eps
  double threshold = 0.0;       ///< span * eps / n
  double span = 0.0;
};

inline StripResult strip_close_points(const Instance& inst, double eps) {
  check_epsilon(eps);
  if (inst.capacity < 1) fail(errc::invalid_input, "capacity must be at least 1");
  StripResult res;
  res.kept.origin = inst.origin;
  res.kept.capacity = inst.capacity;
  const int n = inst.n();
  if (n == 0) return res;
  for (int i = 0; i < n; ++i) res.span = std::max(res.span, inst.radius(i));
  res.threshold = res.span * eps / n;
  res.stripped_bound = 2.0 * res.span * eps;
  StableSum cost;
  for (int i = 0; i < n; ++i) {
    const double r = inst.radius(i);
    if (r <= res.threshold) {
      res.stripped.emplace_back(i, 2.0 * r);
      cost.add(2.0 * r);
    } else {
      res.kept.points.push_back(inst.points[i]);
      res.kept_to_source.push_back(i);
    }
  }
  res.stripped_cost = cost.value();
  if (res.stripped_cost > res.stripped_bound * (1.0 + 1e-12) + 1e-12)
    fail(errc::internal, "stripped tours exceeded their certified bound");
  return res;
}

/// A discretised universe: every kept point moved onto the grid. Solutions
/// over `points` use local indices; to_source maps them back to the instance
/// the discretisation started from.
struct SnappedInstance {
  LocationGrid grid;
  Instance points;                               ///< snapped coordinates
  std::vector<Location> location_of;             ///< grid cell per local point
  std::vector<int> to_source;                    ///< local index -> source index
  std::vector<Point> source_coords;              ///< pre-snap coordinates per local point
  std::vector<std::pair<int, double>> stripped;  ///< (source index, 1-tour cost)
  double stripped_cost = 0.0;
  int source_n = 0;

  int n() const { return points.n(); }
  double displacement(int i) const { return dist(points.points[i], source_coords[i]); }

  std::map<Location, int> location_counts() const {
    std::map<Location, int> counts;
    for (const Location& loc : location_of) ++counts[loc];
    return counts;
  }

  std::map<int, Location> assignment() const {
    std::map<int, Location> map;
    for (int i = 0; i < n(); ++i) map.emplace(to_source[i], location_of[i]);
    return map;
  }
};

/// Moves every point to its nearest location among the four bracketing
/// candidates (floor/ceil circle x floor/ceil ray). Ties break to the lower
/// circle, then the lower ray. The displacement invariant
/// d <= (eps/k) * r(p) is asserted per point.
inline SnappedInstance snap(const Instance& inst, const LocationGrid& grid) {
  if (inst.capacity < 1) fail(errc::invalid_input, "capacity must be at least 1");
  SnappedInstance out;
  out.grid = grid;
  out.points.origin = inst.origin;
  out.points.capacity = inst.capacity;
  out.source_n = inst.n();
  const int last = grid.circle_count - 1;
  const double log_growth = std::log(grid.growth);
  for (int i = 0; i < inst.n(); ++i) {
    const Point p = inst.points[i];
    const double r = inst.radius(i);
    if (r < grid.inner_radius * (1.0 - 1e-9))
      fail(errc::invalid_input, "point " + std::to_string(i) +
                                    " lies inside the innermost circle; run strip_close_points first");
    if (r > grid.radius(last) * (1.0 + 1e-9))
      fail(errc::invalid_input, "point " + std::to_string(i) + " lies beyond the outermost circle");

    // bracketing circles, with an exact-comparison fixup for log rounding
    int c0 = std::clamp(int(std::floor(std::log(r / grid.inner_radius) / log_growth)), 0, last);
    while (c0 > 0 && grid.radius(c0) > r) --c0;
    while (c0 < last - 1 && grid.radius(c0 + 1) < r) ++c0;
    const int c1 = std::min(c0 + 1, last);

    // bracketing rays
    const double angle = polar_angle(p - inst.origin);
    const int r0 = int(std::floor(angle / two_pi * grid.ray_count)) % grid.ray_count;
    const int r1 = (r0 + 1) % grid.ray_count;

    Location best_loc;
    Point best_point;
    double best_sq = -1.0;
    for (const int c : {c0, c1})
      for (const int ray : {r0, r1}) {
        const Location loc{c, ray};
        const Point q = grid.location_point(inst.origin, loc);
        const double d = sq_dist(p, q);
        if (best_sq < 0.0 || d < best_sq ||
            (d == best_sq && loc < best_loc)) {
          best_sq = d;
          best_loc = loc;
          best_point = q;
        }
      }

    const double limit = grid.epsilon / grid.capacity * r;
    if (std::sqrt(best_sq) > limit * (1.0 + 1e-9) + 1e-12)
      fail(errc::internal, "snap displacement exceeded (eps/k) * r at point " + std::to_string(i));

    out.points.points.push_back(best_point);
    out.location_of.push_back(best_loc);
    out.to_source.push_back(i);
    out.source_coords.push_back(p);
  }
  return out;
}

/// strip_close_points + build_grid + snap, with source references composed
/// through the strip. An instance whose points all sit at the depot (or an
/// empty one) yields an empty snapped universe with only stripped tours.
inline SnappedInstance discretize(const Instance& inst, double eps) {
  StripResult strip = strip_close_points(inst, eps);
  SnappedInstance out;
  if (strip.kept.n() == 0) {
    out.points.origin = inst.origin;
    out.points.capacity = inst.capacity;
  } else {
    const LocationGrid grid = build_grid(strip.span, inst.n(), inst.capacity, eps);
    out = snap(strip.kept, grid);
    for (int& s : out.to_source) s = strip.kept_to_source[s];
  }
  out.stripped = std::move(strip.stripped);
  out.stripped_cost = strip.stripped_cost;
  out.source_n = inst.n();
  if (out.n() + int(out.stripped.size()) != out.source_n)
    fail(errc::internal, "discretisation lost track of a point");
  return out;
}

/// Re-indexes a solution over a snapped universe back to source indices and
/// re-prices it on the source coordinates. Partial covers are allowed (the
/// pipeline merges fragments); a local index used twice is structural
/// corruption. The price difference is bounded by twice the displacement sum
/// and asserted.
inline Solution lift_solution(const SnappedInstance& sn, const Solution& sol) {
  std::vector<char> used(sn.n(), 0);
  Instance source_view;
  source_view.origin = sn.points.origin;
  source_view.capacity = sn.points.capacity;
  source_view.points = sn.source_coords;

  Solution out;
  StableSum cost;
  StableSum slack;
  for (const Tour& tour : sol.tours) {
    Tour lifted;
    for (int idx : tour.indices) {
      if (idx < 0 || idx >= sn.n())
        fail(errc::structural, "lift: tour references local point " + std::to_string(idx) +
                                   " outside the snapped universe");
      if (used[idx]) fail(errc::structural, "lift: local point " + std::to_string(idx) + " used twice");
      used[idx] = 1;
      slack.add(2.0 * sn.displacement(idx));
      lifted.indices.push_back(idx);
    }
    cost.add(tour_cost(source_view, lifted));
    for (int& idx : lifted.indices) idx = sn.to_source[idx];
    out.tours.push_back(std::move(lifted));
  }
  out.cost = cost.value();
  if (std::abs(out.cost - sol.cost) > slack.value() + cost_slack)
    fail(errc::internal, "lifted cost drifted beyond the displacement budget");
  return out;
}

namespace detail {

/// Sub-universe containing exactly the given local points (in the given
/// order). Strip bookkeeping stays with the root universe.
inline SnappedInstance restrict_to(const SnappedInstance& sn, const std::vector<int>& ids) {
  SnappedInstance out;
  out.grid = sn.grid;
  out.points.origin = sn.points.origin;
  out.points.capacity = sn.points.capacity;
  out.source_n = sn.source_n;
  out.points.points.reserve(ids.size());
  for (int id : ids) {
    out.points.points.push_back(sn.points.points[id]);
    out.location_of.push_back(sn.location_of[id]);
    out.to_source.push_back(sn.to_source[id]);
    out.source_coords.push_back(sn.source_coords[id]);
  }
  return out;
}

}  // namespace detail

///// Capping result: the reduced universe plus the mandatory tours that cover
/// the removed points. Trivial tours use local indices of the input universe.
struct CapResult {
  SnappedInstance reduced;
  std::vector<Tour> trivial_tours;
  std::vector<Location> trivial_locations;  ///< one entry per trivial tour
  long long cap = 0;                        ///< T * k
};

/// Caps every location's multiplicity at T*k by emitting full trivial
/// k-tours (cost 2*radius each on the snapped coordinates). Points with the
/// largest snap displacement leave first, keeping the most representative
/// points in the reduced universe; that choice is deterministic but
/// otherwise arbitrary.
inline CapResult cap_locations(const SnappedInstance& sn, long long T, int k) {
  if (T < 1) fail(errc::invalid_input, "location budget must be at least 1");
  if (k != sn.points.capacity)
    fail(errc::invalid_input, "cap capacity " + std::to_string(k) +
                                  " disagrees with the instance capacity " +
                                  std::to_string(sn.points.capacity));
  CapResult res;
  res.cap = T * (long long)k;

  std::map<Location, std::vector<int>> buckets;
  for (int i = 0; i < sn.n(); ++i) buckets[sn.location_of[i]].push_back(i);

  std::vector<char> keep(sn.n(), 1);
  for (auto& [loc, ids] : buckets) {
    const long long c = (long long)ids.size();
    if (c <= res.cap) continue;
    const long long m = (c - res.cap + k - 1) / k;
    std::sort(ids.begin(), ids.end(), [&](int a, int b) {
      const double da = sn.displacement(a), db = sn.displacement(b);
      return da > db || (da == db && a < b);
    });
    for (long long t = 0; t < m; ++t) {
      Tour tour;
      tour.indices.assign(ids.begin() + t * k, ids.begin() + (t + 1) * k);
      std::sort(tour.indices.begin(), tour.indices.end());
      for (int idx : tour.indices) keep[idx] = 0;
      res.trivial_tours.push_back(std::move(tour));
      res.trivial_locations.push_back(loc);
    }
    if (c - m * k > res.cap) fail(errc::internal, "cap arithmetic left a location overfull");
  }

  std::vector<int> kept_ids;
  for (int i = 0; i < sn.n(); ++i)
    if (keep[i]) kept_ids.push_back(i);
  res.reduced = detail::restrict_to(sn, kept_ids);
  res.reduced.stripped = sn.stripped;
  res.reduced.stripped_cost = sn.stripped_cost;
  return res;
}

/// Lemma-1 canonicalisation: as long as some simple cycle of nontrivial
/// tours alternating through shared locations exists, shift min_i v(t_i, l_i)
/// points one step along the cycle. The tour realising the minimum loses its
/// location entirely, so the total visited-location count over nontrivial
/// tours strictly drops, which bounds the iteration count. Cardinalities are
/// preserved and cost never increases (points only move between tours that
/// already visit the location they land on).
inline Solution eliminate_location_cycles(const SnappedInstance& sn, const Solution& sol) {
  const ValidationReport report = validate(sn.points, sol);
  if (!report.ok())
    fail(errc::validation, "cycle elimination needs a feasible solution: " + report.to_string());

  std::vector<Tour> tours = sol.tours;
  const auto distinct_locations = [&](const Tour& t) {
    std::vector<Location> locs;
    for (int idx : t.indices) locs.push_back(sn.location_of[idx]);
    std::sort(locs.begin(), locs.end());
    locs.erase(std::unique(locs.begin(), locs.end()), locs.end());
    return locs;
  };

  long long potential = -1;
  for (;;) {
    // nontrivial tours (>= 2 distinct locations) and their location lists
    std::vector<int> nontrivial;
    std::vector<std::vector<Location>> tour_locs;
    std::map<Location, int> loc_id;
    for (int t = 0; t < int(tours.size()); ++t) {
      std::vector<Location> locs = distinct_locations(tours[t]);
      if (locs.size() < 2) continue;
      nontrivial.push_back(t);
      for (const Location& l : locs) loc_id.emplace(l, 0);
      tour_locs.push_back(std::move(locs));
    }
    long long new_potential = 0;
    for (const auto& locs : tour_locs) new_potential += (long long)locs.size();
    if (potential >= 0 && new_potential >= potential)
      fail(errc::internal, "cycle elimination failed to make progress");
    potential = new_potential;

    // bipartite incidence graph: tour vertices then location vertices
    const int nt = int(nontrivial.size());
    int next_id = nt;
    for (auto& [loc, id] : loc_id) id = next_id++;
    std::vector<std::vector<int>> adj(next_id);
    for (int i = 0; i < nt; ++i)
      for (const Location& l : tour_locs[i]) {
        const int v = loc_id[l];
        adj[i].push_back(v);
        adj[v].push_back(i);
      }

    // find a simple cycle with iterative DFS (undirected: any non-tree edge
    // to a non-parent vertex closes one against the ancestor chain)
    std::vector<int> parent(next_id, -2);
    std::vector<int> cycle;
    for (int start = 0; start < next_id && cycle.empty(); ++start) {
      if (parent[start] != -2) continue;
      parent[start] = -1;
      std::vector<std::pair<int, std::size_t>> stack{{start, 0}};
      while (!stack.empty() && cycle.empty()) {
        auto& [u, edge] = stack.back();
        if (edge >= adj[u].size()) {
          stack.pop_back();
          continue;
        }
        const int v = adj[u][edge++];
        if (v == parent[u]) continue;
        if (parent[v] == -2) {
          parent[v] = u;
          stack.emplace_back(v, 0);
        } else {
          // v is an ancestor of u on the current stack; walk u -> v
          for (int w = u; w != v; w = parent[w]) cycle.push_back(w);
          cycle.push_back(v);
        }
      }
    }
    if (cycle.empty()) break;

    // rotate so the cycle starts at a tour vertex: t_0, l_0, t_1, l_1, ...
    if (cycle.front() >= nt) std::rotate(cycle.begin(), cycle.begin() + 1, cycle.end());
    const int m = int(cycle.size()) / 2;
    std::vector<int> cyc_tour(m);
    std::vector<Location> cyc_loc(m);
    std::vector<Location> id_loc(next_id);
    for (const auto& [loc, id] : loc_id) id_loc[id] = loc;
    for (int i = 0; i < m; ++i) {
      cyc_tour[i] = nontrivial[cycle[2 * i]];
      cyc_loc[i] = id_loc[cycle[2 * i + 1]];
    }

    // v(t_i, l_i) and the cycle-wide minimum
    const auto count_at = [&](const Tour& t, const Location& l) {
      int c = 0;
      for (int idx : t.indices)
        if (sn.location_of[idx] == l) ++c;
      return c;
    };
    int shift = count_at(tours[cyc_tour[0]], cyc_loc[0]);
    for (int i = 1; i < m; ++i) shift = std::min(shift, count_at(tours[cyc_tour[i]], cyc_loc[i]));

    // remove `shift` points at l_i from t_i, then hand them to t_{i+1},
    // splicing them in next to a point t_{i+1} already has at l_i
    std::vector<std::vector<int>> moved(m);
    for (int i = 0; i < m; ++i) {
      std::vector<int>& seq = tours[cyc_tour[i]].indices;
      std::vector<int> rest;
      for (int idx : seq) {
        if (int(moved[i].size()) < shift && sn.location_of[idx] == cyc_loc[i])
          moved[i].push_back(idx);
        else
          rest.push_back(idx);
      }
      seq = std::move(rest);
    }
    for (int i = 0; i < m; ++i) {
      std::vector<int>& seq = tours[cyc_tour[(i + 1) % m]].indices;
      const auto anchor = std::find_if(seq.begin(), seq.end(), [&](int idx) {
        return sn.location_of[idx] == cyc_loc[i];
      });
      if (anchor == seq.end()) fail(errc::internal, "cycle shift lost its anchor location");
      seq.insert(anchor + 1, moved[i].begin(), moved[i].end());
    }
  }

  Solution out = make_solution(sn.points, std::move(tours));
  if (out.cost > sol.cost + cost_slack) fail(errc::internal, "cycle elimination increased the cost");
  return out;
}

}  // namespace ktc
