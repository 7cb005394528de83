#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "ktc/errors.hpp"
#include "ktc/model.hpp"
#include "ktc/mst.hpp"

namespace ktc {

/// A closed tour through the depot visiting every point exactly once.
struct TspTour {
  std::vector<int> order;  ///< permutation of [0, n)
  double length = 0.0;
};

/// Length of depot -> order... -> depot.
inline double closed_tour_length(const Instance& inst, const std::vector<int>& order) {
  if (order.empty()) return 0.0;
  StableSum sum;
  sum.add(inst.radius(order.front()));
  for (std::size_t i = 0; i + 1 < order.size(); ++i)
    sum.add(dist(inst.points[order[i]], inst.points[order[i + 1]]));
  sum.add(inst.radius(order.back()));
  return sum.value();
}

namespace detail {

/// Preorder walk of a spanning tree over {depot} + points, children visited
/// in angular order around their parent. Node 0 is the depot; the returned
/// order contains point ids (node id minus one).
inline std::vector<int> preorder_from_depot(const std::vector<Point>& nodes,
                                            const std::vector<MstEdge>& edges) {
  std::vector<std::vector<int>> adj(nodes.size());
  for (const MstEdge& e : edges) {
    adj[e.a].push_back(e.b);
    adj[e.b].push_back(e.a);
  }
  std::vector<int> order;
  order.reserve(nodes.size() - 1);
  std::vector<char> visited(nodes.size(), 0);
  std::vector<int> stack{0};
  visited[0] = 1;
  std::vector<std::pair<double, int>> kids;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    if (u > 0) order.push_back(u - 1);
    kids.clear();
    for (int v : adj[u])
      if (!visited[v]) kids.emplace_back(polar_angle(nodes[v] - nodes[u]), v);
    std::sort(kids.begin(), kids.end());
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) {
      visited[it->second] = 1;
      stack.push_back(it->second);
    }
  }
  return order;
}

}  // namespace detail

/// 2-approximate travelling-salesman tour: preorder of the Euclidean minimum
/// spanning tree over the points plus the depot, closed through the depot.
inline TspTour mst_tsp_tour(const Instance& inst) {
  TspTour tour;
  if (inst.n() == 0) return tour;
  std::vector<Point> nodes;
  nodes.reserve(inst.n() + 1);
  nodes.push_back(inst.origin);
  nodes.insert(nodes.end(), inst.points.begin(), inst.points.end());
  const std::vector<MstEdge> edges = euclidean_mst(nodes);
  tour.order = detail::preorder_from_depot(nodes, edges);
  tour.length = closed_tour_length(inst, tour.order);
  return tour;
}

/// Iterated tour partitioning: split a salesman tour into consecutive groups
/// of k and close each group through the depot, choosing the best of the k
/// possible split offsets.
///
/// Cutting the tour edge between positions j and j+1 replaces that edge with
/// two depot legs, adding delta_j = r(p_j) + r(p_{j+1}) - |p_j p_{j+1}|,
/// nonnegative by the triangle inequality. Offset o cuts exactly the edges
/// with j+1 = o (mod k), so each offset costs the closed tour length plus one
/// of k disjoint delta sums. Averaging those sums over the offsets yields the
/// guarantee best <= (1 - 1/k) * tour + radial_cost, asserted on return.
inline Solution itp(const Instance& inst, const TspTour& tsp) {
  const int n = inst.n();
  const int k = inst.capacity;
  if (k < 1) fail(errc::invalid_input, "capacity must be at least 1");
  if (int(tsp.order.size()) != n)
    fail(errc::invalid_input, "tour visits " + std::to_string(tsp.order.size()) +
                                  " points, instance has " + std::to_string(n));
  std::vector<char> seen(n, 0);
  for (int idx : tsp.order) {
    if (idx < 0 || idx >= n || seen[idx])
      fail(errc::invalid_input, "tour is not a permutation of the points");
    seen[idx] = 1;
  }
  if (n == 0) return {};

  const std::vector<int>& ord = tsp.order;
  std::vector<double> r(n, 0.0);
  for (int i = 0; i < n; ++i) r[i] = inst.radius(ord[i]);

  StableSum base_sum;
  base_sum.add(r.front());
  for (int j = 0; j + 1 < n; ++j) base_sum.add(dist(inst.points[ord[j]], inst.points[ord[j + 1]]));
  base_sum.add(r.back());
  const double base = base_sum.value();

  // offsets >= n never cut an edge and tie with offset 0, so g classes suffice
  const int g = std::min(k, n);
  std::vector<StableSum> extra(g);
  for (int j = 0; j + 1 < n; ++j) {
    const double edge = dist(inst.points[ord[j]], inst.points[ord[j + 1]]);
    extra[(j + 1) % k].add(r[j] + r[j + 1] - edge);
  }
  int best_offset = 0;
  double best_extra = extra[0].value();
  for (int o = 1; o < g; ++o) {
    const double v = extra[o].value();
    if (v < best_extra) {
      best_extra = v;
      best_offset = o;
    }
  }

  std::vector<Tour> tours;
  for (int begin = 0; begin < n;) {
    const int end = begin == 0 && best_offset > 0 ? best_offset : std::min(begin + k, n);
    Tour t;
    t.indices.assign(ord.begin() + begin, ord.begin() + end);
    tours.push_back(std::move(t));
    begin = end;
  }
  Solution sol = make_solution(inst, std::move(tours));

  const double guarantee = (1.0 - 1.0 / double(k)) * base + radial_cost(inst);
  if (sol.cost > guarantee + cost_slack + 1e-12 * std::abs(guarantee))
    fail(errc::internal, "tour partition exceeded its cost guarantee");
  return sol;
}

/// MST tour + iterated tour partitioning; the (3 - 2/k)-approximate cover.
inline Solution cover_heuristic(const Instance& inst) {
  if (inst.capacity < 1) fail(errc::invalid_input, "capacity must be at least 1");
  if (inst.n() == 0) return {};
  return itp(inst, mst_tsp_tour(inst));
}

/// Certified bracket around the optimum.
struct Bounds {
  double radial = 0.0;      ///< radial lower bound
  double mst = 0.0;         ///< spanning-tree weight over points + depot (also a lower bound)
  double lower = 0.0;       ///< max of the two lower bounds
  double tsp_length = 0.0;  ///< preorder tour length (at most twice mst)
  double upper = 0.0;       ///< cover heuristic cost
};

inline Bounds compute_bounds(const Instance& inst) {
  Bounds b;
  b.radial = radial_cost(inst);
  if (inst.n() == 0) return b;
  std::vector<Point> nodes;
  nodes.reserve(inst.n() + 1);
  nodes.push_back(inst.origin);
  nodes.insert(nodes.end(), inst.points.begin(), inst.points.end());
  const std::vector<MstEdge> edges = euclidean_mst(nodes);
  b.mst = mst_weight(nodes, edges);
  TspTour tour;
  tour.order = detail::preorder_from_depot(nodes, edges);
  tour.length = closed_tour_length(inst, tour.order);
  b.tsp_length = tour.length;
  b.upper = itp(inst, tour).cost;
  b.lower = std::max(b.radial, b.mst);
  if (b.tsp_length > 2.0 * b.mst + cost_slack + 1e-12 * b.mst)
    fail(errc::internal, "preorder tour exceeded twice the tree weight");
  if (b.lower > b.upper + cost_slack)
    fail(errc::internal, "lower bound exceeded heuristic cost");
  return b;
}

}  // namespace ktc
