#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <vector>

#include "ktc/errors.hpp"
#include "ktc/heuristics.hpp"
#include "ktc/model.hpp"

namespace ktc {

/// Size ceilings for the exponential-time oracles. Requests beyond a ceiling
/// are refused with a capability error rather than silently approximated.
struct OracleLimits {
  int max_points_dp = 14;    ///< Held-Karp and subset-DP ceiling
  int max_points_naive = 8;  ///< brute-force partition enumeration ceiling
};

namespace detail {

/// Held-Karp path table over every subset: dp[S][j] = shortest path from the
/// depot through exactly the points of S, ending at j (j in S). One table
/// serves both the salesman oracle and every group tour the cover DP needs.
struct PathTable {
  int n = 0;
  std::vector<double> dp;
  std::vector<std::int16_t> parent;

  double at(std::uint32_t mask, int j) const { return dp[std::size_t(mask) * n + j]; }

  /// Cheapest closed tour visiting exactly the points of `mask`.
  double tour_cost(const Instance& inst, std::uint32_t mask) const {
    double best = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j)
      if (mask >> j & 1u) best = std::min(best, at(mask, j) + inst.radius(j));
    return best;
  }

  /// Visit order of an optimal closed tour over `mask`.
  std::vector<int> tour_order(const Instance& inst, std::uint32_t mask) const {
    double best = std::numeric_limits<double>::infinity();
    int last = -1;
    for (int j = 0; j < n; ++j) {
      if (!(mask >> j & 1u)) continue;
      const double v = at(mask, j) + inst.radius(j);
      if (v < best) {
        best = v;
        last = j;
      }
    }
    std::vector<int> order;
    order.reserve(std::popcount(mask));
    std::uint32_t m = mask;
    int j = last;
    while (j >= 0) {
      order.push_back(j);
      const int prev = parent[std::size_t(m) * n + j];
      m ^= 1u << j;
      j = prev;
    }
    std::reverse(order.begin(), order.end());
    return order;
  }
};

inline PathTable build_path_table(const Instance& inst) {
  const int n = inst.n();
  PathTable table;
  table.n = n;
  if (n == 0) return table;
  const std::uint32_t masks = 1u << n;
  const double inf = std::numeric_limits<double>::infinity();
  table.dp.assign(std::size_t(masks) * n, inf);
  table.parent.assign(std::size_t(masks) * n, -1);

  std::vector<double> d(std::size_t(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) d[std::size_t(i) * n + j] = dist(inst.points[i], inst.points[j]);

  for (std::uint32_t mask = 1; mask < masks; ++mask) {
    for (int j = 0; j < n; ++j) {
      if (!(mask >> j & 1u)) continue;
      const std::size_t slot = std::size_t(mask) * n + j;
      const std::uint32_t rest = mask ^ (1u << j);
      if (rest == 0) {
        table.dp[slot] = inst.radius(j);
        continue;
      }
      double best = inf;
      int best_prev = -1;
      for (int i = 0; i < n; ++i) {
        if (!(rest >> i & 1u)) continue;
        const double v = table.at(rest, i) + d[std::size_t(i) * n + j];
        if (v < best) {
          best = v;
          best_prev = i;
        }
      }
      table.dp[slot] = best;
      table.parent[slot] = std::int16_t(best_prev);
    }
  }
  return table;
}

}  // namespace detail

/// Optimal salesman tour through all points and the depot, by dynamic
/// programming over subsets. Exponential: refuses n beyond the configured
/// ceiling.
inline TspTour held_karp_tsp(const Instance& inst, const OracleLimits& limits = {}) {
  const int n = inst.n();
  if (n > limits.max_points_dp)
    fail(errc::capability, "salesman oracle limited to " + std::to_string(limits.max_points_dp) +
                               " points, instance has " + std::to_string(n));
  TspTour tour;
  if (n == 0) return tour;
  const detail::PathTable table = detail::build_path_table(inst);
  const std::uint32_t full = (1u << n) - 1;
  tour.order = table.tour_order(inst, full);
  tour.length = closed_tour_length(inst, tour.order);
  return tour;
}

/// Optimal k-tour cover by dynamic programming: best[S] considers every
/// group G within S of at most k points that contains S's lowest point,
/// paying the optimal closed tour over G (read off the shared path table).
/// Exponential: refuses n beyond the configured ceiling.
inline Solution exact_ktc(const Instance& inst, const OracleLimits& limits = {}) {
  const int n = inst.n();
  const int k = inst.capacity;
  if (k < 1) fail(errc::invalid_input, "capacity must be at least 1");
  if (n > limits.max_points_dp)
    fail(errc::capability, "exact cover limited to " + std::to_string(limits.max_points_dp) +
                               " points, instance has " + std::to_string(n));
  if (n == 0) return {};

  const detail::PathTable table = detail::build_path_table(inst);
  const std::uint32_t masks = 1u << n;
  std::vector<double> group(masks, 0.0);
  for (std::uint32_t mask = 1; mask < masks; ++mask)
    if (std::popcount(mask) <= k) group[mask] = table.tour_cost(inst, mask);

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> best(masks, inf);
  std::vector<std::uint32_t> choice(masks, 0);
  best[0] = 0.0;
  for (std::uint32_t mask = 1; mask < masks; ++mask) {
    const std::uint32_t low = mask & (0u - mask);
    for (std::uint32_t g = mask;; g = (g - 1) & mask) {
      if ((g & low) && std::popcount(g) <= k) {
        const double v = group[g] + best[mask ^ g];
        if (v < best[mask]) {
          best[mask] = v;
          choice[mask] = g;
        }
      }
      if (g == 0) break;
    }
  }

  std::vector<Tour> tours;
  for (std::uint32_t mask = masks - 1; mask != 0;) {
    const std::uint32_t g = choice[mask];
    Tour t;
    t.indices = table.tour_order(inst, g);
    tours.push_back(std::move(t));
    mask ^= g;
  }
  std::sort(tours.begin(), tours.end(), [](const Tour& a, const Tour& b) {
    return *std::min_element(a.indices.begin(), a.indices.end()) <
           *std::min_element(b.indices.begin(), b.indices.end());
  });
  Solution sol = make_solution(inst, std::move(tours));
  if (std::abs(sol.cost - best[masks - 1]) > cost_slack)
    fail(errc::internal, "cover reconstruction does not match its table value");
  return sol;
}

/// Reference cover oracle: enumerate every partition into groups of at most
/// k points and every visit order within each group. Far slower than
/// exact_ktc; exists so the two can cross-check each other on tiny inputs.
inline Solution naive_ktc(const Instance& inst, const OracleLimits& limits = {}) {
  const int n = inst.n();
  const int k = inst.capacity;
  if (k < 1) fail(errc::invalid_input, "capacity must be at least 1");
  if (n > limits.max_points_naive)
    fail(errc::capability, "naive cover limited to " + std::to_string(limits.max_points_naive) +
                               " points, instance has " + std::to_string(n));
  if (n == 0) return {};

  const std::uint32_t masks = 1u << n;
  const double inf = std::numeric_limits<double>::infinity();

  // best closed tour over one group, by brute permutation
  std::vector<double> block(masks, -1.0);
  std::vector<std::vector<int>> block_order(masks);
  auto block_cost = [&](std::uint32_t mask) {
    double& memo = block[mask];
    if (memo >= 0.0) return memo;
    std::vector<int> ids;
    for (int i = 0; i < n; ++i)
      if (mask >> i & 1u) ids.push_back(i);
    double bestv = inf;
    std::vector<int> perm = ids;
    do {
      const double len = closed_tour_length(inst, perm);
      if (len < bestv) {
        bestv = len;
        block_order[mask] = perm;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    memo = bestv;
    return memo;
  };

  double best = inf;
  std::vector<std::uint32_t> chosen, stack;
  auto rec = [&](auto&& self, std::uint32_t remaining, double acc) -> void {
    if (acc >= best) return;
    if (remaining == 0) {
      best = acc;
      chosen = stack;
      return;
    }
    const std::uint32_t low = remaining & (0u - remaining);
    const std::uint32_t rest = remaining ^ low;
    for (std::uint32_t s = rest;; s = (s - 1) & rest) {
      if (std::popcount(s) <= k - 1) {
        const std::uint32_t g = low | s;
        stack.push_back(g);
        self(self, remaining ^ g, acc + block_cost(g));
        stack.pop_back();
      }
      if (s == 0) break;
    }
  };
  rec(rec, masks - 1, 0.0);

  std::vector<Tour> tours;
  for (std::uint32_t g : chosen) {
    block_cost(g);  // ensure the order is materialised
    Tour t;
    t.indices = block_order[g];
    tours.push_back(std::move(t));
  }
  return make_solution(inst, std::move(tours));
}

}  // namespace ktc
