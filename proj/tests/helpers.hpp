#pragma once

// Shared test utilities: deterministic instance generation and small
// brute-force oracles that are independent of the library's solvers.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "ktc/model.hpp"
#include "ktc/rng.hpp"

namespace testutil {

inline ktc::Instance random_instance(int n, int k, ktc::Rng& rng, double lo = 0.0,
                                     double hi = 1.0) {
  ktc::Instance inst;
  inst.capacity = k;
  for (int i = 0; i < n; ++i) {
    const double r = rng.uniform(lo, hi);
    const double a = rng.uniform(0.0, ktc::two_pi);
    inst.points.push_back({r * std::cos(a), r * std::sin(a)});
  }
  return inst;
}

/// Exhaustive shortest closed depot tour through all points (n <= 9).
inline double brute_tsp_length(const ktc::Instance& inst) {
  std::vector<int> order(inst.n());
  for (int i = 0; i < inst.n(); ++i) order[i] = i;
  double best = order.empty() ? 0.0 : std::numeric_limits<double>::infinity();
  do {
    double len = 0.0;
    if (!order.empty()) {
      len += inst.radius(order.front());
      for (std::size_t i = 0; i + 1 < order.size(); ++i)
        len += ktc::dist(inst.points[order[i]], inst.points[order[i + 1]]);
      len += inst.radius(order.back());
    }
    best = std::min(best, len);
  } while (std::next_permutation(order.begin(), order.end()));
  return order.empty() ? 0.0 : best;
}

namespace detail {

inline double brute_group_cost(const ktc::Instance& inst, std::vector<int> group) {
  std::sort(group.begin(), group.end());
  double best = std::numeric_limits<double>::infinity();
  do {
    double len = inst.radius(group.front());
    for (std::size_t i = 0; i + 1 < group.size(); ++i)
      len += ktc::dist(inst.points[group[i]], inst.points[group[i + 1]]);
    len += inst.radius(group.back());
    best = std::min(best, len);
  } while (std::next_permutation(group.begin(), group.end()));
  return best;
}

inline void brute_partitions(const ktc::Instance& inst, std::vector<int>& left,
                             double acc, double& best) {
  if (left.empty()) {
    best = std::min(best, acc);
    return;
  }
  if (acc >= best) return;
  const int anchor = left.back();
  std::vector<int> rest(left.begin(), left.end() - 1);
  const int m = int(rest.size());
  const int take_max = std::min(inst.capacity - 1, m);
  // choose the companions of `anchor` among `rest`
  std::vector<int> pick;
  const auto recurse = [&](auto&& self, int from, int remaining) -> void {
    if (remaining > 0 && from == m) return;  // not enough companions left
    if (remaining == 0) {
      std::vector<int> group = pick;
      group.push_back(anchor);
      std::vector<int> next;
      std::vector<char> used(m, 0);
      for (int idx : pick)
        for (int j = 0; j < m; ++j)
          if (rest[j] == idx) used[j] = 1;
      for (int j = 0; j < m; ++j)
        if (!used[j]) next.push_back(rest[j]);
      brute_partitions(inst, next, acc + brute_group_cost(inst, group), best);
      return;
    }
    self(self, from + 1, remaining);  // skip rest[from]
    pick.push_back(rest[from]);
    self(self, from + 1, remaining - 1);
    pick.pop_back();
  };
  for (int take = 0; take <= take_max; ++take) recurse(recurse, 0, take);
}

}  // namespace detail

/// Independent exhaustive k-tour cover optimum (exponential; n <= 7).
inline double brute_ktc_cost(const ktc::Instance& inst) {
  if (inst.n() == 0) return 0.0;
  std::vector<int> all(inst.n());
  for (int i = 0; i < inst.n(); ++i) all[i] = i;
  double best = std::numeric_limits<double>::infinity();
  detail::brute_partitions(inst, all, 0.0, best);
  return best;
}

}  // namespace testutil
