#pragma once

#include <algorithm>
#include <limits>
#include <numeric>
#include <vector>

#include "ktc/errors.hpp"
#include "ktc/geometry.hpp"

namespace ktc {

struct MstEdge {
  int a = 0;  ///< smaller endpoint id
  int b = 0;  ///< larger endpoint id
};

namespace detail {

/// Union-find whose representative is always the smallest id in the
/// component. That keeps component labels deterministic across rounds.
struct Dsu {
  std::vector<int> parent;

  explicit Dsu(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }

  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }

  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (a > b) std::swap(a, b);
    parent[b] = a;
    return true;
  }
};

/// kd-tree specialised for Boruvka rounds: every query asks for the nearest
/// point OUTSIDE the query point's current component. Subtrees that lie
/// entirely inside one component are labelled per round and skipped whole.
///
/// Queries break distance ties by point id, so each query point returns the
/// candidate minimising (squared distance, id). Together with the per-root
/// reduction in boruvka_mst this selects, for every component, its minimum
/// outgoing edge under the total order (squared length, smaller id, larger
/// id); under a total order the minimum spanning tree is unique, which makes
/// the rounds exact.
class MstKdTree {
 public:
  explicit MstKdTree(const std::vector<Point>& pts)
      : pts_(pts), order_(pts.size()), roots_(pts.size(), 0) {
    std::iota(order_.begin(), order_.end(), 0);
    if (!pts_.empty()) {
      nodes_.reserve(2 * pts_.size() / kLeaf + 4);
      root_ = build(0, int(pts_.size()));
    }
  }

  void refresh(Dsu& dsu) {
    for (std::size_t i = 0; i < pts_.size(); ++i) roots_[i] = dsu.find(int(i));
    // children were appended after their parent, so a reverse sweep sees
    // children first
    for (int v = int(nodes_.size()) - 1; v >= 0; --v) {
      Node& nd = nodes_[v];
      if (nd.leaf()) {
        int c = roots_[order_[nd.begin]];
        for (int i = nd.begin + 1; i < nd.end && c != -1; ++i)
          if (roots_[order_[i]] != c) c = -1;
        nd.comp = c;
      } else {
        const int cl = nodes_[nd.left].comp;
        const int cr = nodes_[nd.right].comp;
        nd.comp = (cl != -1 && cl == cr) ? cl : -1;
      }
    }
  }

  int root_of(int p) const { return roots_[p]; }

  /// Nearest point to pts[q] with a different root; (best_sq, best_id) act
  /// as in-out so callers can seed them with a cached candidate.
  void nearest_foreign(int q, double& best_sq, int& best_id) const {
    if (root_ >= 0) query(root_, q, roots_[q], best_sq, best_id);
  }

 private:
  static constexpr int kLeaf = 12;

  struct Node {
    double xmin = 0, ymin = 0, xmax = 0, ymax = 0;
    int left = -1, right = -1;
    int begin = 0, end = 0;  // leaf range into order_
    int comp = -1;           // uniform component root this round, or -1

    bool leaf() const { return left < 0; }
  };

  int build(int begin, int end) {
    const int v = int(nodes_.size());
    nodes_.emplace_back();
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (int i = begin; i < end; ++i) {
      const Point p = pts_[order_[i]];
      xmin = std::min(xmin, p.x);
      xmax = std::max(xmax, p.x);
      ymin = std::min(ymin, p.y);
      ymax = std::max(ymax, p.y);
    }
    nodes_[v].xmin = xmin;
    nodes_[v].xmax = xmax;
    nodes_[v].ymin = ymin;
    nodes_[v].ymax = ymax;
    nodes_[v].begin = begin;
    nodes_[v].end = end;
    if (end - begin > kLeaf) {
      const bool split_x = (xmax - xmin) >= (ymax - ymin);
      const int mid = (begin + end) / 2;
      auto cmp = [&](int a, int b) {
        const double ca = split_x ? pts_[a].x : pts_[a].y;
        const double cb = split_x ? pts_[b].x : pts_[b].y;
        return ca < cb || (ca == cb && a < b);
      };
      std::nth_element(order_.begin() + begin, order_.begin() + mid,
                       order_.begin() + end, cmp);
      const int l = build(begin, mid);
      const int r = build(mid, end);
      nodes_[v].left = l;
      nodes_[v].right = r;
    }
    return v;
  }

  double box_sq(const Node& nd, Point p) const {
    const double dx = p.x < nd.xmin ? nd.xmin - p.x : (p.x > nd.xmax ? p.x - nd.xmax : 0.0);
    const double dy = p.y < nd.ymin ? nd.ymin - p.y : (p.y > nd.ymax ? p.y - nd.ymax : 0.0);
    return dx * dx + dy * dy;
  }

  void query(int v, int q, int qroot, double& best_sq, int& best_id) const {
    const Node& nd = nodes_[v];
    if (nd.comp == qroot) return;
    // strict inequality: an equal-distance candidate can still win on id
    if (box_sq(nd, pts_[q]) > best_sq) return;
    if (nd.leaf()) {
      for (int i = nd.begin; i < nd.end; ++i) {
        const int id = order_[i];
        if (roots_[id] == qroot) continue;
        const double d = sq_dist(pts_[id], pts_[q]);
        if (d < best_sq || (d == best_sq && id < best_id)) {
          best_sq = d;
          best_id = id;
        }
      }
      return;
    }
    const double dl = box_sq(nodes_[nd.left], pts_[q]);
    const double dr = box_sq(nodes_[nd.right], pts_[q]);
    if (dl <= dr) {
      query(nd.left, q, qroot, best_sq, best_id);
      query(nd.right, q, qroot, best_sq, best_id);
    } else {
      query(nd.right, q, qroot, best_sq, best_id);
      query(nd.left, q, qroot, best_sq, best_id);
    }
  }

  const std::vector<Point>& pts_;
  std::vector<int> order_;
  std::vector<int> roots_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

inline std::vector<MstEdge> prim_mst(const std::vector<Point>& pts) {
  const int n = int(pts.size());
  std::vector<MstEdge> edges;
  if (n <= 1) return edges;
  edges.reserve(n - 1);
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> best(n, inf);
  std::vector<int> from(n, -1);
  std::vector<char> done(n, 0);
  best[0] = 0.0;
  for (int round = 0; round < n; ++round) {
    int u = -1;
    for (int i = 0; i < n; ++i)
      if (!done[i] && (u < 0 || best[i] < best[u])) u = i;
    done[u] = 1;
    if (from[u] >= 0) edges.push_back({std::min(from[u], u), std::max(from[u], u)});
    for (int i = 0; i < n; ++i) {
      if (done[i]) continue;
      const double d = sq_dist(pts[u], pts[i]);
      if (d < best[i]) {
        best[i] = d;
        from[i] = u;
      }
    }
  }
  return edges;
}

inline std::vector<MstEdge> boruvka_mst(const std::vector<Point>& pts) {
  const int n = int(pts.size());
  std::vector<MstEdge> edges;
  if (n <= 1) return edges;
  edges.reserve(n - 1);
  const double inf = std::numeric_limits<double>::infinity();

  Dsu dsu(n);
  MstKdTree tree(pts);
  std::vector<int> cached(n, -1);  // previous round's foreign neighbour
  std::vector<double> cand_sq(n, 0.0);
  std::vector<int> cand_a(n, 0), cand_b(n, 0);
  std::vector<char> cand_set(n, 0);
  std::vector<int> touched;
  touched.reserve(n);

  int components = n;
  while (components > 1) {
    tree.refresh(dsu);
    touched.clear();
    for (int p = 0; p < n; ++p) {
      const int root = tree.root_of(p);
      double best_sq = inf;
      int best_id = -1;
      if (const int c = cached[p]; c >= 0 && tree.root_of(c) != root) {
        best_sq = sq_dist(pts[p], pts[c]);
        best_id = c;
      }
      tree.nearest_foreign(p, best_sq, best_id);
      if (best_id < 0) fail(errc::internal, "spanning tree query found no candidate");
      cached[p] = best_id;
      const int ea = std::min(p, best_id), eb = std::max(p, best_id);
      const bool fresh = !cand_set[root];
      const bool improves = fresh || best_sq < cand_sq[root] ||
                            (best_sq == cand_sq[root] &&
                             (ea < cand_a[root] || (ea == cand_a[root] && eb < cand_b[root])));
      if (fresh) touched.push_back(root);
      if (improves) {
        cand_set[root] = 1;
        cand_sq[root] = best_sq;
        cand_a[root] = ea;
        cand_b[root] = eb;
      }
    }
    int merged = 0;
    for (int r : touched) {
      cand_set[r] = 0;
      if (dsu.unite(cand_a[r], cand_b[r])) {
        edges.push_back({cand_a[r], cand_b[r]});
        --components;
        ++merged;
      }
    }
    if (merged == 0) fail(errc::internal, "spanning tree round made no progress");
  }
  return edges;
}

}  // namespace detail

/// Exact Euclidean minimum spanning tree. Quadratic Prim for small inputs,
/// kd-tree Boruvka above that. Edges come back normalised (a < b) and sorted.
inline std::vector<MstEdge> euclidean_mst(const std::vector<Point>& pts) {
  std::vector<MstEdge> edges =
      pts.size() <= 2048 ? detail::prim_mst(pts) : detail::boruvka_mst(pts);
  std::sort(edges.begin(), edges.end(),
            [](const MstEdge& x, const MstEdge& y) { return x.a < y.a || (x.a == y.a && x.b < y.b); });
  return edges;
}

inline double mst_weight(const std::vector<Point>& pts, const std::vector<MstEdge>& edges) {
  StableSum sum;
  for (const MstEdge& e : edges) sum.add(dist(pts[e.a], pts[e.b]));
  return sum.value();
}

}  // namespace ktc
