#pragma once

#include <cmath>
#include <numbers>

namespace ktc {

constexpr double two_pi = 2.0 * std::numbers::pi;

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }

inline double sq_dist(Point a, Point b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

inline double dist(Point a, Point b) { return std::sqrt(sq_dist(a, b)); }

/// Angle of `p` around the origin, normalised to [0, two_pi).
inline double polar_angle(Point p) {
  double a = std::atan2(p.y, p.x);
  if (a < 0.0) a += two_pi;
  if (a >= two_pi) a = 0.0;  // guard against rounding of tiny negative angles
  return a;
}

/// Compensated accumulator (Neumaier variant of Kahan summation).
///
/// Tour costs are sums of up to ~1e5 square roots; plain accumulation loses
/// enough precision that tight tolerance checks become flaky. This keeps the
/// error at a few ulps independent of the number of terms, and is fully
/// deterministic for a fixed addition order.
class StableSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }

  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace ktc
