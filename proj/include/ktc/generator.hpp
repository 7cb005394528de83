#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "ktc/errors.hpp"
#include "ktc/geometry.hpp"
#include "ktc/model.hpp"
#include "ktc/rng.hpp"

namespace ktc {

enum class Dist { uniform_disk, clustered, annulus };

inline const char* dist_name(Dist d) {
  switch (d) {
    case Dist::uniform_disk: return "uniform-disk";
    case Dist::clustered: return "clustered";
    case Dist::annulus: return "annulus";
  }
  return "?";
}

inline Dist parse_dist(const std::string& name) {
  if (name == "uniform-disk") return Dist::uniform_disk;
  if (name == "clustered") return Dist::clustered;
  if (name == "annulus") return Dist::annulus;
  fail(errc::invalid_input,
       "unknown distribution '" + name + "' (expected uniform-disk, clustered, or annulus)");
}

/// Deterministic synthetic instances around a depot at the origin.
///   uniform-disk: area-uniform in the unit disk (every point within radius 1)
///   clustered:    Gaussian blobs around a few centers inside the disk
///   annulus:      area-uniform between radii 0.5 and 1
inline Instance generate_instance(int n, int k, std::uint64_t seed, Dist dist) {
  if (n < 0) fail(errc::invalid_input, "point count must be non-negative");
  if (k < 1) fail(errc::invalid_input, "capacity must be at least 1");
  Instance inst;
  inst.capacity = k;
  inst.points.reserve(n);
  Rng rng(seed);

  switch (dist) {
    case Dist::uniform_disk:
      for (int i = 0; i < n; ++i) {
        const double r = std::sqrt(rng.next_double());
        const double a = rng.uniform(0.0, two_pi);
        inst.points.push_back({r * std::cos(a), r * std::sin(a)});
      }
      break;
    case Dist::clustered: {
      const int centers = std::max(1, n / 16 + 1);
      std::vector<Point> hubs;
      for (int c = 0; c < centers; ++c) {
        const double r = 0.75 * std::sqrt(rng.next_double());
        const double a = rng.uniform(0.0, two_pi);
        hubs.push_back({r * std::cos(a), r * std::sin(a)});
      }
      for (int i = 0; i < n; ++i) {
        const Point& hub = hubs[rng.uniform_int(0, centers - 1)];
        const auto [gx, gy] = rng.gaussian_pair();
        inst.points.push_back({hub.x + 0.06 * gx, hub.y + 0.06 * gy});
      }
      break;
    }
    case Dist::annulus:
      for (int i = 0; i < n; ++i) {
        const double r = std::sqrt(rng.uniform(0.25, 1.0));
        const double a = rng.uniform(0.0, two_pi);
        inst.points.push_back({r * std::cos(a), r * std::sin(a)});
      }
      break;
  }
  return inst;
}

}  // namespace ktc
