#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "ktc/discretize.hpp"
#include "ktc/errors.hpp"
#include "ktc/model.hpp"
#include "ktc/pipeline.hpp"
#include "ktc/rings.hpp"

namespace ktc {

namespace detail {

inline std::string svg_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

}  // namespace detail

/// Renders the instance (and optionally a solution) as a standalone SVG.
///
/// With show_grid the drawing contains exactly one <circle> per grid circle
/// and one <line> per ray; marked rings appear as grey bands underneath
/// (<ellipse> elements, so the circle/line/path counts stay meaningful).
/// Tours render as one <path> each; points and the depot as <rect> markers.
/// Ray index labels appear only when the grid has at most 64 rays.
inline std::string render_svg(const Instance& inst, const Solution* solution, bool show_grid,
                              double eps) {
  double span = 0.0;
  for (int i = 0; i < inst.n(); ++i) span = std::max(span, inst.radius(i));

  const bool draw_grid = show_grid && span > 0.0;
  LocationGrid grid;
  std::vector<int> marked;
  RingLayout rings;
  if (draw_grid) {
    check_epsilon(eps);
    grid = build_grid(span, inst.n(), inst.capacity, eps);
    rings = build_rings(grid, eps);
    ReductionResult red = reduce(inst, eps);
    if (red.snapped.n() > 0) marked = red.marking.marked_rings();
  }

  // world box: depot, points, and (with the grid) the outermost circle
  double lo_x = inst.origin.x, hi_x = inst.origin.x;
  double lo_y = inst.origin.y, hi_y = inst.origin.y;
  for (const Point& p : inst.points) {
    lo_x = std::min(lo_x, p.x);
    hi_x = std::max(hi_x, p.x);
    lo_y = std::min(lo_y, p.y);
    hi_y = std::max(hi_y, p.y);
  }
  if (draw_grid) {
    const double r = grid.radius(grid.circle_count - 1);
    lo_x = std::min(lo_x, inst.origin.x - r);
    hi_x = std::max(hi_x, inst.origin.x + r);
    lo_y = std::min(lo_y, inst.origin.y - r);
    hi_y = std::max(hi_y, inst.origin.y + r);
  }
  const double extent = std::max({hi_x - lo_x, hi_y - lo_y, 1e-9});
  const double view = 800.0, pad = 40.0;
  const double scale = (view - 2 * pad) / extent;
  // y grows upward in the plane, downward in SVG
  auto sx = [&](double x) { return pad + (x - lo_x) * scale; };
  auto sy = [&](double y) { return pad + (hi_y - y) * scale; };

  const double width = 2 * pad + (hi_x - lo_x) * scale;
  const double height = 2 * pad + (hi_y - lo_y) * scale;
  const double cx = sx(inst.origin.x), cy = sy(inst.origin.y);

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + detail::svg_num(width) +
         "\" height=\"" + detail::svg_num(height) + "\" viewBox=\"0 0 " + detail::svg_num(width) +
         " " + detail::svg_num(height) + "\">\n";

  if (draw_grid) {
    for (int j : marked) {
      const double inner = grid.radius(rings.first_circle(j));
      const double outer = grid.radius(rings.last_circle(j));
      if (outer <= inner) continue;
      const double mid = (inner + outer) / 2 * scale;
      out += "  <ellipse cx=\"" + detail::svg_num(cx) + "\" cy=\"" + detail::svg_num(cy) +
             "\" rx=\"" + detail::svg_num(mid) + "\" ry=\"" + detail::svg_num(mid) +
             "\" fill=\"none\" stroke=\"#d8d8d8\" stroke-width=\"" +
             detail::svg_num((outer - inner) * scale) + "\"/>\n";
    }
    for (int i = 0; i < grid.circle_count; ++i)
      out += "  <circle cx=\"" + detail::svg_num(cx) + "\" cy=\"" + detail::svg_num(cy) +
             "\" r=\"" + detail::svg_num(grid.radius(i) * scale) +
             "\" fill=\"none\" stroke=\"#9db4c8\" stroke-width=\"0.6\"/>\n";
    const double outer = grid.radius(grid.circle_count - 1);
    for (int i = 0; i < grid.ray_count; ++i) {
      const double a = grid.ray_angle(i);
      const double ex = inst.origin.x + outer * std::cos(a);
      const double ey = inst.origin.y + outer * std::sin(a);
      out += "  <line x1=\"" + detail::svg_num(cx) + "\" y1=\"" + detail::svg_num(cy) +
             "\" x2=\"" + detail::svg_num(sx(ex)) + "\" y2=\"" + detail::svg_num(sy(ey)) +
             "\" stroke=\"#c8d4dc\" stroke-width=\"0.4\"/>\n";
    }
    if (grid.ray_count <= 64) {
      for (int i = 0; i < grid.ray_count; ++i) {
        const double a = grid.ray_angle(i);
        const double tx = inst.origin.x + outer * 1.03 * std::cos(a);
        const double ty = inst.origin.y + outer * 1.03 * std::sin(a);
        out += "  <text x=\"" + detail::svg_num(sx(tx)) + "\" y=\"" + detail::svg_num(sy(ty)) +
               "\" font-size=\"9\" fill=\"#667788\" text-anchor=\"middle\">" +
               std::to_string(i) + "</text>\n";
      }
    }
  }

  if (solution) {
    static const char* const palette[] = {"#c0392b", "#2980b9", "#27ae60", "#8e44ad",
                                          "#d35400", "#16a085", "#7f8c8d", "#2c3e50"};
    constexpr int palette_size = int(sizeof(palette) / sizeof(palette[0]));
    int color = 0;
    for (const Tour& t : solution->tours) {
      std::string d = "M " + detail::svg_num(cx) + " " + detail::svg_num(cy);
      for (int idx : t.indices) {
        if (idx < 0 || idx >= inst.n())
          fail(errc::invalid_input, "solution references point " + std::to_string(idx) +
                                        " outside the instance");
        d += " L " + detail::svg_num(sx(inst.points[idx].x)) + " " +
             detail::svg_num(sy(inst.points[idx].y));
      }
      d += " Z";
      out += "  <path d=\"" + d + "\" fill=\"none\" stroke=\"" +
             palette[color++ % palette_size] + "\" stroke-width=\"1.2\"/>\n";
    }
  }

  for (const Point& p : inst.points)
    out += "  <rect x=\"" + detail::svg_num(sx(p.x) - 2) + "\" y=\"" +
           detail::svg_num(sy(p.y) - 2) + "\" width=\"4\" height=\"4\" fill=\"#222222\"/>\n";
  out += "  <rect x=\"" + detail::svg_num(cx - 4) + "\" y=\"" + detail::svg_num(cy - 4) +
         "\" width=\"8\" height=\"8\" fill=\"#e74c3c\"/>\n";
  out += "</svg>\n";
  return out;
}

}  // namespace ktc
