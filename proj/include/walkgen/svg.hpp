#pragma once

// Top-down orthographic SVG renders: the headless stand-in for engine
// screenshots. Output is deterministic text so artifacts diff cleanly.

#include <cstdio>
#include <string>
#include <vector>

#include "walkgen/evolve.hpp"
#include "walkgen/explorer.hpp"
#include "walkgen/geometry.hpp"
#include "walkgen/islandgen.hpp"
#include "walkgen/level_template.hpp"
#include "walkgen/visibility.hpp"

namespace walkgen {

namespace detail {

inline std::string fnum(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

// Scene z grows northward; SVG y grows downward.
class SvgCanvas {
 public:
  SvgCanvas(double width_m, double height_m, double margin = 1.0)
      : height_(height_m) {
    body_ += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" +
             fnum(-margin) + " " + fnum(-margin) + " " + fnum(width_m + 2 * margin) +
             " " + fnum(height_m + 2 * margin) + "\" width=\"800\">\n";
  }

  double sy(double z) const { return height_ - z; }

  void rect(const Rect2& r, const std::string& style) {
    body_ += "<rect x=\"" + fnum(r.min.x) + "\" y=\"" + fnum(sy(r.max.z)) +
             "\" width=\"" + fnum(r.max.x - r.min.x) + "\" height=\"" +
             fnum(r.max.z - r.min.z) + "\" " + style + "/>\n";
  }

  void circle(const Vec2& c, double radius, const std::string& style) {
    body_ += "<circle cx=\"" + fnum(c.x) + "\" cy=\"" + fnum(sy(c.z)) +
             "\" r=\"" + fnum(radius) + "\" " + style + "/>\n";
  }

  void line(const Vec2& a, const Vec2& b, const std::string& style) {
    body_ += "<line x1=\"" + fnum(a.x) + "\" y1=\"" + fnum(sy(a.z)) + "\" x2=\"" +
             fnum(b.x) + "\" y2=\"" + fnum(sy(b.z)) + "\" " + style + "/>\n";
  }

  void polyline(const std::vector<Vec2>& pts, const std::string& style) {
    if (pts.empty()) return;
    body_ += "<polyline points=\"";
    for (const Vec2& p : pts) body_ += fnum(p.x) + "," + fnum(sy(p.z)) + " ";
    body_ += "\" " + style + "/>\n";
  }

  void polygon(const Polygon2& pts, const std::string& style) {
    if (pts.empty()) return;
    body_ += "<polygon points=\"";
    for (const Vec2& p : pts) body_ += fnum(p.x) + "," + fnum(sy(p.z)) + " ";
    body_ += "\" " + style + "/>\n";
  }

  std::string finish() { return body_ + "</svg>\n"; }

 private:
  std::string body_;
  double height_;
};

inline void draw_level_base(SvgCanvas& svg, const LevelTemplate& tmpl,
                            const std::vector<Aabb>& occluders) {
  svg.rect(tmpl.surface(), "fill=\"#fbfaf4\" stroke=\"#444444\" stroke-width=\"0.1\"");
  for (const Aabb& box : occluders)
    svg.rect(box.footprint(), "fill=\"#9b9b9b\" stroke=\"#5f5f5f\" stroke-width=\"0.05\"");
}

}  // namespace detail

// Level render: surface outline, occluder footprints, the walk polyline, and
// markers colored green when their constraint is met, red otherwise.
inline std::string render_level_svg(const LevelTemplate& tmpl,
                                    const std::vector<Aabb>& occluders,
                                    const FitnessReport* report = nullptr,
                                    const VisibilityTrace* trace = nullptr) {
  detail::SvgCanvas svg(tmpl.surface_x, tmpl.surface_z);
  detail::draw_level_base(svg, tmpl, occluders);
  if (trace && !trace->samples.empty()) {
    std::vector<Vec2> pts;
    pts.reserve(trace->samples.size());
    for (const WalkSample& s : trace->samples)
      pts.push_back({s.pose.position.x, s.pose.position.z});
    svg.polyline(pts, "fill=\"none\" stroke=\"#2962ff\" stroke-width=\"0.12\"");
  }
  for (std::size_t m = 0; m < tmpl.markers.size(); ++m) {
    const bool met = report && m < report->per_marker_met.size() &&
                     report->per_marker_met[m];
    const std::string fill = met ? "#2e7d32" : "#c62828";
    svg.rect(tmpl.markers[m].box.footprint(),
             "fill=\"" + fill + "\" fill-opacity=\"0.85\" stroke=\"#222222\" stroke-width=\"0.05\"");
  }
  svg.circle(tmpl.start, 0.35, "fill=\"#1565c0\" stroke=\"#0b3a66\" stroke-width=\"0.05\"");
  svg.circle(tmpl.end, 0.35, "fill=\"#ef6c00\" stroke=\"#7f3900\" stroke-width=\"0.05\"");
  return svg.finish();
}

// Explorer debug view: belief points in the green/yellow/magenta scheme,
// grey for unknown, with the trajectory on top.
inline std::string render_explorer_svg(const LevelTemplate& tmpl,
                                       const std::vector<Aabb>& occluders,
                                       const BeliefState& belief,
                                       const PointLattice& lattice,
                                       const std::vector<TrajectoryEntry>& trajectory) {
  detail::SvgCanvas svg(tmpl.surface_x, tmpl.surface_z);
  detail::draw_level_base(svg, tmpl, occluders);
  const double r = 0.14 * lattice.spacing;
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    const char* fill = "#bdbdbd";
    switch (belief.state[i]) {
      case PointState::CurrentlyVisible: fill = "#2e7d32"; break;
      case PointState::Frontier: fill = "#f9a825"; break;
      case PointState::Lapsed: fill = "#ab47bc"; break;
      default: break;
    }
    svg.circle(lattice.points[i].ground, r, std::string("fill=\"") + fill + "\"");
  }
  if (!trajectory.empty()) {
    std::vector<Vec2> pts;
    pts.reserve(trajectory.size());
    for (const TrajectoryEntry& e : trajectory) pts.push_back(e.position);
    svg.polyline(pts, "fill=\"none\" stroke=\"#37474f\" stroke-width=\"0.1\"");
    svg.circle(trajectory.back().position, 2.0 * r,
               "fill=\"none\" stroke=\"#d84315\" stroke-width=\"0.08\"");
  }
  return svg.finish();
}

// Island render: tan land, blue water, decoration glyphs, the stone path and
// the spawn/campsite cells.
inline std::string render_island_svg(const IslandMap& map,
                                     const DogTrace* dog = nullptr) {
  detail::SvgCanvas svg(map.extent, map.extent, 0.02 * map.extent);
  for (std::size_t i = 0; i < map.cells.size(); ++i) {
    const char* fill = map.land[i] ? "#d9c38c" : "#86b7dc";
    svg.polygon(map.cells[i].polygon,
                std::string("fill=\"") + fill + "\" stroke=\"#55606a\" stroke-width=\"0.15\"");
  }
  const double s = map.extent / 100.0;
  for (const Decoration& d : map.decorations) {
    switch (d.kind) {
      case DecorationKind::Tree:
        svg.circle(d.position, 1.0 * s, "fill=\"#2f6d32\"");
        break;
      case DecorationKind::Rock:
        svg.circle(d.position, 0.9 * s, "fill=\"#7d7d7d\"");
        break;
      case DecorationKind::Lilypad:
        svg.circle(d.position, 0.6 * s, "fill=\"#4db6ac\"");
        break;
      case DecorationKind::FenceSegment:
        svg.circle(d.position, 0.5 * s, "fill=\"#8d6e63\"");
        break;
      case DecorationKind::PathStone:
        svg.circle(d.position, 0.8 * s, "fill=\"#cfd8dc\" stroke=\"#78909c\" stroke-width=\"0.1\"");
        break;
      case DecorationKind::Spawn:
        svg.circle(d.position, 1.6 * s, "fill=\"#1565c0\" stroke=\"#ffffff\" stroke-width=\"0.3\"");
        break;
      case DecorationKind::Campsite:
        svg.circle(d.position, 1.6 * s, "fill=\"#ef6c00\" stroke=\"#ffffff\" stroke-width=\"0.3\"");
        break;
    }
  }
  if (dog && !dog->ticks.empty()) {
    std::vector<Vec2> pts;
    pts.reserve(dog->ticks.size());
    for (const DogTick& t : dog->ticks) pts.push_back(t.position);
    svg.polyline(pts, "fill=\"none\" stroke=\"#6d4c41\" stroke-width=\"0.3\"");
  }
  return svg.finish();
}

// Wavefront OBJ of the occluder boxes, for loading scenes into a 3D viewer.
inline std::string export_obj(const std::vector<Aabb>& occluders) {
  std::string out = "# walkgen occluder export\n";
  char buf[96];
  int base = 1;
  for (const Aabb& box : occluders) {
    for (const Vec3& v : aabb_vertices(box)) {
      std::snprintf(buf, sizeof(buf), "v %.6f %.6f %.6f\n", v.x, v.y, v.z);
      out += buf;
    }
    // vertex order from aabb_vertices: bit2 = x, bit1 = y, bit0 = z
    static const int faces[6][4] = {{0, 1, 3, 2}, {4, 6, 7, 5}, {0, 4, 5, 1},
                                    {2, 3, 7, 6}, {0, 2, 6, 4}, {1, 5, 7, 3}};
    for (const auto& f : faces) {
      std::snprintf(buf, sizeof(buf), "f %d %d %d %d\n", base + f[0], base + f[1],
                    base + f[2], base + f[3]);
      out += buf;
    }
    base += 8;
  }
  return out;
}

}  // namespace walkgen
