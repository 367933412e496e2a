#pragma once

// Walkability grid over the level surface plus deterministic A* and the
// fixed-spacing walk sampler used by the visibility evaluator.

#include <cmath>
#include <cstdint>
#include <optional>
#include <queue>
#include <stdexcept>
#include <vector>

#include "walkgen/geometry.hpp"
#include "walkgen/level_template.hpp"

namespace walkgen {

struct GridCell {
  int ix = 0;
  int iz = 0;

  bool operator==(const GridCell& o) const = default;
};

struct NavGrid {
  Vec2 origin{0.0, 0.0};
  double cell_size = 0.5;
  int width = 0;   // cells along x
  int height = 0;  // cells along z
  std::vector<std::uint8_t> blocked;
  GridCell start_cell;
  GridCell end_cell;
  bool feasible = true;  // start and end cells unblocked

  bool in_bounds(const GridCell& c) const {
    return c.ix >= 0 && c.ix < width && c.iz >= 0 && c.iz < height;
  }
  bool is_blocked(const GridCell& c) const {
    return blocked[static_cast<std::size_t>(c.iz) * width + c.ix] != 0;
  }
  Vec2 cell_center(const GridCell& c) const {
    return {origin.x + (c.ix + 0.5) * cell_size,
            origin.z + (c.iz + 0.5) * cell_size};
  }
  GridCell cell_of(const Vec2& p) const {
    int ix = static_cast<int>(std::floor((p.x - origin.x) / cell_size));
    int iz = static_cast<int>(std::floor((p.z - origin.z) / cell_size));
    ix = std::clamp(ix, 0, width - 1);
    iz = std::clamp(iz, 0, height - 1);
    return {ix, iz};
  }
};

inline NavGrid build_navgrid(const LevelTemplate& tmpl,
                             const std::vector<Rect2>& occluder_footprints,
                             double cell_size, double agent_radius) {
  if (cell_size <= 0.0)
    throw std::invalid_argument("build_navgrid: cell_size must be positive");
  if (agent_radius < 0.0)
    throw std::invalid_argument("build_navgrid: agent_radius must be >= 0");
  if (cell_size > tmpl.surface_x || cell_size > tmpl.surface_z)
    throw std::invalid_argument("build_navgrid: cell_size larger than surface");

  NavGrid grid;
  grid.origin = {0.0, 0.0};
  grid.cell_size = cell_size;
  grid.width = static_cast<int>(std::ceil(tmpl.surface_x / cell_size - 1e-9));
  grid.height = static_cast<int>(std::ceil(tmpl.surface_z / cell_size - 1e-9));
  grid.blocked.assign(static_cast<std::size_t>(grid.width) * grid.height, 0);

  for (int iz = 0; iz < grid.height; ++iz) {
    for (int ix = 0; ix < grid.width; ++ix) {
      const Rect2 cell{{ix * cell_size, iz * cell_size},
                       {(ix + 1) * cell_size, (iz + 1) * cell_size}};
      const Rect2 inflated = cell.inflated(agent_radius);
      for (const Rect2& fp : occluder_footprints) {
        if (inflated.overlaps(fp)) {
          grid.blocked[static_cast<std::size_t>(iz) * grid.width + ix] = 1;
          break;
        }
      }
    }
  }

  grid.start_cell = grid.cell_of(tmpl.start);
  grid.end_cell = grid.cell_of(tmpl.end);
  grid.feasible = !grid.is_blocked(grid.start_cell) && !grid.is_blocked(grid.end_cell);
  return grid;
}

// 4-connected shortest path by cell count. Ties in the open list are broken
// by (f, h, row, column) so repeated runs expand nodes in the same order and
// return the identical path.
inline std::optional<std::vector<GridCell>> astar(const NavGrid& grid,
                                                  const GridCell& start,
                                                  const GridCell& goal) {
  if (!grid.in_bounds(start) || !grid.in_bounds(goal))
    throw std::invalid_argument("astar: cell out of bounds");
  if (grid.is_blocked(start) || grid.is_blocked(goal)) return std::nullopt;

  const auto index = [&](const GridCell& c) {
    return static_cast<std::size_t>(c.iz) * grid.width + c.ix;
  };
  const auto heuristic = [&](const GridCell& c) {
    return std::abs(c.ix - goal.ix) + std::abs(c.iz - goal.iz);
  };

  struct Node {
    int f, h, iz, ix;
    bool operator>(const Node& o) const {
      if (f != o.f) return f > o.f;
      if (h != o.h) return h > o.h;
      if (iz != o.iz) return iz > o.iz;
      return ix > o.ix;
    }
  };

  const std::size_t n = grid.blocked.size();
  std::vector<int> g(n, std::numeric_limits<int>::max());
  std::vector<int> parent(n, -1);
  std::priority_queue<Node, std::vector<Node>, std::greater<Node>> open;

  g[index(start)] = 0;
  open.push({heuristic(start), heuristic(start), start.iz, start.ix});

  const int dx[4] = {0, 1, 0, -1};
  const int dz[4] = {-1, 0, 1, 0};

  while (!open.empty()) {
    const Node node = open.top();
    open.pop();
    const GridCell cur{node.ix, node.iz};
    const std::size_t ci = index(cur);
    if (node.f - node.h != g[ci]) continue;  // stale entry
    if (cur == goal) break;
    for (int k = 0; k < 4; ++k) {
      const GridCell nxt{cur.ix + dx[k], cur.iz + dz[k]};
      if (!grid.in_bounds(nxt) || grid.is_blocked(nxt)) continue;
      const std::size_t ni = index(nxt);
      const int ng = g[ci] + 1;
      if (ng < g[ni]) {
        g[ni] = ng;
        parent[ni] = static_cast<int>(ci);
        const int h = heuristic(nxt);
        open.push({ng + h, h, nxt.iz, nxt.ix});
      }
    }
  }

  if (g[index(goal)] == std::numeric_limits<int>::max()) return std::nullopt;
  std::vector<GridCell> path;
  for (std::size_t i = index(goal);;) {
    path.push_back({static_cast<int>(i % grid.width), static_cast<int>(i / grid.width)});
    if (parent[i] < 0) break;
    i = static_cast<std::size_t>(parent[i]);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

struct WalkSample {
  Pose pose;             // position at eye height, yaw = direction of travel
  double arc_length = 0.0;
};

// Resamples the cell-center polyline at fixed arc-length steps. The final
// sample sits on the path end even when the length is not a multiple of the
// spacing; every sample's yaw faces the next sample.
inline std::vector<WalkSample> sample_walk(const std::vector<GridCell>& path,
                                           const NavGrid& grid, double eye_height,
                                           double sample_spacing) {
  if (path.empty()) throw std::invalid_argument("sample_walk: empty path");
  if (sample_spacing <= 0.0)
    throw std::invalid_argument("sample_walk: spacing must be positive");

  std::vector<Vec2> pts;
  pts.reserve(path.size());
  for (const GridCell& c : path) pts.push_back(grid.cell_center(c));

  std::vector<double> cum{0.0};
  for (std::size_t i = 1; i < pts.size(); ++i)
    cum.push_back(cum.back() + dist(pts[i - 1], pts[i]));
  const double total = cum.back();

  std::vector<double> stops;
  const int whole = static_cast<int>(std::floor(total / sample_spacing + 1e-9));
  for (int k = 0; k <= whole; ++k) stops.push_back(k * sample_spacing);
  if (total - stops.back() > 1e-9) stops.push_back(total);

  const auto point_at = [&](double s) -> Vec2 {
    std::size_t seg = 1;
    while (seg < cum.size() - 1 && cum[seg] < s) ++seg;
    if (pts.size() == 1) return pts[0];
    const double seg_len = cum[seg] - cum[seg - 1];
    const double t = seg_len > 0.0 ? (s - cum[seg - 1]) / seg_len : 0.0;
    return pts[seg - 1] + (pts[seg] - pts[seg - 1]) * std::clamp(t, 0.0, 1.0);
  };

  std::vector<WalkSample> samples;
  samples.reserve(stops.size());
  for (const double s : stops) {
    const Vec2 p = point_at(std::min(s, total));
    samples.push_back({{{p.x, eye_height, p.z}, 0.0}, std::min(s, total)});
  }
  for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
    const Vec3 d = samples[i + 1].pose.position - samples[i].pose.position;
    samples[i].pose.yaw = normalize_yaw(std::atan2(d.x, d.z));
  }
  if (samples.size() > 1)
    samples.back().pose.yaw = samples[samples.size() - 2].pose.yaw;
  return samples;
}

}  // namespace walkgen
