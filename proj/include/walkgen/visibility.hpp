#pragma once

// Walks an agent along the A* path, records per-sample per-marker visibility
// (frustum containment plus at least one unoccluded vertex ray), and scores
// how many marker constraints the layout satisfies.

#include <cstdio>
#include <string>
#include <vector>

#include "walkgen/geometry.hpp"
#include "walkgen/level_template.hpp"
#include "walkgen/navgrid.hpp"

namespace walkgen {

struct EvalParams {
  CameraModel camera;
  double cell_size = 0.5;
  double agent_radius = 0.4;
  double sample_spacing = 0.25;
  double tau_see = 0.10;   // MustSee met iff visible fraction >= tau_see
  double tau_hide = 0.0;   // MustStayHidden met iff visible fraction <= tau_hide
};

struct VisibilityTrace {
  std::vector<WalkSample> samples;
  std::vector<std::uint8_t> visible;  // row-major [sample][marker]
  std::size_t marker_count = 0;

  bool at(std::size_t sample, std::size_t marker) const {
    return visible[sample * marker_count + marker] != 0;
  }
};

struct FitnessReport {
  bool path_found = false;
  std::vector<double> per_marker_visible_fraction;
  std::vector<bool> per_marker_met;
  int constraints_met = 0;
  double shaping = 0.0;
  double fitness = 0.0;
};

// A marker is visible iff at least one of its 8 box vertices is inside the
// frustum and, among those, at least one eye-to-vertex segment is unoccluded.
inline bool marker_visible_at(const Pose& pose, const CameraModel& camera,
                              const ObjectiveMarker& marker,
                              const std::vector<Aabb>& occluders) {
  for (const Vec3& vertex : aabb_vertices(marker.box)) {
    if (!frustum_contains(pose, camera, vertex)) continue;
    if (!segment_occluded(pose.position, vertex, occluders)) return true;
  }
  return false;
}

inline std::vector<Rect2> occluder_footprints(const std::vector<Aabb>& occluders) {
  std::vector<Rect2> out;
  out.reserve(occluders.size());
  for (const Aabb& box : occluders) out.push_back(box.footprint());
  return out;
}

inline std::pair<FitnessReport, VisibilityTrace> evaluate_level(
    const LevelTemplate& tmpl, const std::vector<Aabb>& occluders,
    const EvalParams& params = {}) {
  validate_or_throw(tmpl);

  FitnessReport report;
  report.per_marker_visible_fraction.assign(tmpl.markers.size(), 0.0);
  report.per_marker_met.assign(tmpl.markers.size(), false);
  VisibilityTrace trace;
  trace.marker_count = tmpl.markers.size();

  const NavGrid grid = build_navgrid(tmpl, occluder_footprints(occluders),
                                     params.cell_size, params.agent_radius);
  std::optional<std::vector<GridCell>> path;
  if (grid.feasible) path = astar(grid, grid.start_cell, grid.end_cell);
  if (!path) return {report, trace};  // disconnected: fitness stays 0

  report.path_found = true;
  trace.samples = sample_walk(*path, grid, tmpl.eye_height, params.sample_spacing);
  trace.visible.assign(trace.samples.size() * tmpl.markers.size(), 0);

  for (std::size_t s = 0; s < trace.samples.size(); ++s) {
    for (std::size_t m = 0; m < tmpl.markers.size(); ++m) {
      if (marker_visible_at(trace.samples[s].pose, params.camera,
                            tmpl.markers[m], occluders))
        trace.visible[s * trace.marker_count + m] = 1;
    }
  }

  const double n_samples = static_cast<double>(trace.samples.size());
  double shaping_sum = 0.0;
  for (std::size_t m = 0; m < tmpl.markers.size(); ++m) {
    std::size_t count = 0;
    for (std::size_t s = 0; s < trace.samples.size(); ++s)
      count += trace.visible[s * trace.marker_count + m];
    const double fraction = n_samples > 0.0 ? count / n_samples : 0.0;
    report.per_marker_visible_fraction[m] = fraction;
    const bool must_see = tmpl.markers[m].constraint == MarkerConstraint::MustSee;
    report.per_marker_met[m] =
        must_see ? fraction >= params.tau_see : fraction <= params.tau_hide;
    if (report.per_marker_met[m]) ++report.constraints_met;
    shaping_sum += must_see ? fraction : 1.0 - fraction;
  }
  // Zero markers satisfy vacuously: shaping 1, no constraint count.
  report.shaping = tmpl.markers.empty()
                       ? 1.0
                       : shaping_sum / static_cast<double>(tmpl.markers.size());
  report.fitness = report.constraints_met + report.shaping;
  return {report, trace};
}

inline std::string trace_csv(const VisibilityTrace& trace,
                             const LevelTemplate& tmpl) {
  std::string out = "sample_index,arc_length,x,z,yaw";
  for (const ObjectiveMarker& m : tmpl.markers) out += "," + m.id;
  out += "\n";
  char buf[128];
  for (std::size_t s = 0; s < trace.samples.size(); ++s) {
    const WalkSample& ws = trace.samples[s];
    std::snprintf(buf, sizeof(buf), "%zu,%.6f,%.6f,%.6f,%.6f", s, ws.arc_length,
                  ws.pose.position.x, ws.pose.position.z, ws.pose.yaw);
    out += buf;
    for (std::size_t m = 0; m < trace.marker_count; ++m)
      out += trace.at(s, m) ? ",1" : ",0";
    out += "\n";
  }
  return out;
}

}  // namespace walkgen
