#pragma once

// The curious exploration agent. A lattice of probe points is overlaid on
// the level; the agent knows only what it has seen, plans on a believed
// adjacency graph, and walks toward frontier points until none remain or the
// tick budget runs out. Traversal failures permanently remove believed edges.

#include <cstdint>
#include <functional>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "walkgen/errors.hpp"
#include "walkgen/geometry.hpp"
#include "walkgen/level_template.hpp"
#include "walkgen/navgrid.hpp"
#include "walkgen/visibility.hpp"

namespace walkgen {

enum class PointState : std::uint8_t { Unobserved, CurrentlyVisible, Frontier, Lapsed };

struct LatticePoint {
  Vec2 ground;
  Vec3 probe;  // ground position lifted to eye height
};

struct PointLattice {
  int nx = 0;
  int nz = 0;
  double spacing = 1.0;
  double eye_height = 1.6;
  std::vector<LatticePoint> points;  // row-major, index = iz * nx + ix

  int index(int ix, int iz) const { return iz * nx + ix; }
  std::size_t size() const { return points.size(); }

  // 4-neighbors in ascending index order.
  void neighbors(int i, std::vector<int>& out) const {
    out.clear();
    const int ix = i % nx, iz = i / nx;
    if (iz > 0) out.push_back(i - nx);
    if (ix > 0) out.push_back(i - 1);
    if (ix + 1 < nx) out.push_back(i + 1);
    if (iz + 1 < nz) out.push_back(i + nx);
  }
};

inline PointLattice overlay_grid(const LevelTemplate& tmpl, double point_spacing) {
  if (point_spacing <= 0.0)
    throw std::invalid_argument("overlay_grid: spacing must be positive");
  if (point_spacing > tmpl.surface_x || point_spacing > tmpl.surface_z)
    throw std::invalid_argument("overlay_grid: spacing exceeds surface extent");
  PointLattice lattice;
  lattice.spacing = point_spacing;
  lattice.eye_height = tmpl.eye_height;
  lattice.nx = static_cast<int>(std::floor(tmpl.surface_x / point_spacing + 1e-9)) + 1;
  lattice.nz = static_cast<int>(std::floor(tmpl.surface_z / point_spacing + 1e-9)) + 1;
  lattice.points.reserve(static_cast<std::size_t>(lattice.nx) * lattice.nz);
  for (int iz = 0; iz < lattice.nz; ++iz) {
    for (int ix = 0; ix < lattice.nx; ++ix) {
      const Vec2 g{ix * point_spacing, iz * point_spacing};
      lattice.points.push_back({g, {g.x, tmpl.eye_height, g.z}});
    }
  }
  return lattice;
}

struct BeliefState {
  int nx = 0;
  int nz = 0;
  std::vector<PointState> state;
  std::vector<std::uint8_t> believed_empty;    // seen at least once, cell free
  std::vector<std::uint8_t> believed_blocked;  // seen at least once, cell blocked
  std::vector<std::uint8_t> ever_frontier;
  std::vector<std::uint8_t> scanned_from;      // a full 360 scan ran here
  std::vector<int> visit_count;
  std::set<std::pair<int, int>> failed_edges;  // normalized (lo, hi); permanent

  static BeliefState make(const PointLattice& lattice) {
    BeliefState b;
    b.nx = lattice.nx;
    b.nz = lattice.nz;
    b.state.assign(lattice.size(), PointState::Unobserved);
    b.believed_empty.assign(lattice.size(), 0);
    b.believed_blocked.assign(lattice.size(), 0);
    b.ever_frontier.assign(lattice.size(), 0);
    b.scanned_from.assign(lattice.size(), 0);
    b.visit_count.assign(lattice.size(), 0);
    return b;
  }

  bool edge_failed(int a, int b) const {
    return failed_edges.count({std::min(a, b), std::max(a, b)}) > 0;
  }
  // Edges exist between adjacent believed-empty points that have not failed.
  bool believed_edge(int a, int b) const {
    return believed_empty[a] && believed_empty[b] && !edge_failed(a, b);
  }
  bool known(int i) const { return believed_empty[i] || believed_blocked[i]; }
};

inline bool has_unknown_neighbor(const BeliefState& belief,
                                 const PointLattice& lattice, int i) {
  std::vector<int> adj;
  lattice.neighbors(i, adj);
  for (const int nb : adj)
    if (!belief.known(nb)) return true;
  return false;
}

// One camera observation. Visible free points become believed-empty; visible
// points over blocked cells become believed-blocked (vision reveals obstacles
// it can see). Frontier points are believed-empty points at the edge of the
// current view that still border unknown ground; Lapsed points were frontiers
// whose surroundings have since gone dark.
inline void observe(const Pose& agent_pose, const CameraModel& camera,
                    BeliefState& belief, const std::vector<Aabb>& occluders,
                    const NavGrid& true_grid, const PointLattice& lattice) {
  const std::size_t n = lattice.size();
  const double self_r2 = 0.0625 * lattice.spacing * lattice.spacing;
  std::vector<std::uint8_t> visible(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const LatticePoint& pt = lattice.points[i];
    const Vec2 d{pt.ground.x - agent_pose.position.x,
                 pt.ground.z - agent_pose.position.z};
    const bool standing_on = dot(d, d) < self_r2;
    if (!standing_on) {
      if (!frustum_contains(agent_pose, camera, pt.probe)) continue;
      if (segment_occluded(agent_pose.position, pt.probe, occluders)) continue;
    }
    if (true_grid.is_blocked(true_grid.cell_of(pt.ground))) {
      belief.believed_blocked[i] = 1;
    } else {
      visible[i] = 1;
      belief.believed_empty[i] = 1;
    }
  }

  std::vector<int> adj;
  for (std::size_t i = 0; i < n; ++i) {
    if (visible[i]) {
      belief.state[i] = PointState::CurrentlyVisible;
      continue;
    }
    bool next_to_visible = false;
    lattice.neighbors(static_cast<int>(i), adj);
    for (const int nb : adj) {
      if (visible[nb]) {
        next_to_visible = true;
        break;
      }
    }
    // Only points that still border unknown ground are worth being curious
    // about; without this the view edge feeds frontiers forever and the
    // agent never terminates.
    if (belief.believed_empty[i] && next_to_visible &&
        has_unknown_neighbor(belief, lattice, static_cast<int>(i))) {
      belief.state[i] = PointState::Frontier;
      belief.ever_frontier[i] = 1;
      continue;
    }
    if (belief.ever_frontier[i] && !next_to_visible) {
      belief.state[i] = PointState::Lapsed;
    } else {
      belief.state[i] = PointState::Unobserved;
    }
  }
}

namespace detail {

// BFS over the believed graph; neighbor order ascending keeps parents and
// therefore paths deterministic.
inline void believed_bfs(const BeliefState& belief, const PointLattice& lattice,
                         int source, std::vector<int>& dist,
                         std::vector<int>& parent) {
  dist.assign(lattice.size(), -1);
  parent.assign(lattice.size(), -1);
  if (!belief.believed_empty[source]) return;
  std::queue<int> queue;
  dist[source] = 0;
  queue.push(source);
  std::vector<int> adj;
  while (!queue.empty()) {
    const int cur = queue.front();
    queue.pop();
    lattice.neighbors(cur, adj);
    for (const int nb : adj) {
      if (dist[nb] >= 0 || !belief.believed_edge(cur, nb)) continue;
      dist[nb] = dist[cur] + 1;
      parent[nb] = cur;
      queue.push(nb);
    }
  }
}

template <typename Pred>
inline std::optional<int> nearest_where(const std::vector<int>& dist, Pred&& pred) {
  int best = -1;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (dist[i] < 0 || !pred(static_cast<int>(i))) continue;
    if (best < 0 || dist[i] < dist[best] ||
        (dist[i] == dist[best] && static_cast<int>(i) < best))
      best = static_cast<int>(i);
  }
  if (best < 0) return std::nullopt;
  return best;
}

inline std::optional<int> select_target(const BeliefState& belief,
                                        const PointLattice& lattice,
                                        int agent_point,
                                        const std::vector<int>& dist) {
  if (auto t = nearest_where(dist, [&](int i) {
        return belief.state[i] == PointState::Frontier && !belief.scanned_from[i];
      }))
    return t;
  return nearest_where(dist, [&](int i) {
    return i != agent_point && belief.believed_empty[i] && !belief.scanned_from[i] &&
           has_unknown_neighbor(belief, lattice, i);
  });
}

}  // namespace detail

// Nearest reachable Frontier point by believed-graph distance (ties broken by
// grid index); the fallback is the nearest known-empty point still bordering
// unknown ground, which covers Lapsed points in particular. Distance is the
// sole ranking inside the fallback: preferring Lapsed state there lets a
// stale point behind the agent outrank a nearer curiosity in front, and the
// walk degenerates into pacing. Points already scanned from are exhausted
// and never re-targeted.
inline std::optional<int> choose_target(const BeliefState& belief,
                                        const PointLattice& lattice,
                                        int agent_point) {
  std::vector<int> dist, parent;
  detail::believed_bfs(belief, lattice, agent_point, dist, parent);
  return detail::select_target(belief, lattice, agent_point, dist);
}

enum class Termination { FrontierExhausted, BudgetExhausted };

struct ExplorationReport {
  long ticks_used = 0;
  double points_observed_fraction = 0.0;  // ever-visible points / all points
  int stuck_events = 0;
  Termination termination = Termination::FrontierExhausted;
};

struct TrajectoryEntry {
  long tick = 0;
  Vec2 position;
  double yaw = 0.0;
};

struct ExplorationParams {
  double point_spacing = 1.0;
  CameraModel camera;
  double cell_size = 0.5;
  double agent_radius = 0.0;
  long tick_budget = 0;  // 0 means 10x the point count
};

struct ExplorationResult {
  ExplorationReport report;
  std::vector<TrajectoryEntry> trajectory;
  BeliefState final_belief;
  PointLattice lattice;
};

// Called once per tick after that tick's observations; used for belief
// snapshots and the per-tick invariant checks.
using TickCallback =
    std::function<void(long tick, const BeliefState&, const PointLattice&, int agent_point)>;

// Called after every single observation, including each wedge of a 360 scan.
// Belief states are recomputed per observation, so audits that need to see
// every intermediate Frontier/Lapsed transition hook in here.
using ObserveCallback = std::function<void(const BeliefState&, const PointLattice&)>;

namespace detail {

// A lattice step fails if the straight ground segment crosses any blocked
// cell of the true grid.
inline bool step_blocked(const NavGrid& grid, const Vec2& from, const Vec2& to) {
  const double len = dist(from, to);
  const int steps = std::max(2, static_cast<int>(std::ceil(len / (0.25 * grid.cell_size))));
  for (int k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) / steps;
    const Vec2 p = from + (to - from) * t;
    if (grid.is_blocked(grid.cell_of(p))) return true;
  }
  return false;
}

}  // namespace detail

inline ExplorationResult run_exploration(const LevelTemplate& tmpl,
                                         const std::vector<Aabb>& occluders,
                                         const ExplorationParams& params = {},
                                         const TickCallback& on_tick = {},
                                         const ObserveCallback& on_observe = {}) {
  validate_or_throw(tmpl);
  ExplorationResult result;
  result.lattice = overlay_grid(tmpl, params.point_spacing);
  const PointLattice& lattice = result.lattice;
  const NavGrid grid = build_navgrid(tmpl, occluder_footprints(occluders),
                                     params.cell_size, params.agent_radius);

  // Agent starts on the lattice point nearest the template start.
  int agent = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    const double d = dist(lattice.points[i].ground, tmpl.start);
    if (d < best_d) {
      best_d = d;
      agent = static_cast<int>(i);
    }
  }
  if (grid.is_blocked(grid.cell_of(lattice.points[agent].ground)))
    throw ValidationError("start-blocked", "exploration start cell is blocked");

  BeliefState belief = BeliefState::make(lattice);
  const long budget = params.tick_budget > 0
                          ? params.tick_budget
                          : 10 * static_cast<long>(lattice.size());

  double yaw = normalize_yaw(
      std::atan2(tmpl.end.x - tmpl.start.x, tmpl.end.z - tmpl.start.z));
  const auto pose_at = [&](int point, double y) {
    return Pose{lattice.points[point].probe, y};
  };
  const auto observe_from = [&](const Pose& pose) {
    observe(pose, params.camera, belief, occluders, grid, lattice);
    if (on_observe) on_observe(belief, lattice);
  };
  const auto full_scan = [&] {
    for (int k = 0; k < 8; ++k)
      observe_from(pose_at(agent, k * std::numbers::pi / 4.0));
    belief.scanned_from[agent] = 1;
  };

  belief.visit_count[agent] += 1;
  full_scan();
  result.trajectory.push_back({0, lattice.points[agent].ground, yaw});

  ExplorationReport& report = result.report;
  std::vector<int> dist_map, parent;
  while (true) {
    if (on_tick) on_tick(report.ticks_used, belief, lattice, agent);
    detail::believed_bfs(belief, lattice, agent, dist_map, parent);
    const std::optional<int> target =
        detail::select_target(belief, lattice, agent, dist_map);
    if (!target) {
      report.termination = Termination::FrontierExhausted;
      break;
    }
    if (report.ticks_used >= budget) {
      report.termination = Termination::BudgetExhausted;
      break;
    }

    // First hop of the believed shortest path toward the target.
    int next = *target;
    while (parent[next] != agent) next = parent[next];

    report.ticks_used += 1;
    if (detail::step_blocked(grid, lattice.points[agent].ground,
                             lattice.points[next].ground)) {
      belief.failed_edges.insert({std::min(agent, next), std::max(agent, next)});
      report.stuck_events += 1;
      full_scan();
    } else {
      const Vec2 d = lattice.points[next].ground - lattice.points[agent].ground;
      yaw = normalize_yaw(std::atan2(d.x, d.z));
      agent = next;
      belief.visit_count[agent] += 1;
      observe_from(pose_at(agent, yaw));
      if (agent == *target) full_scan();  // reached the curiosity point: look around
    }
    result.trajectory.push_back({report.ticks_used, lattice.points[agent].ground, yaw});
  }

  std::size_t seen = 0;
  for (std::size_t i = 0; i < lattice.size(); ++i)
    seen += belief.believed_empty[i] ? 1 : 0;
  report.points_observed_fraction =
      static_cast<double>(seen) / static_cast<double>(lattice.size());
  result.final_belief = std::move(belief);
  return result;
}

inline char point_state_letter(PointState s) {
  switch (s) {
    case PointState::CurrentlyVisible: return 'V';
    case PointState::Frontier: return 'F';
    case PointState::Lapsed: return 'L';
    default: return 'U';
  }
}

inline std::string trajectory_csv(const std::vector<TrajectoryEntry>& trajectory) {
  std::string out = "tick,x,z,yaw\n";
  char buf[96];
  for (const TrajectoryEntry& e : trajectory) {
    std::snprintf(buf, sizeof(buf), "%ld,%.6f,%.6f,%.6f\n", e.tick, e.position.x,
                  e.position.z, e.yaw);
    out += buf;
  }
  return out;
}

}  // namespace walkgen
