#pragma once

// Mudeford-style island maps: a Voronoi partition of a square, a random walk
// that lays connected landmass, water everywhere else, fences on land-water
// borders, scattered flora, endpoint placement, a stone path, and a companion
// dog that always returns into the player's camera frustum.

#include <algorithm>
#include <cstdio>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "walkgen/errors.hpp"
#include "walkgen/geometry.hpp"
#include "walkgen/json_util.hpp"
#include "walkgen/rng.hpp"

namespace walkgen {

struct VoronoiCell {
  Polygon2 polygon;            // convex, counterclockwise
  std::vector<int> edge_src;   // per edge: neighboring site index, -1 for hull
  std::vector<int> neighbors;  // ascending site indices sharing an edge
  Vec2 centroid;
};

enum class DecorationKind { Tree, Lilypad, FenceSegment, Rock, PathStone, Campsite, Spawn };

inline const char* decoration_name(DecorationKind k) {
  switch (k) {
    case DecorationKind::Tree: return "tree";
    case DecorationKind::Lilypad: return "lilypad";
    case DecorationKind::FenceSegment: return "fence_segment";
    case DecorationKind::Rock: return "rock";
    case DecorationKind::PathStone: return "path_stone";
    case DecorationKind::Campsite: return "campsite";
    default: return "spawn";
  }
}

struct Decoration {
  DecorationKind kind;
  Vec2 position;
  int cell = -1;
};

struct IslandMap {
  double extent = 100.0;  // square [0, extent]^2
  std::vector<Vec2> sites;
  std::vector<VoronoiCell> cells;
  std::vector<std::uint8_t> land;
  std::vector<Decoration> decorations;
  std::vector<int> path_cells;
  int spawn_cell = -1;
  int campsite_cell = -1;

  bool is_land(int i) const { return land[i] != 0; }
  bool on_land(const Vec2& p) const {
    for (std::size_t i = 0; i < cells.size(); ++i)
      if (land[i] && polygon_contains(cells[i].polygon, p)) return true;
    return false;
  }
  Vec2 nearest_land_point(const Vec2& p) const {
    double best_d = std::numeric_limits<double>::infinity();
    Vec2 best = p;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (!land[i]) continue;
      const Vec2 q = closest_point_in_polygon(cells[i].polygon, p);
      const double d = dist(q, p);
      if (d < best_d) {
        best_d = d;
        best = q;
      }
    }
    return best;
  }
};

namespace detail {

struct SourcedPolygon {
  Polygon2 v;
  std::vector<int> src;  // src[k] belongs to edge v[k] -> v[k+1]
};

// Sutherland-Hodgman against the half-plane dot(n, x) <= c, tagging the new
// cut edge with `source`.
inline SourcedPolygon clip_sourced(const SourcedPolygon& poly, const Vec2& n,
                                   double c, int source) {
  SourcedPolygon out;
  const std::size_t count = poly.v.size();
  if (count == 0) return out;
  for (std::size_t i = 0; i < count; ++i) {
    const Vec2& a = poly.v[i];
    const Vec2& b = poly.v[(i + 1) % count];
    const int src = poly.src[i];
    const double da = dot(n, a) - c;
    const double db = dot(n, b) - c;
    if (da <= 0.0) {
      out.v.push_back(a);
      out.src.push_back(src);
      if (db > 0.0) {
        const double t = da / (da - db);
        out.v.push_back(a + (b - a) * t);
        out.src.push_back(source);  // boundary now runs along the cut line
      }
    } else if (db <= 0.0) {
      const double t = da / (da - db);
      out.v.push_back(a + (b - a) * t);
      out.src.push_back(src);  // remainder of the original edge
    }
  }
  return out;
}

inline std::vector<VoronoiCell> build_cells(const std::vector<Vec2>& sites,
                                            double extent) {
  std::vector<VoronoiCell> cells(sites.size());
  for (std::size_t i = 0; i < sites.size(); ++i) {
    SourcedPolygon poly;
    poly.v = {{0.0, 0.0}, {extent, 0.0}, {extent, extent}, {0.0, extent}};
    poly.src = {-1, -1, -1, -1};
    for (std::size_t j = 0; j < sites.size(); ++j) {
      if (j == i) continue;
      const Vec2 n = sites[j] - sites[i];
      const double c = dot(n, (sites[i] + sites[j]) * 0.5);
      poly = clip_sourced(poly, n, c, static_cast<int>(j));
      if (poly.v.empty()) break;
    }
    VoronoiCell& cell = cells[i];
    cell.polygon = poly.v;
    cell.edge_src = poly.src;
    cell.centroid = polygon_centroid(cell.polygon);
    for (std::size_t k = 0; k < poly.v.size(); ++k) {
      const int src = poly.src[k];
      if (src < 0) continue;
      const Vec2& a = poly.v[k];
      const Vec2& b = poly.v[(k + 1) % poly.v.size()];
      if (dist(a, b) > 1e-9) cell.neighbors.push_back(src);
    }
  }
  // Shared Delaunay edges are symmetric; union the two views for robustness.
  for (std::size_t i = 0; i < cells.size(); ++i) {
    for (const int j : cells[i].neighbors) {
      auto& back = cells[j].neighbors;
      if (std::find(back.begin(), back.end(), static_cast<int>(i)) == back.end())
        back.push_back(static_cast<int>(i));
    }
  }
  for (VoronoiCell& cell : cells) {
    std::sort(cell.neighbors.begin(), cell.neighbors.end());
    cell.neighbors.erase(std::unique(cell.neighbors.begin(), cell.neighbors.end()),
                         cell.neighbors.end());
  }
  return cells;
}

}  // namespace detail

// Uniform random sites followed by one Lloyd relaxation step (centroid snap),
// which evens out sliver cells while keeping the layout random.
inline IslandMap generate_voronoi(double extent, int n_sites, std::uint64_t seed) {
  if (n_sites < 2)
    throw std::invalid_argument("generate_voronoi: need at least 2 sites");
  if (extent <= 0.0)
    throw std::invalid_argument("generate_voronoi: extent must be positive");
  IslandMap map;
  map.extent = extent;
  Rng rng = derive_rng(seed, "island/sites");
  map.sites.resize(static_cast<std::size_t>(n_sites));
  for (Vec2& s : map.sites) s = {rng.uniform(0.0, extent), rng.uniform(0.0, extent)};

  auto cells = detail::build_cells(map.sites, extent);
  for (std::size_t i = 0; i < map.sites.size(); ++i)
    map.sites[i] = cells[i].centroid;
  map.cells = detail::build_cells(map.sites, extent);
  map.land.assign(map.sites.size(), 0);
  return map;
}

// Random walk over cell adjacency; every visited cell becomes land, so the
// landmass is connected by construction. Unvisited cells are water.
inline void walk_landmass(IslandMap& map, int walk_steps, std::uint64_t seed) {
  if (walk_steps < 1)
    throw std::invalid_argument("walk_landmass: need at least 1 step");
  map.land.assign(map.cells.size(), 0);
  const Vec2 center{0.5 * map.extent, 0.5 * map.extent};
  int current = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < map.sites.size(); ++i) {
    const double d = dist(map.sites[i], center);
    if (d < best) {
      best = d;
      current = static_cast<int>(i);
    }
  }
  Rng rng = derive_rng(seed, "island/walk");
  for (int step = 0; step < walk_steps; ++step) {
    map.land[current] = 1;
    const auto& adj = map.cells[current].neighbors;
    if (adj.empty()) break;
    current = adj[rng.uniform_index(adj.size())];
  }
}

struct DecorationParams {
  double p_fence = 0.5;
  double tree_density = 0.02;  // expected count per square meter of land cell
  double lily_density = 0.008;
  double rock_density = 0.004;
};

namespace detail {

inline std::optional<std::pair<Vec2, Vec2>> shared_edge(const IslandMap& map,
                                                        int i, int j) {
  const VoronoiCell& cell = map.cells[i];
  for (std::size_t k = 0; k < cell.edge_src.size(); ++k) {
    if (cell.edge_src[k] == j) {
      return std::make_pair(cell.polygon[k],
                            cell.polygon[(k + 1) % cell.polygon.size()]);
    }
  }
  return std::nullopt;
}

// Dart-throwing Poisson disc inside one convex cell.
inline void scatter_in_cell(const IslandMap& map, int cell_index, double density,
                            DecorationKind kind, Rng& rng,
                            std::vector<Decoration>& out) {
  if (density <= 0.0) return;
  const Polygon2& poly = map.cells[cell_index].polygon;
  const double area = polygon_area(poly);
  if (area <= 0.0) return;
  const double min_dist = 0.5 / std::sqrt(density);
  const int attempts = static_cast<int>(std::ceil(area * density * 4.0)) + 4;
  Vec2 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  Vec2 hi{-lo.x, -lo.z};
  for (const Vec2& v : poly) {
    lo = {std::min(lo.x, v.x), std::min(lo.z, v.z)};
    hi = {std::max(hi.x, v.x), std::max(hi.z, v.z)};
  }
  std::vector<Vec2> accepted;
  for (int a = 0; a < attempts; ++a) {
    const Vec2 cand{rng.uniform(lo.x, hi.x), rng.uniform(lo.z, hi.z)};
    if (!polygon_contains(poly, cand)) continue;
    bool ok = true;
    for (const Vec2& p : accepted) {
      if (dist(p, cand) < min_dist) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    accepted.push_back(cand);
    out.push_back({kind, cand, cell_index});
  }
}

}  // namespace detail

// Fences on a coin flip per land-water border edge, trees and rocks scattered
// on land cells, lilypads on water cells; everything stays inside its cell.
inline void decorate(IslandMap& map, const DecorationParams& params,
                     std::uint64_t seed) {
  if (std::find(map.land.begin(), map.land.end(), 1) == map.land.end())
    throw std::invalid_argument("decorate: no land cells");
  Rng fence_rng = derive_rng(seed, "island/fence");
  for (std::size_t i = 0; i < map.cells.size(); ++i) {
    for (const int j : map.cells[i].neighbors) {
      if (static_cast<int>(i) >= j) continue;  // visit each border once
      if (map.land[i] == map.land[j]) continue;
      const int land_cell = map.land[i] ? static_cast<int>(i) : j;
      if (!fence_rng.bernoulli(params.p_fence)) continue;
      auto edge = detail::shared_edge(map, static_cast<int>(i), j);
      if (!edge) edge = detail::shared_edge(map, j, static_cast<int>(i));
      if (!edge) continue;
      map.decorations.push_back({DecorationKind::FenceSegment,
                                 (edge->first + edge->second) * 0.5, land_cell});
    }
  }
  Rng tree_rng = derive_rng(seed, "island/tree");
  for (std::size_t i = 0; i < map.cells.size(); ++i)
    if (map.land[i])
      detail::scatter_in_cell(map, static_cast<int>(i), params.tree_density,
                              DecorationKind::Tree, tree_rng, map.decorations);
  Rng rock_rng = derive_rng(seed, "island/rock");
  for (std::size_t i = 0; i < map.cells.size(); ++i)
    if (map.land[i])
      detail::scatter_in_cell(map, static_cast<int>(i), params.rock_density,
                              DecorationKind::Rock, rock_rng, map.decorations);
  Rng lily_rng = derive_rng(seed, "island/lily");
  for (std::size_t i = 0; i < map.cells.size(); ++i)
    if (!map.land[i])
      detail::scatter_in_cell(map, static_cast<int>(i), params.lily_density,
                              DecorationKind::Lilypad, lily_rng, map.decorations);
}

// The pair of land cells with maximal centroid distance; the spawn is the
// one with smaller x (ties by smaller z).
inline std::pair<int, int> place_endpoints(const IslandMap& map) {
  std::vector<int> land_cells;
  for (std::size_t i = 0; i < map.cells.size(); ++i)
    if (map.land[i]) land_cells.push_back(static_cast<int>(i));
  if (land_cells.size() < 2)
    throw std::invalid_argument("place_endpoints: fewer than 2 land cells");
  int best_a = land_cells[0], best_b = land_cells[1];
  double best_d = -1.0;
  for (std::size_t a = 0; a < land_cells.size(); ++a) {
    for (std::size_t b = a + 1; b < land_cells.size(); ++b) {
      const double d = dist(map.cells[land_cells[a]].centroid,
                            map.cells[land_cells[b]].centroid);
      if (d > best_d) {
        best_d = d;
        best_a = land_cells[a];
        best_b = land_cells[b];
      }
    }
  }
  const Vec2& ca = map.cells[best_a].centroid;
  const Vec2& cb = map.cells[best_b].centroid;
  const bool a_is_spawn = ca.x < cb.x || (ca.x == cb.x && ca.z <= cb.z);
  return a_is_spawn ? std::make_pair(best_a, best_b)
                    : std::make_pair(best_b, best_a);
}

// A* over land-cell adjacency by hop count. The centroid-distance heuristic
// is scaled by the largest adjacent-centroid gap to stay admissible.
inline std::vector<int> lay_path(IslandMap& map, int from_cell, int to_cell) {
  if (!map.is_land(from_cell) || !map.is_land(to_cell))
    throw std::invalid_argument("lay_path: endpoints must be land cells");
  double max_gap = 1e-9;
  for (std::size_t i = 0; i < map.cells.size(); ++i) {
    if (!map.land[i]) continue;
    for (const int j : map.cells[i].neighbors)
      if (map.land[j])
        max_gap = std::max(max_gap, dist(map.cells[i].centroid, map.cells[j].centroid));
  }
  const auto heuristic = [&](int i) {
    return dist(map.cells[i].centroid, map.cells[to_cell].centroid) / max_gap;
  };

  struct Node {
    double f;
    int index;
    bool operator>(const Node& o) const {
      if (f != o.f) return f > o.f;
      return index > o.index;
    }
  };
  std::vector<int> g(map.cells.size(), std::numeric_limits<int>::max());
  std::vector<int> parent(map.cells.size(), -1);
  std::priority_queue<Node, std::vector<Node>, std::greater<Node>> open;
  g[from_cell] = 0;
  open.push({heuristic(from_cell), from_cell});
  while (!open.empty()) {
    const Node node = open.top();
    open.pop();
    const int cur = node.index;
    if (cur == to_cell) break;
    for (const int nb : map.cells[cur].neighbors) {
      if (!map.land[nb]) continue;
      const int ng = g[cur] + 1;
      if (ng < g[nb]) {
        g[nb] = ng;
        parent[nb] = cur;
        open.push({ng + heuristic(nb), nb});
      }
    }
  }
  if (g[to_cell] == std::numeric_limits<int>::max())
    throw std::logic_error("lay_path: land is disconnected");

  std::vector<int> path;
  for (int i = to_cell; i >= 0; i = parent[i]) path.push_back(i);
  std::reverse(path.begin(), path.end());
  map.path_cells = path;
  for (const int cell : path)
    map.decorations.push_back(
        {DecorationKind::PathStone, map.cells[cell].centroid, cell});
  return path;
}

struct IslandParams {
  double extent = 100.0;
  int n_sites = 50;
  int walk_steps = 30;
  DecorationParams decoration;
  bool with_path = true;
};

// The full pipeline. Endpoints and the path need at least two land cells;
// with fewer the map simply has no spawn/campsite.
inline IslandMap generate_island(const IslandParams& params, std::uint64_t seed) {
  IslandMap map = generate_voronoi(params.extent, params.n_sites, seed);
  walk_landmass(map, params.walk_steps, seed);
  decorate(map, params.decoration, seed);
  int land_count = 0;
  for (const auto f : map.land) land_count += f;
  if (land_count >= 2) {
    const auto [spawn, campsite] = place_endpoints(map);
    map.spawn_cell = spawn;
    map.campsite_cell = campsite;
    if (params.with_path) lay_path(map, spawn, campsite);
    map.decorations.push_back(
        {DecorationKind::Spawn, map.cells[spawn].centroid, spawn});
    map.decorations.push_back(
        {DecorationKind::Campsite, map.cells[campsite].centroid, campsite});
  }
  return map;
}

// ---------------------------------------------------------------------------
// Dog companion

enum class DogMode { InView, Returning };

struct DogState {
  Vec2 position;
  DogMode mode = DogMode::InView;
  std::optional<Vec2> current_target;
};

struct DogParams {
  double speed = 2.0;          // meters per tick while returning
  double follow_radius = 15.0; // wander stays within this range of the player
  double height = 0.5;         // probe height for the frustum test
  double wander_step = 1.0;
  std::uint64_t seed = 0;
};

struct DogTick {
  long tick = 0;
  Vec2 position;
  DogMode mode = DogMode::InView;
  bool in_view = false;
};

struct DogTrace {
  std::vector<DogTick> ticks;
  double in_view_fraction = 0.0;
};

// Per tick: while the dog sits inside the player frustum it wanders randomly
// but never steps out of view, follow range, or land; once out of view it
// heads straight for the nearest point inside the frustum (on its own ground
// plane, clamped to land) at full speed.
inline DogTrace simulate_dog(const IslandMap& map,
                             const std::vector<Pose>& player_trajectory,
                             const CameraModel& camera, const DogParams& params,
                             const Vec2& dog_start) {
  if (player_trajectory.empty())
    throw std::invalid_argument("simulate_dog: empty player trajectory");
  DogTrace trace;
  DogState dog;
  dog.position = map.on_land(dog_start) ? dog_start : map.nearest_land_point(dog_start);
  Rng rng = derive_rng(params.seed, "dog/wander");

  long in_view_count = 0;
  for (std::size_t t = 0; t < player_trajectory.size(); ++t) {
    const Pose& player = player_trajectory[t];
    const Vec3 probe{dog.position.x, params.height, dog.position.z};
    const bool contained = frustum_contains(player, camera, probe);
    dog.mode = contained ? DogMode::InView : DogMode::Returning;
    if (contained) {
      ++in_view_count;
      dog.current_target.reset();
      for (int attempt = 0; attempt < 8; ++attempt) {
        const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
        const Vec2 cand = dog.position +
                          Vec2{std::sin(angle), std::cos(angle)} * params.wander_step;
        const Vec3 cand_probe{cand.x, params.height, cand.z};
        const Vec2 player_ground{player.position.x, player.position.z};
        if (!frustum_contains(player, camera, cand_probe)) continue;
        if (dist(cand, player_ground) > params.follow_radius) continue;
        if (!map.on_land(cand)) continue;
        dog.position = cand;
        break;
      }
    } else {
      const Polygon2 slice = frustum_slice(player, camera, params.height);
      Vec2 target{player.position.x, player.position.z};
      if (!slice.empty()) {
        // aim a little inside the nearest frustum point; stopping exactly on
        // the boundary would leave the containment test forever undecided
        target = closest_point_in_polygon(slice, dog.position);
        const Vec2 inward = polygon_centroid(slice) - target;
        const double inward_len = norm(inward);
        if (inward_len > 1e-9)
          target = target + inward * (std::min(0.25, 0.5 * inward_len) / inward_len);
      }
      if (!map.on_land(target)) target = map.nearest_land_point(target);
      dog.current_target = target;
      const Vec2 d = target - dog.position;
      const double gap = norm(d);
      if (gap <= params.speed)
        dog.position = target;
      else
        dog.position = dog.position + d * (params.speed / gap);
      if (!map.on_land(dog.position))
        dog.position = map.nearest_land_point(dog.position);
    }
    trace.ticks.push_back({static_cast<long>(t), dog.position, dog.mode, contained});
  }
  trace.in_view_fraction =
      static_cast<double>(in_view_count) / static_cast<double>(player_trajectory.size());
  return trace;
}

inline std::string dog_csv(const DogTrace& trace) {
  std::string out = "tick,dog_x,dog_z,mode,in_view\n";
  char buf[96];
  for (const DogTick& t : trace.ticks) {
    std::snprintf(buf, sizeof(buf), "%ld,%.6f,%.6f,%s,%d\n", t.tick, t.position.x,
                  t.position.z, t.mode == DogMode::InView ? "InView" : "Returning",
                  t.in_view ? 1 : 0);
    out += buf;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Island file format

inline std::string save_island(const IslandMap& map) {
  using jsonu::json;
  json j;
  j["extent"] = map.extent;
  json sites = json::array();
  for (const Vec2& s : map.sites) sites.push_back(jsonu::vec2_json(s));
  j["sites"] = std::move(sites);
  json cells = json::array();
  for (const VoronoiCell& cell : map.cells) {
    json poly = json::array();
    for (const Vec2& v : cell.polygon) poly.push_back(jsonu::vec2_json(v));
    cells.push_back({{"polygon", std::move(poly)}, {"neighbors", cell.neighbors}});
  }
  j["cells"] = std::move(cells);
  json land = json::array();
  for (const auto f : map.land) land.push_back(f != 0);
  j["land"] = std::move(land);
  json decorations = json::array();
  for (const Decoration& d : map.decorations)
    decorations.push_back({{"kind", decoration_name(d.kind)},
                           {"x", d.position.x},
                           {"z", d.position.z},
                           {"cell", d.cell}});
  j["decorations"] = std::move(decorations);
  j["path"] = map.path_cells;
  j["spawn"] = map.spawn_cell;
  j["campsite"] = map.campsite_cell;
  return j.dump(2) + "\n";
}

inline IslandMap load_island(const std::string& text) {
  using jsonu::json;
  const json j = jsonu::parse_text(text);
  jsonu::check_keys(j, {"extent", "sites", "cells", "land", "decorations", "path",
                        "spawn", "campsite"},
                    "island");
  IslandMap map;
  map.extent = jsonu::as_number(jsonu::require(j, "extent", "island"), "extent");
  for (const json& sj : jsonu::require(j, "sites", "island"))
    map.sites.push_back(jsonu::as_vec2(sj, "site"));
  for (const json& cj : jsonu::require(j, "cells", "island")) {
    jsonu::check_keys(cj, {"polygon", "neighbors"}, "cell");
    VoronoiCell cell;
    for (const json& vj : jsonu::require(cj, "polygon", "cell"))
      cell.polygon.push_back(jsonu::as_vec2(vj, "cell vertex"));
    for (const json& nj : jsonu::require(cj, "neighbors", "cell"))
      cell.neighbors.push_back(nj.get<int>());
    cell.centroid = polygon_centroid(cell.polygon);
    map.cells.push_back(std::move(cell));
  }
  for (const json& lj : jsonu::require(j, "land", "island"))
    map.land.push_back(lj.get<bool>() ? 1 : 0);
  for (const json& dj : jsonu::require(j, "decorations", "island")) {
    jsonu::check_keys(dj, {"kind", "x", "z", "cell"}, "decoration");
    Decoration d;
    const std::string kind = jsonu::require(dj, "kind", "decoration").get<std::string>();
    bool found = false;
    for (const DecorationKind k :
         {DecorationKind::Tree, DecorationKind::Lilypad, DecorationKind::FenceSegment,
          DecorationKind::Rock, DecorationKind::PathStone, DecorationKind::Campsite,
          DecorationKind::Spawn}) {
      if (kind == decoration_name(k)) {
        d.kind = k;
        found = true;
        break;
      }
    }
    if (!found)
      throw ValidationError("bad-decoration", "unknown decoration kind '" + kind + "'");
    d.position = {jsonu::as_number(jsonu::require(dj, "x", "decoration"), "x"),
                  jsonu::as_number(jsonu::require(dj, "z", "decoration"), "z")};
    d.cell = jsonu::require(dj, "cell", "decoration").get<int>();
    map.decorations.push_back(std::move(d));
  }
  for (const json& pj : jsonu::require(j, "path", "island"))
    map.path_cells.push_back(pj.get<int>());
  map.spawn_cell = jsonu::require(j, "spawn", "island").get<int>();
  map.campsite_cell = jsonu::require(j, "campsite", "island").get<int>();
  if (map.land.size() != map.cells.size() || map.sites.size() != map.cells.size())
    throw ValidationError("size-mismatch", "island arrays disagree on cell count");
  return map;
}

}  // namespace walkgen
