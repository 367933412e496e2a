#include <catch2/catch_amalgamated.hpp>

#include <queue>
#include <set>

#include "oracles.hpp"
#include "walkgen/islandgen.hpp"

using namespace walkgen;

namespace {

int land_count(const IslandMap& map) {
  int n = 0;
  for (const auto f : map.land) n += f;
  return n;
}

bool land_is_connected(const IslandMap& map) {
  std::vector<int> land_cells;
  for (std::size_t i = 0; i < map.cells.size(); ++i)
    if (map.land[i]) land_cells.push_back(static_cast<int>(i));
  if (land_cells.empty()) return false;
  std::set<int> seen{land_cells[0]};
  std::queue<int> queue;
  queue.push(land_cells[0]);
  while (!queue.empty()) {
    const int cur = queue.front();
    queue.pop();
    for (const int nb : map.cells[cur].neighbors) {
      if (!map.land[nb] || seen.count(nb)) continue;
      seen.insert(nb);
      queue.push(nb);
    }
  }
  return seen.size() == land_cells.size();
}

int bfs_hops(const IslandMap& map, int from, int to) {
  std::vector<int> dist(map.cells.size(), -1);
  std::queue<int> queue;
  dist[from] = 0;
  queue.push(from);
  while (!queue.empty()) {
    const int cur = queue.front();
    queue.pop();
    if (cur == to) return dist[cur];
    for (const int nb : map.cells[cur].neighbors) {
      if (!map.land[nb] || dist[nb] >= 0) continue;
      dist[nb] = dist[cur] + 1;
      queue.push(nb);
    }
  }
  return -1;
}

}  // namespace

TEST_CASE("two sites split the plane into two adjacent half-plane cells") {
  const IslandMap map = generate_voronoi(100.0, 2, 11);
  REQUIRE(map.cells.size() == 2);
  CHECK(map.cells[0].neighbors == std::vector<int>{1});
  CHECK(map.cells[1].neighbors == std::vector<int>{0});
  const double total = polygon_area(map.cells[0].polygon) +
                       polygon_area(map.cells[1].polygon);
  CHECK(total == Catch::Approx(100.0 * 100.0));
}

TEST_CASE("every probe point lands in the cell of its nearest site") {
  const IslandMap map = generate_voronoi(100.0, 40, 12);
  for (int px = 0; px < 50; ++px) {
    for (int pz = 0; pz < 50; ++pz) {
      const Vec2 probe{2.0 * px + 1.0, 2.0 * pz + 1.0};
      int nearest = 0;
      double best = 1e18, second = 1e18;
      for (std::size_t s = 0; s < map.sites.size(); ++s) {
        const double d = dist(map.sites[s], probe);
        if (d < best) {
          second = best;
          best = d;
          nearest = static_cast<int>(s);
        } else {
          second = std::min(second, d);
        }
      }
      if (second - best < 1e-6) continue;  // near a boundary, either side fine
      CHECK(polygon_contains(map.cells[nearest].polygon, probe, 1e-7));
      CHECK(oracles::point_in_polygon_crossing(map.cells[nearest].polygon, probe));
    }
  }
}

TEST_CASE("voronoi generation is deterministic per seed") {
  const IslandMap a = generate_voronoi(100.0, 30, 77);
  const IslandMap b = generate_voronoi(100.0, 30, 77);
  CHECK(a.sites == b.sites);
  REQUIRE(a.cells.size() == b.cells.size());
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    CHECK(a.cells[i].polygon == b.cells[i].polygon);
    CHECK(a.cells[i].neighbors == b.cells[i].neighbors);
  }
  const IslandMap c = generate_voronoi(100.0, 30, 78);
  CHECK(a.sites != c.sites);
}

TEST_CASE("a one-step walk creates exactly one land cell") {
  IslandMap map = generate_voronoi(100.0, 30, 13);
  walk_landmass(map, 1, 13);
  CHECK(land_count(map) == 1);
}

TEST_CASE("walked land is one connected component over 100 seeds") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    IslandMap map = generate_voronoi(60.0, 24, seed);
    walk_landmass(map, 12, seed);
    CHECK(land_is_connected(map));
    CHECK(land_count(map) >= 1);
    CHECK(land_count(map) <= 12);
  }
}

TEST_CASE("zero decoration parameters produce no decorations") {
  IslandMap map = generate_voronoi(100.0, 30, 14);
  walk_landmass(map, 10, 14);
  decorate(map, {0.0, 0.0, 0.0, 0.0}, 14);
  CHECK(map.decorations.empty());
}

TEST_CASE("fence probability one fences every land-water border") {
  IslandMap map = generate_voronoi(100.0, 30, 15);
  walk_landmass(map, 10, 15);
  DecorationParams params{1.0, 0.0, 0.0, 0.0};
  decorate(map, params, 15);
  std::size_t border_edges = 0;
  for (std::size_t i = 0; i < map.cells.size(); ++i)
    for (const int j : map.cells[i].neighbors)
      if (static_cast<int>(i) < j && map.land[i] != map.land[j]) ++border_edges;
  CHECK(map.decorations.size() == border_edges);
  for (const Decoration& d : map.decorations)
    CHECK(d.kind == DecorationKind::FenceSegment);
}

TEST_CASE("trees and rocks grow on land, lilypads float on water") {
  IslandMap map = generate_voronoi(100.0, 40, 16);
  walk_landmass(map, 18, 16);
  decorate(map, {0.5, 0.03, 0.01, 0.008}, 16);
  REQUIRE(!map.decorations.empty());
  bool saw_tree = false, saw_lily = false;
  for (const Decoration& d : map.decorations) {
    if (d.kind == DecorationKind::FenceSegment) continue;
    const VoronoiCell& cell = map.cells[d.cell];
    CHECK(polygon_contains(cell.polygon, d.position, 1e-7));
    if (d.kind == DecorationKind::Tree || d.kind == DecorationKind::Rock) {
      saw_tree |= d.kind == DecorationKind::Tree;
      CHECK(map.is_land(d.cell));
    } else if (d.kind == DecorationKind::Lilypad) {
      saw_lily = true;
      CHECK_FALSE(map.is_land(d.cell));
    }
    // cross-check with the independent crossing-number oracle away from edges
    if (oracles::distance_to_polygon_boundary(cell.polygon, d.position) > 1e-7)
      CHECK(oracles::point_in_polygon_crossing(cell.polygon, d.position));
  }
  CHECK(saw_tree);
  CHECK(saw_lily);
}

TEST_CASE("endpoints maximize centroid distance over all land pairs") {
  for (std::uint64_t seed = 20; seed < 30; ++seed) {
    IslandMap map = generate_voronoi(100.0, 30, seed);
    walk_landmass(map, 14, seed);
    if (land_count(map) < 2) continue;
    const auto [spawn, campsite] = place_endpoints(map);
    REQUIRE(spawn != campsite);
    CHECK(map.is_land(spawn));
    CHECK(map.is_land(campsite));
    const double chosen = dist(map.cells[spawn].centroid, map.cells[campsite].centroid);
    for (std::size_t a = 0; a < map.cells.size(); ++a)
      for (std::size_t b = a + 1; b < map.cells.size(); ++b)
        if (map.land[a] && map.land[b])
          CHECK(dist(map.cells[a].centroid, map.cells[b].centroid) <= chosen + 1e-12);
    CHECK(map.cells[spawn].centroid.x <= map.cells[campsite].centroid.x);
    const auto again = place_endpoints(map);
    CHECK(again.first == spawn);
    CHECK(again.second == campsite);
  }
}

TEST_CASE("place_endpoints needs two land cells") {
  IslandMap map = generate_voronoi(100.0, 30, 31);
  walk_landmass(map, 1, 31);
  CHECK_THROWS_AS(place_endpoints(map), std::invalid_argument);
}

TEST_CASE("lay_path from a cell to itself is that single cell") {
  IslandMap map = generate_voronoi(100.0, 30, 32);
  walk_landmass(map, 10, 32);
  int land_cell = -1;
  for (std::size_t i = 0; i < map.cells.size(); ++i)
    if (map.land[i]) {
      land_cell = static_cast<int>(i);
      break;
    }
  REQUIRE(land_cell >= 0);
  const auto path = lay_path(map, land_cell, land_cell);
  CHECK(path == std::vector<int>{land_cell});
}

TEST_CASE("lay_path matches BFS hop counts and stays on land") {
  for (std::uint64_t seed = 40; seed < 60; ++seed) {
    IslandMap map = generate_voronoi(100.0, 40, seed);
    walk_landmass(map, 20, seed);
    if (land_count(map) < 2) continue;
    const auto [spawn, campsite] = place_endpoints(map);
    const auto path = lay_path(map, spawn, campsite);
    REQUIRE(!path.empty());
    CHECK(path.front() == spawn);
    CHECK(path.back() == campsite);
    for (const int cell : path) CHECK(map.is_land(cell));
    CHECK(static_cast<int>(path.size()) == bfs_hops(map, spawn, campsite) + 1);
  }
}

TEST_CASE("the full island pipeline is deterministic") {
  IslandParams params;
  params.n_sites = 40;
  params.walk_steps = 25;
  const IslandMap a = generate_island(params, 123);
  const IslandMap b = generate_island(params, 123);
  CHECK(a.sites == b.sites);
  CHECK(a.land == b.land);
  CHECK(a.path_cells == b.path_cells);
  CHECK(a.spawn_cell == b.spawn_cell);
  REQUIRE(a.decorations.size() == b.decorations.size());
  for (std::size_t i = 0; i < a.decorations.size(); ++i) {
    CHECK(a.decorations[i].kind == b.decorations[i].kind);
    CHECK(a.decorations[i].position == b.decorations[i].position);
  }
  CHECK(save_island(a) == save_island(b));
}

TEST_CASE("island JSON round-trips") {
  const IslandMap map = generate_island({}, 9);
  const IslandMap back = load_island(save_island(map));
  CHECK(back.sites == map.sites);
  CHECK(back.land == map.land);
  CHECK(back.path_cells == map.path_cells);
  CHECK(back.spawn_cell == map.spawn_cell);
  CHECK(back.campsite_cell == map.campsite_cell);
  REQUIRE(back.cells.size() == map.cells.size());
  for (std::size_t i = 0; i < map.cells.size(); ++i)
    CHECK(back.cells[i].polygon == map.cells[i].polygon);
}

TEST_CASE("a dog inside the frustum stays in view of a stationary player") {
  IslandMap map = generate_voronoi(100.0, 30, 50);
  map.land.assign(map.cells.size(), 1);  // all land: nothing to step off
  const Pose player{{50.0, 1.6, 30.0}, 0.0};
  const std::vector<Pose> trajectory(60, player);
  DogParams params;
  params.seed = 5;
  const DogTrace trace = simulate_dog(map, trajectory, {}, params, {50.0, 40.0});
  CHECK(trace.in_view_fraction == 1.0);
  for (const DogTick& t : trace.ticks) CHECK(t.mode == DogMode::InView);
}

TEST_CASE("a dog behind the player closes in on the frustum monotonically") {
  IslandMap map = generate_voronoi(100.0, 30, 51);
  map.land.assign(map.cells.size(), 1);
  const Pose player{{50.0, 1.6, 50.0}, 0.0};  // facing +z
  const std::vector<Pose> trajectory(120, player);
  const CameraModel camera;
  DogParams params;
  params.seed = 6;
  const Vec2 start{50.0, 30.0};  // 20 m behind
  const DogTrace trace = simulate_dog(map, trajectory, camera, params, start);

  const Polygon2 slice = frustum_slice(player, camera, params.height);
  REQUIRE(!slice.empty());
  const double initial_gap = dist(closest_point_in_polygon(slice, start), start);
  const long bound = static_cast<long>(std::ceil(initial_gap / params.speed)) + 2;

  long first_in_view = -1;
  double last_gap = 1e18;
  for (const DogTick& t : trace.ticks) {
    if (t.in_view) {
      first_in_view = t.tick;
      break;
    }
    const double gap = dist(closest_point_in_polygon(slice, t.position), t.position);
    CHECK(gap < last_gap);
    last_gap = gap;
  }
  REQUIRE(first_in_view >= 0);
  CHECK(first_in_view <= bound);
}

TEST_CASE("the dog never leaves land") {
  IslandParams params;
  params.n_sites = 40;
  params.walk_steps = 25;
  const IslandMap map = generate_island(params, 52);
  REQUIRE(map.spawn_cell >= 0);
  const Vec2 from = map.cells[map.spawn_cell].centroid;
  const Vec2 to = map.cells[map.campsite_cell].centroid;
  const Vec2 dir = to - from;
  const double len = norm(dir);
  const Vec2 unit = dir * (1.0 / len);
  std::vector<Pose> trajectory;
  for (int t = 0; t < 150; ++t) {
    const Vec2 p = from + unit * std::min(static_cast<double>(t), len);
    trajectory.push_back({{p.x, 1.6, p.z}, std::atan2(unit.x, unit.z)});
  }
  DogParams dog_params;
  dog_params.seed = 52;
  const DogTrace trace =
      simulate_dog(map, trajectory, {}, dog_params, from - unit * 5.0);
  for (const DogTick& t : trace.ticks) CHECK(map.on_land(t.position));
}

TEST_CASE("dog trace CSV carries mode and in_view columns") {
  IslandMap map = generate_voronoi(100.0, 20, 53);
  map.land.assign(map.cells.size(), 1);
  const Pose player{{50.0, 1.6, 50.0}, 0.0};
  DogParams params;
  const DogTrace trace = simulate_dog(map, {player, player}, {}, params, {50.0, 55.0});
  const std::string csv = dog_csv(trace);
  CHECK(csv.rfind("tick,dog_x,dog_z,mode,in_view\n", 0) == 0);
  CHECK(csv.find("InView") != std::string::npos);
}
