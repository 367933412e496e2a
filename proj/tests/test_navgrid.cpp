#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "walkgen/navgrid.hpp"
#include "walkgen/rng.hpp"

using namespace walkgen;

namespace {

LevelTemplate square_template(double extent = 20.0) {
  LevelTemplate t;
  t.surface_x = extent;
  t.surface_z = extent;
  t.start = {1.0, 1.0};
  t.end = {extent - 1.0, extent - 1.0};
  return t;
}

NavGrid random_grid(Rng& rng, int size, double block_rate) {
  NavGrid grid;
  grid.cell_size = 0.5;
  grid.width = size;
  grid.height = size;
  grid.blocked.assign(static_cast<std::size_t>(size) * size, 0);
  for (auto& cell : grid.blocked) cell = rng.bernoulli(block_rate) ? 1 : 0;
  return grid;
}

double distance_to_polyline(const Vec2& p, const std::vector<Vec2>& pts) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < pts.size(); ++i)
    best = std::min(best, dist(closest_point_on_segment(pts[i - 1], pts[i], p), p));
  return pts.size() == 1 ? dist(pts[0], p) : best;
}

}  // namespace

TEST_CASE("empty surface discretizes with no blocked cells") {
  const NavGrid grid = build_navgrid(square_template(), {}, 0.5, 0.4);
  CHECK(grid.width == 40);
  CHECK(grid.height == 40);
  for (const auto cell : grid.blocked) CHECK(cell == 0);
  CHECK(grid.feasible);
}

TEST_CASE("a 2x2 footprint blocks exactly the overlapped cells") {
  const Rect2 fp{{9.0, 9.0}, {11.0, 11.0}};
  const NavGrid grid = build_navgrid(square_template(), {fp}, 0.5, 0.0);
  int blocked_count = 0;
  for (int iz = 0; iz < grid.height; ++iz) {
    for (int ix = 0; ix < grid.width; ++ix) {
      const Rect2 cell{{ix * 0.5, iz * 0.5}, {ix * 0.5 + 0.5, iz * 0.5 + 0.5}};
      const bool expect = cell.overlaps(fp);
      CHECK(grid.is_blocked({ix, iz}) == expect);
      blocked_count += grid.is_blocked({ix, iz}) ? 1 : 0;
    }
  }
  CHECK(blocked_count == 16);
}

TEST_CASE("a footprint over the start cell flags infeasibility") {
  const Rect2 fp{{0.0, 0.0}, {2.0, 2.0}};
  const NavGrid grid = build_navgrid(square_template(), {fp}, 0.5, 0.0);
  CHECK_FALSE(grid.feasible);
}

TEST_CASE("cell_size larger than the surface is rejected") {
  CHECK_THROWS_AS(build_navgrid(square_template(), {}, 25.0, 0.0),
                  std::invalid_argument);
}

TEST_CASE("astar crosses an empty 5x5 grid in 9 cells") {
  NavGrid grid;
  grid.width = grid.height = 5;
  grid.cell_size = 1.0;
  grid.blocked.assign(25, 0);
  const auto path = astar(grid, {0, 0}, {4, 4});
  REQUIRE(path.has_value());
  CHECK(path->size() == 9);
}

TEST_CASE("astar matches the BFS oracle on 100 random grids") {
  Rng rng(301);
  for (int i = 0; i < 100; ++i) {
    const NavGrid grid = random_grid(rng, 20, 0.25);
    const GridCell start{0, 0};
    const GridCell goal{19, 19};
    const auto path = astar(grid, start, goal);
    const int bfs = oracles::bfs_distance(grid, start, goal);
    if (bfs < 0) {
      CHECK_FALSE(path.has_value());
    } else {
      REQUIRE(path.has_value());
      CHECK(static_cast<int>(path->size()) == bfs + 1);
    }
  }
}

TEST_CASE("astar through a single gap matches BFS") {
  NavGrid grid;
  grid.width = grid.height = 11;
  grid.cell_size = 1.0;
  grid.blocked.assign(121, 0);
  for (int iz = 0; iz < 11; ++iz)
    if (iz != 7) grid.blocked[static_cast<std::size_t>(iz) * 11 + 5] = 1;
  const auto path = astar(grid, {0, 0}, {10, 10});
  REQUIRE(path.has_value());
  CHECK(static_cast<int>(path->size()) ==
        oracles::bfs_distance(grid, {0, 0}, {10, 10}) + 1);
}

TEST_CASE("astar reports a walled-off goal as unreachable") {
  NavGrid grid;
  grid.width = grid.height = 5;
  grid.cell_size = 1.0;
  grid.blocked.assign(25, 0);
  // box in the corner: goal (4,4) surrounded by (3,4) and (4,3)
  grid.blocked[4 * 5 + 3] = 1;
  grid.blocked[3 * 5 + 4] = 1;
  CHECK_FALSE(astar(grid, {0, 0}, {4, 4}).has_value());
}

TEST_CASE("astar is deterministic and returns a valid path") {
  Rng rng(302);
  for (int i = 0; i < 20; ++i) {
    const NavGrid grid = random_grid(rng, 25, 0.2);
    const auto a = astar(grid, {0, 0}, {24, 24});
    const auto b = astar(grid, {0, 0}, {24, 24});
    REQUIRE(bool(a) == bool(b));
    if (!a) continue;
    CHECK(*a == *b);
    for (std::size_t k = 0; k < a->size(); ++k) {
      CHECK_FALSE(grid.is_blocked((*a)[k]));
      if (k > 0) {
        const int manhattan = std::abs((*a)[k].ix - (*a)[k - 1].ix) +
                              std::abs((*a)[k].iz - (*a)[k - 1].iz);
        CHECK(manhattan == 1);
      }
    }
  }
}

TEST_CASE("a straight 10 m path samples into 41 poses with one heading") {
  NavGrid grid;
  grid.width = 40;
  grid.height = 40;
  grid.cell_size = 0.5;
  grid.blocked.assign(1600, 0);
  std::vector<GridCell> path;
  for (int i = 0; i < 21; ++i) path.push_back({i, 5});
  const auto samples = sample_walk(path, grid, 1.6, 0.25);
  REQUIRE(samples.size() == 41);
  for (const WalkSample& s : samples) {
    CHECK(s.pose.yaw == samples[0].pose.yaw);
    CHECK(s.pose.position.y == 1.6);
  }
  CHECK(samples.back().arc_length == Catch::Approx(10.0));
}

TEST_CASE("an L-shaped path changes heading exactly once, at the corner") {
  NavGrid grid;
  grid.width = 40;
  grid.height = 40;
  grid.cell_size = 0.5;
  grid.blocked.assign(1600, 0);
  std::vector<GridCell> path;
  for (int i = 0; i <= 8; ++i) path.push_back({i, 3});
  for (int j = 4; j <= 10; ++j) path.push_back({8, j});
  const auto samples = sample_walk(path, grid, 1.6, 0.25);
  int changes = 0;
  std::size_t change_at = 0;
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (samples[i].pose.yaw != samples[i - 1].pose.yaw) {
      ++changes;
      change_at = i;
    }
  }
  CHECK(changes == 1);
  // corner cell center (4.25, 1.75) sits at arc length 4.0 from (0.25, 1.75)
  CHECK(samples[change_at].arc_length == Catch::Approx(4.0));
}

TEST_CASE("sample spacing and polyline membership hold on random paths") {
  Rng rng(303);
  int checked = 0;
  while (checked < 25) {
    const NavGrid grid = random_grid(rng, 15, 0.2);
    const auto path = astar(grid, {0, 0}, {14, 14});
    if (!path) continue;
    ++checked;
    // divisors of the cell size, so samples land exactly on polyline corners
    const double options[3] = {0.125, 0.25, 0.5};
    const double spacing = options[rng.uniform_index(3)];
    const auto samples = sample_walk(*path, grid, 1.6, spacing);

    std::vector<Vec2> polyline;
    for (const GridCell& c : *path) polyline.push_back(grid.cell_center(c));
    double polyline_len = 0.0;
    for (std::size_t i = 1; i < polyline.size(); ++i)
      polyline_len += dist(polyline[i - 1], polyline[i]);

    double walked = 0.0;
    for (std::size_t i = 1; i < samples.size(); ++i) {
      const Vec3 d = samples[i].pose.position - samples[i - 1].pose.position;
      walked += std::sqrt(d.x * d.x + d.z * d.z);
      if (i + 1 < samples.size()) {
        const double gap = samples[i].arc_length - samples[i - 1].arc_length;
        CHECK(gap == Catch::Approx(spacing).margin(1e-9));
      }
    }
    CHECK(std::abs(samples.back().arc_length - polyline_len) < 1e-9);
    CHECK(std::abs(walked - polyline_len) < 1e-9);
    for (const WalkSample& s : samples) {
      CHECK(distance_to_polyline({s.pose.position.x, s.pose.position.z}, polyline) <
            1e-9);
    }
  }
}
