#include <catch2/catch_amalgamated.hpp>

#include "walkgen/svg.hpp"
#include "walkgen/visibility.hpp"

using namespace walkgen;

namespace {

std::size_t count_of(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (std::size_t pos = text.find(needle); pos != std::string::npos;
       pos = text.find(needle, pos + needle.size()))
    ++n;
  return n;
}

}  // namespace

TEST_CASE("an empty level renders only the surface rectangle") {
  LevelTemplate t;
  const std::string svg = render_level_svg(t, {});
  CHECK(count_of(svg, "<rect") == 1);
  CHECK(count_of(svg, "</svg>") == 1);
}

TEST_CASE("a met MustSee marker renders as exactly one green element") {
  LevelTemplate t;
  t.start = {1.0, 10.0};
  t.end = {19.0, 10.0};
  t.markers.push_back(
      {"m0", {{9.5, 0.0, 10.5}, {10.5, 1.0, 11.5}}, MarkerConstraint::MustSee});
  const auto [report, trace] = evaluate_level(t, {});
  REQUIRE(report.per_marker_met[0]);
  const std::string svg = render_level_svg(t, {}, &report, &trace);
  CHECK(count_of(svg, "#2e7d32") == 1);  // met markers are green
  CHECK(count_of(svg, "#c62828") == 0);
  CHECK(count_of(svg, "<polyline") == 1);  // the walk path
}

TEST_CASE("unmet markers render red and occluders grey") {
  LevelTemplate t;
  t.start = {1.0, 10.0};
  t.end = {19.0, 10.0};
  t.markers.push_back({"m0",
                       {{9.5, 0.0, 10.5}, {10.5, 1.0, 11.5}},
                       MarkerConstraint::MustStayHidden});
  const std::vector<Aabb> occluders{{{5.0, 0.0, 5.0}, {6.0, 2.0, 6.0}}};
  const auto [report, trace] = evaluate_level(t, occluders);
  REQUIRE_FALSE(report.per_marker_met[0]);
  const std::string svg = render_level_svg(t, occluders, &report, &trace);
  CHECK(count_of(svg, "#c62828") == 1);
  CHECK(count_of(svg, "#9b9b9b") == 1);
}

TEST_CASE("renders are byte-identical across calls") {
  const IslandMap map = generate_island({}, 4);
  CHECK(render_island_svg(map) == render_island_svg(map));

  LevelTemplate t;
  const auto [report, trace] = evaluate_level(t, {});
  CHECK(render_level_svg(t, {}, &report, &trace) ==
        render_level_svg(t, {}, &report, &trace));
}

TEST_CASE("OBJ export writes eight vertices and six faces per box") {
  const std::string obj = export_obj({{{0, 0, 0}, {1, 2, 3}}, {{4, 0, 4}, {5, 1, 5}}});
  CHECK(count_of(obj, "\nv ") + (obj.rfind("v ", 0) == 0 ? 1 : 0) == 16);
  CHECK(count_of(obj, "\nf ") == 12);
  CHECK(obj.find("v 1.000000 2.000000 3.000000") != std::string::npos);
}
