#pragma once

// 3D primitives shared by every other module: vectors, axis-aligned boxes,
// poses, a pinhole camera frustum, and the 2D convex-polygon helpers used by
// the island generator and the companion simulation. All geometry is double
// precision; y is up.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace walkgen {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  bool operator==(const Vec3& o) const = default;
};

inline double dot(const Vec3& a, const Vec3& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}

inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

struct Vec2 {
  double x = 0.0;
  double z = 0.0;

  Vec2 operator+(const Vec2& o) const { return {x + o.x, z + o.z}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, z - o.z}; }
  Vec2 operator*(double s) const { return {x * s, z * s}; }
  bool operator==(const Vec2& o) const = default;
};

inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.z * b.z; }
inline double norm(const Vec2& a) { return std::sqrt(dot(a, a)); }
inline double dist(const Vec2& a, const Vec2& b) { return norm(a - b); }

// Axis-aligned ground rectangle, used for occluder footprints and surfaces.
struct Rect2 {
  Vec2 min;
  Vec2 max;

  bool contains(const Vec2& p) const {
    return p.x >= min.x && p.x <= max.x && p.z >= min.z && p.z <= max.z;
  }
  // Open-interval overlap: shared edges do not count.
  bool overlaps(const Rect2& o) const {
    return min.x < o.max.x && o.min.x < max.x && min.z < o.max.z && o.min.z < max.z;
  }
  Rect2 inflated(double r) const {
    return {{min.x - r, min.z - r}, {max.x + r, max.z + r}};
  }
};

struct Aabb {
  Vec3 min;
  Vec3 max;

  bool valid() const {
    return min.x <= max.x && min.y <= max.y && min.z <= max.z;
  }
  bool contains(const Vec3& p) const {
    return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y &&
           p.z >= min.z && p.z <= max.z;
  }
  Rect2 footprint() const { return {{min.x, min.z}, {max.x, max.z}}; }
  bool operator==(const Aabb& o) const = default;
};

struct CameraModel {
  double vertical_fov = 60.0 * std::numbers::pi / 180.0;
  double aspect = 16.0 / 9.0;
  double near = 0.1;
  double far = 200.0;

  bool valid() const {
    return vertical_fov > 0.0 && vertical_fov < std::numbers::pi &&
           aspect > 0.0 && near > 0.0 && near < far;
  }
};

// Position plus yaw about the up-axis; pitch is fixed at zero. Yaw 0 faces
// +z and increases counterclockwise viewed from above (+90 degrees faces +x).
struct Pose {
  Vec3 position;
  double yaw = 0.0;

  Vec3 forward() const { return {std::sin(yaw), 0.0, std::cos(yaw)}; }
  Vec3 right() const { return {std::cos(yaw), 0.0, -std::sin(yaw)}; }
};

inline double normalize_yaw(double yaw) {
  const double two_pi = 2.0 * std::numbers::pi;
  double y = std::fmod(yaw + std::numbers::pi, two_pi);
  if (y < 0.0) y += two_pi;
  return y - std::numbers::pi;
}

// Slab intersection of a full line against a box: the parameter interval
// [t_enter, t_exit], unclamped, or nullopt when the line misses a slab.
inline std::optional<std::pair<double, double>> ray_aabb_interval(
    const Vec3& origin, const Vec3& dir, const Aabb& box) {
  double t_lo = -std::numeric_limits<double>::infinity();
  double t_hi = std::numeric_limits<double>::infinity();
  const double o[3] = {origin.x, origin.y, origin.z};
  const double d[3] = {dir.x, dir.y, dir.z};
  const double lo[3] = {box.min.x, box.min.y, box.min.z};
  const double hi[3] = {box.max.x, box.max.y, box.max.z};
  for (int axis = 0; axis < 3; ++axis) {
    if (d[axis] == 0.0) {
      if (o[axis] < lo[axis] || o[axis] > hi[axis]) return std::nullopt;
      continue;
    }
    double t0 = (lo[axis] - o[axis]) / d[axis];
    double t1 = (hi[axis] - o[axis]) / d[axis];
    if (t0 > t1) std::swap(t0, t1);
    if (t0 > t_lo) t_lo = t0;
    if (t1 < t_hi) t_hi = t1;
    if (t_lo > t_hi) return std::nullopt;
  }
  return std::make_pair(t_lo, t_hi);
}

// Smallest t >= 0 with origin + t*dir inside-or-on the box; an origin inside
// the box yields t = 0.
inline std::optional<double> ray_aabb(const Vec3& origin, const Vec3& dir,
                                      const Aabb& box) {
  if (dir == Vec3{}) throw std::invalid_argument("ray_aabb: zero direction");
  const auto interval = ray_aabb_interval(origin, dir, box);
  if (!interval || interval->second < 0.0) return std::nullopt;
  return std::max(interval->first, 0.0);
}

// Frustum membership. Points exactly on a plane count as inside. Equivalent
// to the six-plane test with inward normals, written multiplicatively so no
// divisions happen on the hot path.
inline bool frustum_contains(const Pose& pose, const CameraModel& camera,
                             const Vec3& point) {
  const Vec3 d = point - pose.position;
  const double depth = dot(d, pose.forward());
  if (depth < camera.near || depth > camera.far) return false;
  const double tan_v = std::tan(0.5 * camera.vertical_fov);
  const double tan_h = tan_v * camera.aspect;
  if (std::abs(d.y) > depth * tan_v) return false;
  if (std::abs(dot(d, pose.right())) > depth * tan_h) return false;
  return true;
}

// True iff some occluder intersects the open segment p..q. Hit parameters
// are restricted to (eps, 1-eps) so rays terminating on a box's own surface
// do not count that box as blocking.
inline bool segment_occluded(const Vec3& p, const Vec3& q,
                             const std::vector<Aabb>& occluders,
                             double eps = 1e-4) {
  const Vec3 dir = q - p;
  for (const Aabb& box : occluders) {
    const auto interval = ray_aabb_interval(p, dir, box);
    if (!interval) continue;
    if (std::max(interval->first, eps) < std::min(interval->second, 1.0 - eps))
      return true;
  }
  return false;
}

// The 8 corners in lexicographic (x, y, z) order.
inline std::array<Vec3, 8> aabb_vertices(const Aabb& box) {
  std::array<Vec3, 8> v;
  for (int i = 0; i < 8; ++i) {
    v[i] = {(i & 4) ? box.max.x : box.min.x,
            (i & 2) ? box.max.y : box.min.y,
            (i & 1) ? box.max.z : box.min.z};
  }
  return v;
}

// ---------------------------------------------------------------------------
// Convex polygons on the ground plane (x, z), counterclockwise vertex order.

using Polygon2 = std::vector<Vec2>;

inline double polygon_area(const Polygon2& poly) {
  double twice = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % poly.size()];
    twice += a.x * b.z - b.x * a.z;
  }
  return 0.5 * twice;
}

inline Vec2 polygon_centroid(const Polygon2& poly) {
  double twice = 0.0;
  Vec2 c{0.0, 0.0};
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % poly.size()];
    const double cross = a.x * b.z - b.x * a.z;
    twice += cross;
    c.x += (a.x + b.x) * cross;
    c.z += (a.z + b.z) * cross;
  }
  if (std::abs(twice) < 1e-12) {
    Vec2 avg{0.0, 0.0};
    for (const Vec2& v : poly) avg = avg + v;
    return avg * (poly.empty() ? 0.0 : 1.0 / static_cast<double>(poly.size()));
  }
  return c * (1.0 / (3.0 * twice));
}

// Half-plane {p : dot(n, p) <= c}.
struct HalfPlane2 {
  Vec2 n;
  double c = 0.0;

  double signed_dist(const Vec2& p) const { return dot(n, p) - c; }
};

// Sutherland-Hodgman clip of a convex polygon against one half-plane.
inline Polygon2 clip_polygon(const Polygon2& poly, const HalfPlane2& hp) {
  Polygon2 out;
  const std::size_t n = poly.size();
  if (n == 0) return out;
  out.reserve(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % n];
    const double da = hp.signed_dist(a);
    const double db = hp.signed_dist(b);
    if (da <= 0.0) {
      out.push_back(a);
      if (db > 0.0) {
        const double t = da / (da - db);
        out.push_back(a + (b - a) * t);
      }
    } else if (db <= 0.0) {
      const double t = da / (da - db);
      out.push_back(a + (b - a) * t);
    }
  }
  return out;
}

inline bool polygon_contains(const Polygon2& poly, const Vec2& p,
                             double tol = 1e-9) {
  const std::size_t n = poly.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % n];
    const double cross = (b.x - a.x) * (p.z - a.z) - (b.z - a.z) * (p.x - a.x);
    if (cross < -tol) return false;
  }
  return true;
}

inline Vec2 closest_point_on_segment(const Vec2& a, const Vec2& b, const Vec2& p) {
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 <= 0.0) return a;
  const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return a + ab * t;
}

inline Vec2 closest_point_in_polygon(const Polygon2& poly, const Vec2& p) {
  if (polygon_contains(poly, p)) return p;
  double best_d2 = std::numeric_limits<double>::infinity();
  Vec2 best = p;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec2 q =
        closest_point_on_segment(poly[i], poly[(i + 1) % poly.size()], p);
    const Vec2 d = q - p;
    const double d2 = dot(d, d);
    if (d2 < best_d2) {
      best_d2 = d2;
      best = q;
    }
  }
  return best;
}

// Horizontal cross-section of the view frustum at the given height: the six
// frustum planes intersected with y = height, clipped against a bounding
// square around the camera. Empty when the plane misses the frustum.
inline Polygon2 frustum_slice(const Pose& pose, const CameraModel& camera,
                              double height) {
  const double pad = camera.far + 1.0;
  Polygon2 poly{{pose.position.x - pad, pose.position.z - pad},
                {pose.position.x + pad, pose.position.z - pad},
                {pose.position.x + pad, pose.position.z + pad},
                {pose.position.x - pad, pose.position.z + pad}};
  const Vec3 f = pose.forward();
  const Vec3 r = pose.right();
  const Vec3 e = pose.position;
  const double tan_v = std::tan(0.5 * camera.vertical_fov);
  const double tan_h = tan_v * camera.aspect;
  const double dy = height - e.y;

  // Each inward frustum condition dot(n, p - e) >= k becomes, at y = height,
  // the 2D half-plane -n.x*x - n.z*z <= -(k - n.y*dy) - (n.x*e.x + n.z*e.z).
  const auto clip = [&](const Vec3& n, double k) {
    const double rhs = -(k - n.y * dy) - (n.x * e.x + n.z * e.z);
    poly = clip_polygon(poly, HalfPlane2{{-n.x, -n.z}, rhs});
  };
  clip(f, camera.near);                                // near: depth >= near
  clip({-f.x, -f.y, -f.z}, -camera.far);               // far:  depth <= far
  clip({tan_h * f.x - r.x, 0.0, tan_h * f.z - r.z}, 0); // right edge
  clip({tan_h * f.x + r.x, 0.0, tan_h * f.z + r.z}, 0); // left edge
  clip({tan_v * f.x, 1.0, tan_v * f.z}, 0.0);           // bottom edge
  clip({tan_v * f.x, -1.0, tan_v * f.z}, 0.0);          // top edge
  if (polygon_area(poly) < 1e-12) return {};
  return poly;
}

}  // namespace walkgen
