#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <utility>

namespace conntraj {

// Point or vector in the horizontal plane, meters.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend constexpr Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
  friend constexpr Vec2 operator/(Vec2 a, double s) { return {a.x / s, a.y / s}; }
  constexpr Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
  constexpr Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
  friend constexpr bool operator==(Vec2, Vec2) = default;
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
constexpr double squared_norm(Vec2 a) { return dot(a, a); }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }
inline bool is_finite(Vec2 a) { return std::isfinite(a.x) && std::isfinite(a.y); }
constexpr Vec2 lerp(Vec2 a, Vec2 b, double t) { return a + t * (b - a); }

struct Disk {
  Vec2 center;
  double radius = 0.0;

  bool contains(Vec2 p, double tolerance = 0.0) const {
    return distance(p, center) <= radius + tolerance;
  }
};

// Closest point of the disk to p.
inline Vec2 project_onto_disk(Vec2 p, const Disk& disk) {
  const Vec2 offset = p - disk.center;
  const double d = norm(offset);
  if (d <= disk.radius) return p;
  return disk.center + (disk.radius / d) * offset;
}

// Boundary intersection points of two circles with equal radius. Returns
// nothing for coincident or separated circles; tangent circles give the same
// point twice.
inline std::optional<std::pair<Vec2, Vec2>> equal_circle_intersections(Vec2 a, Vec2 b,
                                                                       double radius) {
  const Vec2 axis = b - a;
  const double d = norm(axis);
  if (d == 0.0 || d > 2.0 * radius) return std::nullopt;
  const Vec2 mid = 0.5 * (a + b);
  const double half = 0.5 * d;
  // (r - half)(r + half) keeps precision for nearly tangent circles.
  const double h = std::sqrt(std::max(0.0, (radius - half) * (radius + half)));
  const Vec2 perp{-axis.y / d, axis.x / d};
  return std::pair{mid + h * perp, mid - h * perp};
}

// Parameter interval {t : |origin + t*direction - center| <= radius}.
// An empty optional means the line misses the disk. A zero direction yields
// the whole real line when origin lies in the disk.
struct Interval {
  double lo;
  double hi;
};
inline std::optional<Interval> line_disk_interval(Vec2 origin, Vec2 direction,
                                                  const Disk& disk) {
  const Vec2 rel = origin - disk.center;
  const double a = squared_norm(direction);
  const double c = squared_norm(rel) - disk.radius * disk.radius;
  if (a == 0.0) {
    if (c > 0.0) return std::nullopt;
    constexpr double inf = std::numeric_limits<double>::infinity();
    return Interval{-inf, inf};
  }
  const double b = dot(rel, direction);
  const double disc = b * b - a * c;
  if (disc < 0.0) return std::nullopt;
  const double root = std::sqrt(disc);
  return Interval{(-b - root) / a, (-b + root) / a};
}

}  // namespace conntraj
