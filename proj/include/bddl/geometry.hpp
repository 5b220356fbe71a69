#pragma once

#include <array>
#include <cmath>

namespace bddl {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Vec3 operator*(Vec3 a, double s) { return {a.x * s, a.y * s, a.z * s}; }
  friend bool operator==(const Vec3&, const Vec3&) = default;

  double operator[](int axis) const { return axis == 0 ? x : (axis == 1 ? y : z); }
  double& operator[](int axis) { return axis == 0 ? x : (axis == 1 ? y : z); }
  double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

inline double horizontal_distance(Vec3 a, Vec3 b) { return std::hypot(a.x - b.x, a.y - b.y); }

struct Aabb {
  Vec3 min;
  Vec3 max;

  static Aabb from_center(Vec3 center, Vec3 half) { return {center - half, center + half}; }

  Vec3 center() const { return (min + max) * 0.5; }
  Vec3 half_extents() const { return (max - min) * 0.5; }
  double volume() const { return (max.x - min.x) * (max.y - min.y) * (max.z - min.z); }
  double diagonal() const { return (max - min).norm(); }

  // Closed-box membership.
  bool contains(Vec3 p) const {
    return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y && p.z >= min.z && p.z <= max.z;
  }
  bool contains(const Aabb& o) const {
    return o.min.x >= min.x && o.max.x <= max.x && o.min.y >= min.y && o.max.y <= max.y &&
           o.min.z >= min.z && o.max.z <= max.z;
  }
  // Positive-volume intersection; touching faces do not count.
  bool overlaps(const Aabb& o) const {
    return min.x < o.max.x && o.min.x < max.x && min.y < o.max.y && o.min.y < max.y && min.z < o.max.z &&
           o.min.z < max.z;
  }
};

// L2 distance between the closest points of two boxes (0 when they touch or
// overlap).
double box_distance(const Aabb& a, const Aabb& b);
double point_box_distance(Vec3 p, const Aabb& b);

// Axis-aligned half extents of a box rotated by `yaw` about +z.
Vec3 rotated_half_extents(Vec3 half, double yaw);

struct Rect {
  double xmin = 0.0;
  double ymin = 0.0;
  double xmax = 0.0;
  double ymax = 0.0;

  bool contains(double x, double y) const { return x >= xmin && x <= xmax && y >= ymin && y <= ymax; }
  bool overlaps(const Rect& o) const { return xmin < o.xmax && o.xmin < xmax && ymin < o.ymax && o.ymin < ymax; }
  friend bool operator==(const Rect&, const Rect&) = default;
};

// Slab test. Returns the entry distance (>= 0) along a unit `dir`, or a
// negative value when the ray misses. Zero direction components use closed
// slab membership.
double ray_box_distance(Vec3 origin, Vec3 dir, const Aabb& box);

}  // namespace bddl
