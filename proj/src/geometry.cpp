#include "bddl/geometry.hpp"

#include <algorithm>
#include <limits>

namespace bddl {

namespace {

double axis_gap(double amin, double amax, double bmin, double bmax) {
  if (amax < bmin) return bmin - amax;
  if (bmax < amin) return amin - bmax;
  return 0.0;
}

}  // namespace

double box_distance(const Aabb& a, const Aabb& b) {
  double dx = axis_gap(a.min.x, a.max.x, b.min.x, b.max.x);
  double dy = axis_gap(a.min.y, a.max.y, b.min.y, b.max.y);
  double dz = axis_gap(a.min.z, a.max.z, b.min.z, b.max.z);
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

double point_box_distance(Vec3 p, const Aabb& b) {
  double dx = axis_gap(p.x, p.x, b.min.x, b.max.x);
  double dy = axis_gap(p.y, p.y, b.min.y, b.max.y);
  double dz = axis_gap(p.z, p.z, b.min.z, b.max.z);
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

Vec3 rotated_half_extents(Vec3 half, double yaw) {
  if (yaw == 0.0) return half;
  double c = std::abs(std::cos(yaw));
  double s = std::abs(std::sin(yaw));
  return {c * half.x + s * half.y, s * half.x + c * half.y, half.z};
}

double ray_box_distance(Vec3 origin, Vec3 dir, const Aabb& box) {
  double tmin = 0.0;
  double tmax = std::numeric_limits<double>::infinity();
  for (int axis = 0; axis < 3; ++axis) {
    double o = origin[axis];
    double d = dir[axis];
    double lo = box.min[axis];
    double hi = box.max[axis];
    if (d == 0.0) {
      if (o < lo || o > hi) return -1.0;
      continue;
    }
    double t1 = (lo - o) / d;
    double t2 = (hi - o) / d;
    if (t1 > t2) std::swap(t1, t2);
    tmin = std::max(tmin, t1);
    tmax = std::min(tmax, t2);
    if (tmin > tmax) return -1.0;
  }
  return tmin;
}

}  // namespace bddl
