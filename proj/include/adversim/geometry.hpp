#pragma once

#include "adversim/scenario.hpp"

#include <array>

namespace adversim {

struct OrientedBox {
  Vec2 center = Vec2::Zero();
  double heading = 0.0;
  double half_length = kDefaultHalfLength;
  double half_width = kDefaultHalfWidth;

  /// Counter-clockwise corners: front-left, rear-left, rear-right, front-right.
  std::array<Vec2, 4> corners() const;
  Vec2 axis_long() const;
  Vec2 axis_lat() const;
  bool contains(const Vec2& p) const;
};

OrientedBox box_of(const AgentState& s);

/// Derivative of a scalar with respect to one box's pose.
struct BoxGradient {
  Vec2 center = Vec2::Zero();
  double heading = 0.0;
};

struct BoxDistance {
  double distance = 0.0;
  BoxGradient grad_a;
  BoxGradient grad_b;
};

/// Separating-axis test over the four box axes. Touching boxes overlap.
bool boxes_overlap(const OrientedBox& a, const OrientedBox& b);

/// Closest-point distance between two boxes (0 when they overlap).
///
/// The minimum is taken over the 32 corner-to-edge pairs; gradients follow the
/// envelope rule, differentiating the active pair with the argmin held fixed.
/// Ties resolve to the first pair in enumeration order, so d(a, b) == d(b, a)
/// bit for bit.
BoxDistance box_distance(const OrientedBox& a, const OrientedBox& b);

/// Distance value only.
double box_distance_value(const OrientedBox& a, const OrientedBox& b);

/// Vertices of the intersection polygon of two boxes (empty if disjoint).
Polyline overlap_region(const OrientedBox& a, const OrientedBox& b);

/// Point-to-segment distance.
double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b);

/// Even-odd point in polygon test (boundary points are unspecified).
bool point_in_polygon(const Vec2& p, const Polyline& polygon);

/// Twice the signed area; positive for counter-clockwise polygons.
double signed_area2(const Polyline& polygon);

inline Vec2 rotate(const Vec2& v, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * v.x() - s * v.y(), s * v.x() + c * v.y()};
}

/// Expresses a world point in the frame of a pose.
inline Vec2 to_local(const Vec2& world, const Vec2& origin, double heading) {
  return rotate(world - origin, -heading);
}

inline Vec2 to_world(const Vec2& local, const Vec2& origin, double heading) {
  return origin + rotate(local, heading);
}

}  // namespace adversim
