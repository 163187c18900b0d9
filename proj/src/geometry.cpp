#include "adversim/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace adversim {

namespace {

constexpr std::array<std::array<double, 2>, 4> kCornerSigns{{{1, 1}, {-1, 1}, {-1, -1}, {1, -1}}};

Vec2 local_corner(const OrientedBox& b, int k) {
  return {kCornerSigns[k][0] * b.half_length, kCornerSigns[k][1] * b.half_width};
}

/// d(R(psi) v)/d psi
Vec2 rotate_derivative(const Vec2& v, double heading) {
  const double c = std::cos(heading);
  const double s = std::sin(heading);
  return {-s * v.x() - c * v.y(), c * v.x() - s * v.y()};
}

struct PairResult {
  double distance;
  double u;
  Vec2 normal;
};

PairResult corner_edge(const Vec2& p, const Vec2& q0, const Vec2& q1) {
  const Vec2 e = q1 - q0;
  const double len2 = e.squaredNorm();
  double u = len2 > 0.0 ? (p - q0).dot(e) / len2 : 0.0;
  u = std::clamp(u, 0.0, 1.0);
  const Vec2 diff = p - (q0 + u * e);
  const double d = diff.norm();
  PairResult r{d, u, d > 0.0 ? Vec2(diff / d) : Vec2(Vec2::Zero())};
  return r;
}

struct ActivePair {
  double distance = std::numeric_limits<double>::infinity();
  bool corner_on_a = true;
  int corner = 0;
  int edge = 0;
  double u = 0.0;
  Vec2 normal = Vec2::Zero();
};

ActivePair closest_pair(const OrientedBox& a, const OrientedBox& b) {
  const auto ca = a.corners();
  const auto cb = b.corners();
  ActivePair best;
  auto scan = [&best](const std::array<Vec2, 4>& pts, const std::array<Vec2, 4>& poly, bool on_a) {
    for (int k = 0; k < 4; ++k) {
      for (int e = 0; e < 4; ++e) {
        const PairResult r = corner_edge(pts[k], poly[e], poly[(e + 1) % 4]);
        if (r.distance < best.distance) {
          best = {r.distance, on_a, k, e, r.u, r.normal};
        }
      }
    }
  };
  // Enumeration order is symmetric in (a, b) for the distance value: the set of
  // 32 candidate numbers is the same either way and min is order independent.
  scan(ca, cb, true);
  scan(cb, ca, false);
  return best;
}

}  // namespace

std::array<Vec2, 4> OrientedBox::corners() const {
  std::array<Vec2, 4> out;
  for (int k = 0; k < 4; ++k) out[k] = center + rotate(local_corner(*this, k), heading);
  return out;
}

Vec2 OrientedBox::axis_long() const { return {std::cos(heading), std::sin(heading)}; }
Vec2 OrientedBox::axis_lat() const { return {-std::sin(heading), std::cos(heading)}; }

bool OrientedBox::contains(const Vec2& p) const {
  const Vec2 d = p - center;
  return std::abs(d.dot(axis_long())) <= half_length && std::abs(d.dot(axis_lat())) <= half_width;
}

OrientedBox box_of(const AgentState& s) {
  return {s.position, s.heading, s.half_length, s.half_width};
}

bool boxes_overlap(const OrientedBox& a, const OrientedBox& b) {
  const Vec2 d = b.center - a.center;
  const std::array<Vec2, 4> axes{a.axis_long(), a.axis_lat(), b.axis_long(), b.axis_lat()};
  for (const Vec2& axis : axes) {
    const double ra = a.half_length * std::abs(a.axis_long().dot(axis)) +
                      a.half_width * std::abs(a.axis_lat().dot(axis));
    const double rb = b.half_length * std::abs(b.axis_long().dot(axis)) +
                      b.half_width * std::abs(b.axis_lat().dot(axis));
    if (std::abs(d.dot(axis)) > ra + rb) return false;
  }
  return true;
}

BoxDistance box_distance(const OrientedBox& a, const OrientedBox& b) {
  BoxDistance out;
  if (boxes_overlap(a, b)) return out;
  const ActivePair p = closest_pair(a, b);
  out.distance = p.distance;

  const OrientedBox& corner_box = p.corner_on_a ? a : b;
  const OrientedBox& edge_box = p.corner_on_a ? b : a;
  BoxGradient g_corner;
  BoxGradient g_edge;
  g_corner.center = p.normal;
  g_corner.heading = p.normal.dot(rotate_derivative(local_corner(corner_box, p.corner), corner_box.heading));
  g_edge.center = -p.normal;
  const Vec2 o0 = local_corner(edge_box, p.edge);
  const Vec2 o1 = local_corner(edge_box, (p.edge + 1) % 4);
  const Vec2 d_edge_point = rotate_derivative((1.0 - p.u) * o0 + p.u * o1, edge_box.heading);
  g_edge.heading = -p.normal.dot(d_edge_point);

  out.grad_a = p.corner_on_a ? g_corner : g_edge;
  out.grad_b = p.corner_on_a ? g_edge : g_corner;
  return out;
}

double box_distance_value(const OrientedBox& a, const OrientedBox& b) {
  if (boxes_overlap(a, b)) return 0.0;
  return closest_pair(a, b).distance;
}

Polyline overlap_region(const OrientedBox& a, const OrientedBox& b) {
  const auto ca = a.corners();
  Polyline poly(ca.begin(), ca.end());
  const auto cb = b.corners();
  for (int e = 0; e < 4 && !poly.empty(); ++e) {
    const Vec2 p0 = cb[e];
    const Vec2 p1 = cb[(e + 1) % 4];
    const Vec2 edge = p1 - p0;
    auto side = [&](const Vec2& q) { return edge.x() * (q.y() - p0.y()) - edge.y() * (q.x() - p0.x()); };
    Polyline next;
    for (std::size_t k = 0; k < poly.size(); ++k) {
      const Vec2& cur = poly[k];
      const Vec2& nxt = poly[(k + 1) % poly.size()];
      const double sc = side(cur);
      const double sn = side(nxt);
      if (sc >= 0) next.push_back(cur);
      if ((sc >= 0) != (sn >= 0)) {
        const double t = sc / (sc - sn);
        next.push_back(cur + t * (nxt - cur));
      }
    }
    poly = std::move(next);
  }
  return poly;
}

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  return corner_edge(p, a, b).distance;
}

bool point_in_polygon(const Vec2& p, const Polyline& poly) {
  bool inside = false;
  const std::size_t n = poly.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2& pi = poly[i];
    const Vec2& pj = poly[j];
    if ((pi.y() > p.y()) != (pj.y() > p.y())) {
      const double x = pj.x() + (p.y() - pj.y()) * (pi.x() - pj.x()) / (pi.y() - pj.y());
      if (p.x() < x) inside = !inside;
    }
  }
  return inside;
}

double signed_area2(const Polyline& poly) {
  double s = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec2& p = poly[i];
    const Vec2& q = poly[(i + 1) % poly.size()];
    s += p.x() * q.y() - q.x() * p.y();
  }
  return s;
}

}  // namespace adversim
