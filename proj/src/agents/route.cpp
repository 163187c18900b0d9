#include "adversim/agents/route.hpp"

#include "adversim/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace adversim {

RoutePath::RoutePath(Polyline points) : points_(std::move(points)) {
  cumulative_.reserve(points_.size());
  double s = 0.0;
  for (std::size_t k = 0; k < points_.size(); ++k) {
    if (k > 0) s += (points_[k] - points_[k - 1]).norm();
    cumulative_.push_back(s);
  }
}

int RoutePath::segment_for(double s) const {
  if (points_.size() < 2) return 0;
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), s);
  int k = static_cast<int>(it - cumulative_.begin()) - 1;
  k = std::clamp(k, 0, static_cast<int>(points_.size()) - 2);
  while (k > 0 && cumulative_[k + 1] - cumulative_[k] <= 0.0) --k;
  return k;
}

Vec2 RoutePath::point_at(double s) const {
  if (points_.empty()) return Vec2::Zero();
  if (points_.size() == 1) return points_.front();
  s = std::clamp(s, 0.0, length());
  const int k = segment_for(s);
  const double len = cumulative_[k + 1] - cumulative_[k];
  if (len <= 0.0) return points_[k];
  const double u = (s - cumulative_[k]) / len;
  return points_[k] + u * (points_[k + 1] - points_[k]);
}

Vec2 RoutePath::tangent_at(double s) const {
  if (points_.size() < 2) return Vec2::UnitX();
  const int k = segment_for(std::clamp(s, 0.0, length()));
  const Vec2 d = points_[k + 1] - points_[k];
  const double n = d.norm();
  return n > 0.0 ? Vec2(d / n) : Vec2(Vec2::UnitX());
}

RoutePath::Projection RoutePath::project(const Vec2& p, double lo, double hi) const {
  Projection best;
  best.distance = std::numeric_limits<double>::infinity();
  if (points_.empty()) return best;
  if (points_.size() == 1) {
    best.distance = (p - points_.front()).norm();
    return best;
  }
  for (std::size_t k = 0; k + 1 < points_.size(); ++k) {
    if (cumulative_[k + 1] < lo || cumulative_[k] > hi) continue;
    const Vec2 a = points_[k];
    const Vec2 e = points_[k + 1] - a;
    const double len2 = e.squaredNorm();
    if (len2 <= 0.0) continue;
    const double raw_u = (p - a).dot(e) / len2;
    const double u = std::clamp(raw_u, 0.0, 1.0);
    const double d = (p - (a + u * e)).norm();
    if (d < best.distance) {
      best.distance = d;
      const double len = std::sqrt(len2);
      best.s = cumulative_[k] + u * len;
      best.ds_dp = (raw_u > 0.0 && raw_u < 1.0) ? Vec2(e / len2 * len) : Vec2(Vec2::Zero());
      best.beyond_end = k + 2 == points_.size() && raw_u > 1.0;
      best.overshoot = best.beyond_end ? (raw_u - 1.0) * len : 0.0;
    }
  }
  return best;
}

namespace {

double cross(const Vec2& u, const Vec2& v) { return u.x() * v.y() - u.y() * v.x(); }

bool segments_cross(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  const double d1 = cross(b - a, c - a), d2 = cross(b - a, d - a);
  const double d3 = cross(d - c, a - c), d4 = cross(d - c, b - c);
  return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

}  // namespace

double polyline_distance(const Polyline& a, const Polyline& b) {
  double best = std::numeric_limits<double>::infinity();
  auto one_way = [&best](const Polyline& pts, const Polyline& line) {
    for (const auto& p : pts) {
      if (line.size() == 1) best = std::min(best, (p - line.front()).norm());
      for (std::size_t k = 0; k + 1 < line.size(); ++k) {
        best = std::min(best, point_segment_distance(p, line[k], line[k + 1]));
      }
    }
  };
  one_way(a, b);
  one_way(b, a);
  for (std::size_t i = 0; i + 1 < a.size() && best > 0.0; ++i) {
    for (std::size_t j = 0; j + 1 < b.size(); ++j) {
      if (segments_cross(a[i], a[i + 1], b[j], b[j + 1])) {
        best = 0.0;
        break;
      }
    }
  }
  return best;
}

Polyline fillet_polyline(const Polyline& pts, double radius, double step) {
  if (pts.size() < 3 || radius <= 0.0) return pts;
  Polyline out{pts.front()};
  for (std::size_t k = 1; k + 1 < pts.size(); ++k) {
    const Vec2 p = pts[k];
    const Vec2 in = pts[k] - pts[k - 1];
    const Vec2 outv = pts[k + 1] - pts[k];
    const double lin = in.norm();
    const double lout = outv.norm();
    if (lin == 0.0 || lout == 0.0) continue;
    const Vec2 d0 = in / lin;
    const Vec2 d1 = outv / lout;
    const double turn = std::atan2(d0.x() * d1.y() - d0.y() * d1.x(), d0.dot(d1));
    if (std::abs(turn) < 1e-6) {
      out.push_back(p);
      continue;
    }
    double tangent_len = radius * std::tan(std::abs(turn) / 2.0);
    const double limit = 0.5 * std::min(lin, lout);
    double r = radius;
    if (tangent_len > limit) {
      tangent_len = limit;
      r = tangent_len / std::tan(std::abs(turn) / 2.0);
    }
    const Vec2 start = p - d0 * tangent_len;
    const double side = turn > 0 ? 1.0 : -1.0;
    const Vec2 normal(-d0.y() * side, d0.x() * side);
    const Vec2 center = start + normal * r;
    const double a0 = std::atan2(start.y() - center.y(), start.x() - center.x());
    const int n = std::max(2, static_cast<int>(std::ceil(std::abs(turn) * r / step)));
    for (int j = 0; j <= n; ++j) {
      const double a = a0 + turn * j / n;
      out.emplace_back(center + r * Vec2(std::cos(a), std::sin(a)));
    }
  }
  out.push_back(pts.back());
  return out;
}

Polyline resample_polyline(const Polyline& pts, double spacing) {
  const RoutePath path(pts);
  const double len = path.length();
  if (len <= 0.0) return pts;
  const int n = std::max(1, static_cast<int>(std::ceil(len / spacing)));
  Polyline out;
  out.reserve(n + 1);
  for (int k = 0; k <= n; ++k) out.push_back(path.point_at(len * k / n));
  return out;
}

}  // namespace adversim
