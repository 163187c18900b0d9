#pragma once

#include "adversim/scenario.hpp"

#include <vector>

namespace adversim {

/// Arclength-parameterized polyline.
class RoutePath {
 public:
  RoutePath() = default;
  explicit RoutePath(Polyline points);

  double length() const { return cumulative_.empty() ? 0.0 : cumulative_.back(); }
  const Polyline& points() const { return points_; }
  bool empty() const { return points_.empty(); }

  /// Point at arclength s (clamped to [0, length]).
  Vec2 point_at(double s) const;
  /// Unit tangent of the segment containing s.
  Vec2 tangent_at(double s) const;

  struct Projection {
    double s = 0.0;
    double distance = 0.0;
    Vec2 ds_dp = Vec2::Zero();  ///< derivative of s w.r.t. the query point
    bool beyond_end = false;    ///< query lies past the final point along the last tangent
    double overshoot = 0.0;
  };

  /// Closest point among segments overlapping [lo, hi] in arclength.
  Projection project(const Vec2& p, double lo, double hi) const;
  Projection project(const Vec2& p) const { return project(p, 0.0, length()); }

 private:
  int segment_for(double s) const;

  Polyline points_;
  std::vector<double> cumulative_;
};

/// Minimum distance between two polylines. Zero when any segments cross.
double polyline_distance(const Polyline& a, const Polyline& b);

/// Replaces interior corners with circular arcs of the given radius, limited
/// so consecutive fillets do not overlap. `step` is the arc sampling length.
Polyline fillet_polyline(const Polyline& points, double radius, double step = 0.5);

/// Resamples at (approximately) uniform spacing.
Polyline resample_polyline(const Polyline& points, double spacing);

}  // namespace adversim
