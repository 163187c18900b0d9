#pragma once

#include "adversim/geometry.hpp"
#include "adversim/scenario.hpp"

#include <memory>
#include <string>
#include <vector>

namespace adversim {

struct NamedRoute {
  std::string name;
  Polyline points;
};

/// Drivable area (union of simple counter-clockwise polygons) with a signed
/// distance grid to the union boundary, positive inside.
///
/// Immutable after construction; copies share the grid.
class MapModel {
 public:
  static constexpr double kDefaultResolution = 0.2;
  static constexpr double kDefaultGridMargin = 6.0;

  MapModel() = default;
  MapModel(std::string id, std::vector<Polyline> drivable, std::vector<NamedRoute> routes = {},
           double resolution = kDefaultResolution, double grid_margin = kDefaultGridMargin);

  const std::string& id() const { return id_; }
  const std::vector<Polyline>& drivable() const { return drivable_; }
  const std::vector<NamedRoute>& routes() const { return routes_; }
  const NamedRoute* find_route(const std::string& name) const;

  /// Exact union membership.
  bool inside_drivable(const Vec2& p) const;
  /// Exact signed distance to the union boundary.
  double exact_sdf(const Vec2& p) const;
  /// Boundary pieces of the union (polygon edges not interior to the union).
  const std::vector<std::pair<Vec2, Vec2>>& boundary() const;

  /// Bilinear interpolation of the grid. When `clamp` is false and p lies
  /// outside the grid, throws Error(kOutOfExtent). `grad` may be null.
  double sdf(const Vec2& p, Vec2* grad = nullptr, bool clamp = true) const;

  const Vec2& grid_origin() const;
  double grid_resolution() const;
  int grid_nx() const;
  int grid_ny() const;
  double grid_value(int ix, int iy) const;
  Vec2 grid_node(int ix, int iy) const;

 private:
  struct Grid;

  std::string id_;
  std::vector<Polyline> drivable_;
  std::vector<NamedRoute> routes_;
  std::shared_ptr<const Grid> grid_;
};

struct FieldValue {
  double value = 0.0;
  Vec2 grad = Vec2::Zero();
};

/// Gaussian off-road potential exp(-max(sdf, 0)^2 / (2 sigma^2)) and its
/// gradient through the bilinear interpolation.
FieldValue offroad_field(const MapModel& map, const Vec2& p, double sigma, bool clamp = true);

/// True iff any corner or the center of the box has interpolated sdf < 0.
bool box_offroad_violation(const MapModel& map, const OrientedBox& box);

inline constexpr int kMapFormatVersion = 1;

std::string map_to_json(const MapModel& map);
MapModel map_from_json(const std::string& bytes, double resolution = MapModel::kDefaultResolution);

}  // namespace adversim
