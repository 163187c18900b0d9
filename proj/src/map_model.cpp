#include "adversim/map_model.hpp"

#include "adversim/error.hpp"
#include "json_util.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace adversim {

struct MapModel::Grid {
  Vec2 origin = Vec2::Zero();
  double resolution = MapModel::kDefaultResolution;
  int nx = 0;
  int ny = 0;
  std::vector<double> values;  // row-major in y: values[iy * nx + ix]
  std::vector<std::pair<Vec2, Vec2>> boundary;
};

namespace {

bool inside_union(const std::vector<Polyline>& polys, const Vec2& p) {
  for (const auto& poly : polys) {
    if (point_in_polygon(p, poly)) return true;
  }
  return false;
}

double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

/// Parameters along segment (a, b) where it meets segment (c, d).
void split_params(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d, std::vector<double>& out) {
  const Vec2 r = b - a;
  const Vec2 s = d - c;
  const double denom = cross(r, s);
  const double rr = r.squaredNorm();
  if (rr == 0.0) return;
  const double tol = 1e-12 * std::max(1.0, rr);
  if (std::abs(denom) <= tol) {
    // Parallel: only collinear overlaps matter.
    if (std::abs(cross(c - a, r)) > 1e-9 * std::sqrt(rr)) return;
    for (const Vec2& q : {c, d}) {
      const double t = (q - a).dot(r) / rr;
      if (t > 0.0 && t < 1.0) out.push_back(t);
    }
    return;
  }
  const double t = cross(c - a, s) / denom;
  const double u = cross(c - a, r) / denom;
  if (t > 0.0 && t < 1.0 && u >= -1e-12 && u <= 1.0 + 1e-12) out.push_back(t);
}

std::vector<std::pair<Vec2, Vec2>> exposed_boundary(const std::vector<Polyline>& polys) {
  std::vector<std::pair<Vec2, Vec2>> out;
  for (std::size_t pi = 0; pi < polys.size(); ++pi) {
    const auto& poly = polys[pi];
    for (std::size_t k = 0; k < poly.size(); ++k) {
      const Vec2 a = poly[k];
      const Vec2 b = poly[(k + 1) % poly.size()];
      const double len = (b - a).norm();
      if (len == 0.0) continue;
      std::vector<double> params{0.0, 1.0};
      for (std::size_t qi = 0; qi < polys.size(); ++qi) {
        if (qi == pi) continue;
        const auto& q = polys[qi];
        for (std::size_t m = 0; m < q.size(); ++m) split_params(a, b, q[m], q[(m + 1) % q.size()], params);
      }
      std::sort(params.begin(), params.end());
      const Vec2 normal = Vec2(-(b - a).y(), (b - a).x()) / len;
      const double eps = 1e-6;
      for (std::size_t j = 0; j + 1 < params.size(); ++j) {
        const double t0 = params[j];
        const double t1 = params[j + 1];
        if ((t1 - t0) * len < 1e-9) continue;
        const Vec2 mid = a + 0.5 * (t0 + t1) * (b - a);
        if (inside_union(polys, mid + eps * normal) != inside_union(polys, mid - eps * normal)) {
          out.emplace_back(a + t0 * (b - a), a + t1 * (b - a));
        }
      }
    }
  }
  return out;
}

double boundary_distance(const std::vector<std::pair<Vec2, Vec2>>& segs, const std::vector<int>& subset,
                         const Vec2& p) {
  double best = std::numeric_limits<double>::infinity();
  for (int s : subset) best = std::min(best, point_segment_distance(p, segs[s].first, segs[s].second));
  return best;
}

}  // namespace

MapModel::MapModel(std::string id, std::vector<Polyline> drivable, std::vector<NamedRoute> routes,
                   double resolution, double grid_margin)
    : id_(std::move(id)), drivable_(std::move(drivable)), routes_(std::move(routes)) {
  if (drivable_.empty()) throw Error(ErrorCode::kDegenerateGeometry, "map has no drivable polygons");
  if (!(resolution > 0.0)) throw Error(ErrorCode::kInvalidArgument, "grid resolution must be positive");
  for (const auto& poly : drivable_) {
    if (poly.size() < 3 || std::abs(signed_area2(poly)) < 1e-9) {
      throw Error(ErrorCode::kDegenerateGeometry, "drivable polygon with fewer than 3 vertices or zero area");
    }
  }

  auto grid = std::make_shared<Grid>();
  grid->resolution = resolution;
  grid->boundary = exposed_boundary(drivable_);
  if (grid->boundary.empty()) throw Error(ErrorCode::kDegenerateGeometry, "drivable union has no boundary");

  Vec2 lo = drivable_.front().front();
  Vec2 hi = lo;
  for (const auto& poly : drivable_) {
    for (const auto& p : poly) {
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
  }
  lo.array() -= grid_margin;
  hi.array() += grid_margin;
  grid->origin = lo;
  grid->nx = static_cast<int>(std::ceil((hi.x() - lo.x()) / resolution)) + 1;
  grid->ny = static_cast<int>(std::ceil((hi.y() - lo.y()) / resolution)) + 1;
  grid->values.assign(static_cast<std::size_t>(grid->nx) * grid->ny, 0.0);

  // Tiles prune the segment set: a segment can only be closest to some node in
  // the tile if its distance bound from the tile center beats the best upper bound.
  const auto& segs = grid->boundary;
  constexpr int kTile = 16;
  std::vector<int> all(segs.size());
  for (std::size_t s = 0; s < segs.size(); ++s) all[s] = static_cast<int>(s);
  std::vector<int> candidates;
  for (int ty = 0; ty < grid->ny; ty += kTile) {
    for (int tx = 0; tx < grid->nx; tx += kTile) {
      const int ex = std::min(tx + kTile, grid->nx) - 1;
      const int ey = std::min(ty + kTile, grid->ny) - 1;
      const Vec2 c = lo + resolution * Vec2(0.5 * (tx + ex), 0.5 * (ty + ey));
      const double h = 0.5 * resolution * std::hypot(ex - tx, ey - ty);
      double upper = std::numeric_limits<double>::infinity();
      std::vector<double> dc(segs.size());
      for (std::size_t s = 0; s < segs.size(); ++s) {
        dc[s] = point_segment_distance(c, segs[s].first, segs[s].second);
        upper = std::min(upper, dc[s] + h);
      }
      candidates.clear();
      double center_dist = std::numeric_limits<double>::infinity();
      for (std::size_t s = 0; s < segs.size(); ++s) {
        center_dist = std::min(center_dist, dc[s]);
        if (dc[s] - h <= upper) candidates.push_back(static_cast<int>(s));
      }
      const bool uniform_sign = center_dist > h;
      const bool center_inside = uniform_sign && inside_union(drivable_, c);
      for (int iy = ty; iy <= ey; ++iy) {
        for (int ix = tx; ix <= ex; ++ix) {
          const Vec2 p = lo + resolution * Vec2(ix, iy);
          const double d = boundary_distance(segs, candidates, p);
          const bool inside = uniform_sign ? center_inside : inside_union(drivable_, p);
          grid->values[static_cast<std::size_t>(iy) * grid->nx + ix] = inside ? d : -d;
        }
      }
    }
  }
  grid_ = std::move(grid);
}

const NamedRoute* MapModel::find_route(const std::string& name) const {
  for (const auto& r : routes_) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

bool MapModel::inside_drivable(const Vec2& p) const { return inside_union(drivable_, p); }

double MapModel::exact_sdf(const Vec2& p) const {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& [a, b] : grid_->boundary) d = std::min(d, point_segment_distance(p, a, b));
  return inside_drivable(p) ? d : -d;
}

const std::vector<std::pair<Vec2, Vec2>>& MapModel::boundary() const { return grid_->boundary; }

double MapModel::sdf(const Vec2& p, Vec2* grad, bool clamp) const {
  const Grid& g = *grid_;
  const double gx = (p.x() - g.origin.x()) / g.resolution;
  const double gy = (p.y() - g.origin.y()) / g.resolution;
  const double max_x = g.nx - 1;
  const double max_y = g.ny - 1;
  const bool out_x = gx < 0.0 || gx > max_x;
  const bool out_y = gy < 0.0 || gy > max_y;
  if ((out_x || out_y) && !clamp) {
    throw Error(ErrorCode::kOutOfExtent, "query point outside the signed distance grid");
  }
  const double cx = std::clamp(gx, 0.0, max_x);
  const double cy = std::clamp(gy, 0.0, max_y);
  const int ix = std::min(static_cast<int>(cx), g.nx - 2);
  const int iy = std::min(static_cast<int>(cy), g.ny - 2);
  const double fx = cx - ix;
  const double fy = cy - iy;
  const auto at = [&g](int x, int y) { return g.values[static_cast<std::size_t>(y) * g.nx + x]; };
  const double v00 = at(ix, iy);
  const double v10 = at(ix + 1, iy);
  const double v01 = at(ix, iy + 1);
  const double v11 = at(ix + 1, iy + 1);
  if (grad != nullptr) {
    grad->x() = out_x ? 0.0 : ((1 - fy) * (v10 - v00) + fy * (v11 - v01)) / g.resolution;
    grad->y() = out_y ? 0.0 : ((1 - fx) * (v01 - v00) + fx * (v11 - v10)) / g.resolution;
  }
  return (1 - fx) * (1 - fy) * v00 + fx * (1 - fy) * v10 + (1 - fx) * fy * v01 + fx * fy * v11;
}

const Vec2& MapModel::grid_origin() const { return grid_->origin; }
double MapModel::grid_resolution() const { return grid_->resolution; }
int MapModel::grid_nx() const { return grid_->nx; }
int MapModel::grid_ny() const { return grid_->ny; }
double MapModel::grid_value(int ix, int iy) const {
  return grid_->values[static_cast<std::size_t>(iy) * grid_->nx + ix];
}
Vec2 MapModel::grid_node(int ix, int iy) const {
  return grid_->origin + grid_->resolution * Vec2(ix, iy);
}

FieldValue offroad_field(const MapModel& map, const Vec2& p, double sigma, bool clamp) {
  Vec2 g;
  const double d = map.sdf(p, &g, clamp);
  FieldValue out;
  if (d <= 0.0) {
    out.value = 1.0;
    return out;
  }
  const double inv_var = 1.0 / (sigma * sigma);
  out.value = std::exp(-0.5 * d * d * inv_var);
  out.grad = -out.value * d * inv_var * g;
  return out;
}

bool box_offroad_violation(const MapModel& map, const OrientedBox& box) {
  if (map.sdf(box.center) < 0.0) return true;
  for (const Vec2& c : box.corners()) {
    if (map.sdf(c) < 0.0) return true;
  }
  return false;
}

std::string map_to_json(const MapModel& map) {
  using json_util::json;
  json j;
  j["version"] = kMapFormatVersion;
  j["map_id"] = map.id();
  json polys = json::array();
  for (const auto& poly : map.drivable()) polys.push_back(json_util::to_json(poly));
  j["drivable"] = std::move(polys);
  json routes = json::array();
  for (const auto& r : map.routes()) routes.push_back({{"name", r.name}, {"points", json_util::to_json(r.points)}});
  j["routes"] = std::move(routes);
  return j.dump();
}

MapModel map_from_json(const std::string& bytes, double resolution) {
  const auto j = json_util::parse(bytes);
  json_util::Reader r(j, "");
  if (r.get<int>("version") != kMapFormatVersion) json_util::fail("/version", "unsupported version");
  const auto id = r.get<std::string>("map_id");
  std::vector<Polyline> polys;
  const auto& dj = r.array("drivable");
  for (std::size_t k = 0; k < dj.size(); ++k) {
    polys.push_back(json_util::polyline(dj[k], "/drivable/" + std::to_string(k)));
    if (signed_area2(polys.back()) < 0.0) {
      json_util::fail("/drivable/" + std::to_string(k), "polygon must be counter-clockwise");
    }
  }
  std::vector<NamedRoute> routes;
  if (r.has("routes")) {
    const auto& rj = r.array("routes");
    for (std::size_t k = 0; k < rj.size(); ++k) {
      json_util::Reader rr(rj[k], "/routes/" + std::to_string(k));
      routes.push_back({rr.get<std::string>("name"), rr.polyline("points")});
    }
  }
  return MapModel(id, std::move(polys), std::move(routes), resolution);
}

}  // namespace adversim
