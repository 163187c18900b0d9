#include "adversim/mapgen.hpp"

#include "adversim/agents/route.hpp"
#include "adversim/error.hpp"
#include "adversim/geometry.hpp"
#include "json_util.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <random>

namespace adversim {

namespace {

constexpr double kPi = kTwoPi / 2;

struct KindName {
  TemplateKind kind;
  const char* name;
};

constexpr std::array<KindName, 5> kKindNames{{{TemplateKind::kFourWayIntersection, "four_way_intersection"},
                                              {TemplateKind::kTJunction, "t_junction"},
                                              {TemplateKind::kTwoLaneStraight, "two_lane_straight"},
                                              {TemplateKind::kCurvedMerge, "curved_merge"},
                                              {TemplateKind::kRoundabout, "roundabout"}}};

double default_radius(TemplateKind kind) {
  switch (kind) {
    case TemplateKind::kRoundabout: return 10.0;
    case TemplateKind::kCurvedMerge: return 40.0;
    default: return 6.0;
  }
}

Vec2 unit(double angle) { return {std::cos(angle), std::sin(angle)}; }

/// Points on a circle from angle a0 to a1 (either direction), both ends included.
Polyline arc(const Vec2& c, double r, double a0, double a1, double step) {
  const int n = std::max(2, static_cast<int>(std::ceil(std::abs(a1 - a0) * r / step)));
  Polyline out;
  for (int k = 0; k <= n; ++k) out.push_back(c + r * unit(a0 + (a1 - a0) * k / n));
  return out;
}

/// Clockwise arc from a0 to a1, at most one turn.
Polyline clockwise_arc(const Vec2& c, double r, double a0, double a1, double step) {
  while (a1 > a0) a1 -= kTwoPi;
  while (a1 <= a0 - kTwoPi) a1 += kTwoPi;
  return arc(c, r, a0, a1, step);
}

void make_ccw(Polyline& poly) {
  if (signed_area2(poly) < 0) std::reverse(poly.begin(), poly.end());
}

/// Frame of a road arm: x outward along `u`, y to its left.
struct ArmFrame {
  Vec2 u;
  Vec2 n;
  Vec2 at(double x, double y) const { return x * u + y * n; }
};

ArmFrame arm(double angle) { return {unit(angle), unit(angle + kPi / 2)}; }

const char* compass(int quarter) {
  static const char* names[] = {"east", "north", "west", "south"};
  return names[((quarter % 4) + 4) % 4];
}

Vec2 line_intersection(const Vec2& p, const Vec2& d, const Vec2& q, const Vec2& e) {
  const double den = d.x() * e.y() - d.y() * e.x();
  const Vec2 w = q - p;
  const double s = (w.x() * e.y() - w.y() * e.x()) / den;
  return p + s * d;
}

struct Layout {
  std::vector<Polyline> polygons;
  std::vector<NamedRoute> routes;
};

/// Junction of perpendicular arms (quarters index multiples of 90 degrees).
Layout junction(const std::vector<int>& quarters, double w, double length, double rc) {
  Layout out;
  for (int q : quarters) {
    const ArmFrame f = arm(q * kPi / 2);
    Polyline rect{f.at(-w, -w), f.at(length, -w), f.at(length, w), f.at(-w, w)};
    make_ccw(rect);
    out.polygons.push_back(rect);
  }
  auto present = [&](int q) { return std::find(quarters.begin(), quarters.end(), ((q % 4) + 4) % 4) != quarters.end(); };
  for (int q : quarters) {
    if (!present(q + 1)) continue;
    const Vec2 u0 = unit(q * kPi / 2);
    const Vec2 u1 = unit((q + 1) * kPi / 2);
    const Vec2 corner = w * (u0 + u1);
    const Vec2 center = (w + rc) * (u0 + u1);
    const double a0 = std::atan2(-u1.y(), -u1.x());
    Polyline fillet{corner};
    for (const auto& p : arc(center, rc, a0, a0 - kPi / 2, 0.5)) fillet.push_back(p);
    make_ccw(fillet);
    out.polygons.push_back(fillet);
  }
  const double reach = length - kRouteInset;
  for (int k : quarters) {
    for (int j : quarters) {
      if (j == k) continue;
      const ArmFrame fk = arm(k * kPi / 2);
      const ArmFrame fj = arm(j * kPi / 2);
      const Vec2 start = fk.at(reach, w / 2);
      const Vec2 end = fj.at(reach, -w / 2);
      Polyline pts;
      if ((j - k + 4) % 4 == 2) {
        pts = {start, end};
      } else {
        const Vec2 d0 = -fk.u;
        const Vec2 d1 = fj.u;
        const bool right = d0.x() * d1.y() - d0.y() * d1.x() < 0;
        const Vec2 corner = line_intersection(start, d0, end, d1);
        pts = fillet_polyline({start, corner, end}, right ? rc + w / 2 : 1.5 * w, 0.5);
      }
      out.routes.push_back({std::string(compass(k)) + "_to_" + compass(j), pts});
    }
  }
  return out;
}

Layout straight(double w, double length) {
  Layout out;
  const double h = length / 2;
  out.polygons.push_back({{-h, -w}, {h, -w}, {h, w}, {-h, w}});
  const double reach = h - kRouteInset;
  out.routes.push_back({"eastbound", {{-reach, -w / 2}, {reach, -w / 2}}});
  out.routes.push_back({"westbound", {{reach, w / 2}, {-reach, w / 2}}});
  return out;
}

Layout curved_merge(double w, double length, double radius) {
  Layout out = straight(w, 2 * length);
  out.routes.clear();
  const double reach = length - kRouteInset;
  out.routes.push_back({"eastbound", {{-reach, -w / 2}, {reach, -w / 2}}});
  out.routes.push_back({"westbound", {{reach, w / 2}, {-reach, w / 2}}});

  // Ramp: clockwise arc ending tangent to the eastbound lane at x = 0,
  // preceded by a straight lead-in.
  const double sweep = 40.0 * kPi / 180.0;
  const double lead = 25.0;
  const Vec2 center(0.0, -w / 2 - radius);
  const double t0 = kPi / 2 + sweep;
  const Vec2 ramp_start = center + radius * unit(t0);
  const Vec2 dir(std::sin(t0), -std::cos(t0));
  const Vec2 normal(-dir.y(), dir.x());
  Polyline band = arc(center, radius + w / 2, kPi / 2, t0, 1.0);
  for (const auto& p : arc(center, radius - w / 2, t0, kPi / 2, 1.0)) band.push_back(p);
  make_ccw(band);
  out.polygons.push_back(band);
  const Vec2 lead_start = ramp_start - lead * dir;
  const Vec2 lead_end = ramp_start + 0.5 * dir;
  Polyline rect{lead_start - w / 2 * normal, lead_end - w / 2 * normal, lead_end + w / 2 * normal,
                lead_start + w / 2 * normal};
  make_ccw(rect);
  out.polygons.push_back(rect);

  Polyline ramp{lead_start + kRouteInset * dir};
  for (const auto& p : arc(center, radius, t0, kPi / 2, 0.5)) ramp.push_back(p);
  ramp.push_back({reach, -w / 2});
  out.routes.push_back({"ramp_merge", ramp});
  return out;
}

Layout roundabout(double w, double length, double r_in) {
  Layout out;
  const double r_out = r_in + 2 * w;
  const double r_mid = 0.5 * (r_in + r_out);
  constexpr int kSectors = 8;
  for (int k = 0; k < kSectors; ++k) {
    const double a0 = kTwoPi * k / kSectors;
    const double a1 = kTwoPi * (k + 1) / kSectors;
    Polyline sector = arc(Vec2::Zero(), r_out, a0, a1, 1.0);
    for (const auto& p : arc(Vec2::Zero(), r_in, a1, a0, 1.0)) sector.push_back(p);
    make_ccw(sector);
    out.polygons.push_back(sector);
  }
  const double flare = 3.0;
  for (int q = 0; q < 4; ++q) {
    const ArmFrame f = arm(q * kPi / 2);
    Polyline rect{f.at(r_in, -w), f.at(r_out + length, -w), f.at(r_out + length, w), f.at(r_in, w)};
    make_ccw(rect);
    out.polygons.push_back(rect);
    const double xa = std::sqrt(r_out * r_out - (w + flare) * (w + flare)) - 1.0;
    const double xb = r_out + 8.0;
    Polyline trap{f.at(xa, -(w + flare)), f.at(xb, -w), f.at(xb, w), f.at(xa, w + flare)};
    make_ccw(trap);
    out.polygons.push_back(trap);
  }

  const double rf = 6.0;
  const double yc = w / 2 + rf;
  const double xc = std::sqrt((r_mid + rf) * (r_mid + rf) - yc * yc);
  const double offset = std::atan2(yc, xc);
  const double reach = r_out + length - kRouteInset;
  for (int k = 0; k < 4; ++k) {
    for (int j = 0; j < 4; ++j) {
      if (j == k) continue;
      const ArmFrame fk = arm(k * kPi / 2);
      const ArmFrame fj = arm(j * kPi / 2);
      Polyline pts{fk.at(reach, w / 2)};
      const Vec2 c_in = fk.at(xc, yc);
      for (const auto& p : clockwise_arc(c_in, rf, std::atan2(-fk.n.y(), -fk.n.x()), std::atan2(-c_in.y(), -c_in.x()), 0.5)) {
        pts.push_back(p);
      }
      const double phi_in = k * kPi / 2 + offset;
      double phi_out = j * kPi / 2 - offset;
      while (phi_out <= phi_in) phi_out += kTwoPi;
      const Polyline ring = arc(Vec2::Zero(), r_mid, phi_in, phi_out, 0.5);
      pts.insert(pts.end(), ring.begin() + 1, ring.end() - 1);
      const Vec2 c_out = fj.at(xc, -yc);
      for (const auto& p : clockwise_arc(c_out, rf, std::atan2(-c_out.y(), -c_out.x()), std::atan2(fj.n.y(), fj.n.x()), 0.5)) {
        pts.push_back(p);
      }
      pts.push_back(fj.at(reach, -w / 2));
      out.routes.push_back({std::string(compass(k)) + "_to_" + compass(j), pts});
    }
  }
  return out;
}

}  // namespace

const char* to_string(TemplateKind kind) {
  for (const auto& kn : kKindNames) {
    if (kn.kind == kind) return kn.name;
  }
  return "unknown";
}

TemplateKind template_kind_from_string(const std::string& s) {
  for (const auto& kn : kKindNames) {
    if (s == kn.name) return kn.kind;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown map template '" + s + "'");
}

void validate(const MapTemplate& tpl) {
  if (!(tpl.lane_width >= 3.0)) throw Error(ErrorCode::kDegenerateGeometry, "lane width must be at least 3 m");
  if (!(tpl.arm_length >= 20.0)) throw Error(ErrorCode::kDegenerateGeometry, "arm length must be at least 20 m");
  const double r = tpl.curvature_radius > 0 ? tpl.curvature_radius : default_radius(tpl.kind);
  if (tpl.kind == TemplateKind::kCurvedMerge && r < 2 * tpl.lane_width) {
    throw Error(ErrorCode::kDegenerateGeometry, "ramp radius too small for the lane width");
  }
  if (tpl.kind != TemplateKind::kTwoLaneStraight && !(r >= 2.0)) {
    throw Error(ErrorCode::kDegenerateGeometry, "curvature radius must be at least 2 m");
  }
}

MapModel generate_map(const MapTemplate& tpl) {
  validate(tpl);
  const double w = tpl.lane_width;
  const double r = tpl.curvature_radius > 0 ? tpl.curvature_radius : default_radius(tpl.kind);
  Layout layout;
  switch (tpl.kind) {
    case TemplateKind::kFourWayIntersection: layout = junction({0, 1, 2, 3}, w, tpl.arm_length, r); break;
    case TemplateKind::kTJunction: layout = junction({0, 2, 3}, w, tpl.arm_length, r); break;
    case TemplateKind::kTwoLaneStraight: layout = straight(w, tpl.arm_length); break;
    case TemplateKind::kCurvedMerge: layout = curved_merge(w, tpl.arm_length, r); break;
    case TemplateKind::kRoundabout: layout = roundabout(w, tpl.arm_length, r); break;
  }
  if (tpl.rotate) {
    std::mt19937_64 rng(tpl.seed);
    const double angle = std::uniform_real_distribution<double>(0.0, kTwoPi)(rng);
    for (auto& poly : layout.polygons) {
      for (auto& p : poly) p = rotate(p, angle);
    }
    for (auto& route : layout.routes) {
      for (auto& p : route.points) p = rotate(p, angle);
    }
  }
  const std::string id = std::string(to_string(tpl.kind)) + "_s" + std::to_string(tpl.seed);
  return MapModel(id, std::move(layout.polygons), std::move(layout.routes));
}

std::vector<MapTemplate> benchmark_templates(std::uint64_t seed) {
  const std::array<TemplateKind, 4> kinds{TemplateKind::kFourWayIntersection, TemplateKind::kTJunction,
                                          TemplateKind::kRoundabout, TemplateKind::kCurvedMerge};
  std::vector<MapTemplate> out;
  for (std::size_t k = 0; k < kinds.size(); ++k) {
    MapTemplate t;
    t.kind = kinds[k];
    t.seed = seed * kinds.size() + k;
    out.push_back(t);
  }
  return out;
}

namespace {

Polyline trim_front(const Polyline& route, double s0) {
  if (s0 <= 0) return route;
  const RoutePath path(route);
  Polyline out{path.point_at(s0)};
  double acc = 0;
  for (std::size_t k = 1; k < route.size(); ++k) {
    acc += (route[k] - route[k - 1]).norm();
    if (acc > s0 + 1e-9) out.push_back(route[k]);
  }
  if (out.size() < 2) out.push_back(route.back());
  return out;
}

struct Placement {
  int route;
  double offset;
};

}  // namespace

std::vector<ScenarioSpec> sample_benchmark(const std::vector<MapModel>& maps, int routes_per_map,
                                           const std::vector<int>& densities, std::uint64_t seed,
                                           const SamplerConfig& cfg) {
  if (routes_per_map < 1 || densities.empty()) throw Error(ErrorCode::kInvalidArgument, "empty benchmark request");
  const int max_density = *std::max_element(densities.begin(), densities.end());
  std::mt19937_64 rng(seed);
  std::vector<ScenarioSpec> out;
  for (const auto& map : maps) {
    const auto& routes = map.routes();
    std::vector<int> candidates;
    std::vector<std::vector<int>> admissible(routes.size());
    for (int r = 0; r < static_cast<int>(routes.size()); ++r) {
      bool other = false;
      for (int q = 0; q < static_cast<int>(routes.size()); ++q) {
        if (q == r || polyline_distance(routes[q].points, routes[r].points) <= cfg.builder.proximity_radius) {
          admissible[r].push_back(q);
          other = other || q != r;
        }
      }
      const std::size_t slots = admissible[r].size() * cfg.start_offsets.size();
      if (other && slots >= static_cast<std::size_t>(max_density)) candidates.push_back(r);
    }
    if (static_cast<int>(candidates.size()) < routes_per_map) {
      throw Error(ErrorCode::kInsufficientRoutes, "map '" + map.id() + "' has " + std::to_string(candidates.size()) +
                                                      " usable ego routes, need " + std::to_string(routes_per_map));
    }
    std::shuffle(candidates.begin(), candidates.end(), rng);

    int accepted = 0;
    for (std::size_t ci = 0; ci < candidates.size() && accepted < routes_per_map; ++ci) {
      const int ego = candidates[ci];
      std::vector<Placement> slots;
      for (int q : admissible[ego]) {
        for (double off : cfg.start_offsets) {
          if (q == ego && off < 15.0) continue;
          slots.push_back({q, off});
        }
      }
      std::vector<ScenarioSpec> built;
      for (int density : densities) {
        bool done = false;
        for (int attempt = 0; attempt < cfg.max_attempts && !done; ++attempt) {
          std::shuffle(slots.begin(), slots.end(), rng);
          if (static_cast<int>(slots.size()) < density) break;
          std::vector<Polyline> adv;
          for (int k = 0; k < density; ++k) adv.push_back(trim_front(routes[slots[k].route].points, slots[k].offset));
          const std::uint64_t s = rng();
          try {
            built.push_back(build_initial_scenario(map, routes[ego].points, adv, cfg.horizon, cfg.dt, s, cfg.builder));
            done = true;
          } catch (const Error& e) {
            if (e.code() != ErrorCode::kInitializationCritical && e.code() != ErrorCode::kRouteInfeasible &&
                e.code() != ErrorCode::kProximityUnmet) {
              throw;
            }
          }
        }
        if (!done) break;
      }
      if (built.size() == densities.size()) {
        out.insert(out.end(), built.begin(), built.end());
        ++accepted;
      }
    }
    if (accepted < routes_per_map) {
      throw Error(ErrorCode::kInsufficientRoutes,
                  "map '" + map.id() + "' yields only " + std::to_string(accepted) + " initializable ego routes");
    }
  }
  return out;
}

std::string scenario_file_name(const ScenarioSpec& spec, int index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%03d", index);
  return "scenario_" + std::string(buf) + "_" + spec.map_id + "_n" + std::to_string(spec.num_adversaries()) + ".json";
}

std::string manifest_to_json(const std::vector<std::string>& map_files, const std::vector<std::string>& scenario_files,
                             const std::vector<ScenarioSpec>& specs) {
  json_util::json j;
  j["version"] = 1;
  j["maps"] = map_files;
  json_util::json list = json_util::json::array();
  for (std::size_t k = 0; k < scenario_files.size(); ++k) {
    json_util::json e;
    e["file"] = scenario_files[k];
    if (k < specs.size()) {
      e["map_id"] = specs[k].map_id;
      e["density"] = specs[k].num_adversaries();
    }
    list.push_back(std::move(e));
  }
  j["scenarios"] = std::move(list);
  return j.dump(2);
}

Manifest manifest_from_json(const std::string& bytes, const std::string& base_dir) {
  const auto j = json_util::parse(bytes);
  json_util::Reader r(j, "");
  Manifest m;
  auto resolve = [&](const std::string& f) {
    const std::filesystem::path p(f);
    return p.is_absolute() ? f : (std::filesystem::path(base_dir) / p).string();
  };
  const auto& maps = r.array("maps");
  for (std::size_t k = 0; k < maps.size(); ++k) {
    if (!maps[k].is_string()) json_util::fail("/maps/" + std::to_string(k), "expected a string");
    m.map_files.push_back(resolve(maps[k].get<std::string>()));
  }
  const auto& sc = r.array("scenarios");
  for (std::size_t k = 0; k < sc.size(); ++k) {
    json_util::Reader e(sc[k], "/scenarios/" + std::to_string(k));
    m.scenario_files.push_back(resolve(e.get<std::string>("file")));
  }
  return m;
}

}  // namespace adversim
