#include "adversim/agents/rule_based.hpp"
#include "adversim/error.hpp"
#include "adversim/geometry.hpp"
#include "adversim/map_library.hpp"
#include "adversim/mapgen.hpp"
#include "adversim/rollout.hpp"

#include "../support/oracles.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace adversim;

namespace {

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no adversim::Error thrown";
  return ErrorCode::kInvalidArgument;
}

bool in_union(const MapModel& map, const Vec2& p) {
  for (const auto& poly : map.drivable()) {
    if (oracle::polygon_contains(poly, p)) return true;
  }
  return false;
}

// Points on the boundary of the polygon union, spaced 5 cm apart along
// every edge. Samples ringed by drivable points on all sides lie on interior seams.
std::vector<Vec2> boundary_samples(const MapModel& map) {
  std::vector<Vec2> out;
  for (const auto& poly : map.drivable()) {
    for (std::size_t k = 0; k < poly.size(); ++k) {
      const Vec2& a = poly[k];
      const Vec2& b = poly[(k + 1) % poly.size()];
      const int m = std::max(1, static_cast<int>((b - a).norm() / 0.05));
      for (int j = 0; j <= m; ++j) {
        const Vec2 p = a + (b - a) * (static_cast<double>(j) / m);
        for (int d = 0; d < 8; ++d) {
          const double ang = kTwoPi * d / 8;
          if (!in_union(map, p + 1e-3 * Vec2(std::cos(ang), std::sin(ang)))) {
            out.push_back(p);
            break;
          }
        }
      }
    }
  }
  return out;
}

// Sample spacing bounds the oracle's overestimate of the clearance by 2.5 cm.
void expect_routes_inside(const MapModel& map, double min_clearance) {
  const auto boundary = boundary_samples(map);
  for (const auto& r : map.routes()) {
    for (std::size_t k = 0; k + 1 < r.points.size(); ++k) {
      const Vec2 a = r.points[k], b = r.points[k + 1];
      const int n = std::max(1, static_cast<int>((b - a).norm() / 0.25));
      for (int j = 0; j <= n; ++j) {
        const Vec2 p = a + (b - a) * (static_cast<double>(j) / n);
        ASSERT_TRUE(in_union(map, p)) << map.id() << " " << r.name;
        double c = std::numeric_limits<double>::infinity();
        for (const auto& q : boundary) c = std::min(c, (p - q).norm());
        EXPECT_GE(c, min_clearance - 0.03) << map.id() << " " << r.name;
      }
    }
  }
}

}  // namespace

TEST(Mapgen, TwoLaneStraight) {
  MapTemplate t;
  t.kind = TemplateKind::kTwoLaneStraight;
  t.arm_length = 100.0;
  const MapModel m = generate_map(t);
  EXPECT_EQ(m.drivable().size(), 1u);
  EXPECT_EQ(m.drivable().front().size(), 4u);
  EXPECT_EQ(m.routes().size(), 2u);
  EXPECT_NEAR(std::abs(signed_area2(m.drivable().front())) / 2, 100.0 * 2 * t.lane_width, 1e-6);
}

TEST(Mapgen, FourWayRoutesInsideUnion) {
  MapTemplate t;
  t.kind = TemplateKind::kFourWayIntersection;
  t.seed = 5;
  const MapModel m = generate_map(t);
  EXPECT_EQ(m.routes().size(), 12u);
  std::set<std::string> names;
  for (const auto& r : m.routes()) names.insert(r.name);
  EXPECT_EQ(names.size(), 12u);
  expect_routes_inside(m, kDefaultHalfWidth);
}

TEST(Mapgen, EveryTemplateKeepsRoutesClear) {
  for (auto kind : {TemplateKind::kTJunction, TemplateKind::kTwoLaneStraight, TemplateKind::kCurvedMerge,
                    TemplateKind::kRoundabout}) {
    MapTemplate t;
    t.kind = kind;
    t.seed = 11;
    const MapModel m = generate_map(t);
    EXPECT_FALSE(m.routes().empty());
    for (const auto& poly : m.drivable()) EXPECT_GT(signed_area2(poly), 0.0) << to_string(kind);
    expect_routes_inside(m, kDefaultHalfWidth);
  }
}

TEST(Mapgen, DeterministicJson) {
  for (const auto& t : benchmark_templates(3)) {
    EXPECT_EQ(map_to_json(generate_map(t)), map_to_json(generate_map(t)));
  }
  MapTemplate a, b;
  a.seed = 1;
  b.seed = 2;
  EXPECT_NE(map_to_json(generate_map(a)), map_to_json(generate_map(b)));
  EXPECT_EQ(template_kind_from_string(to_string(TemplateKind::kRoundabout)), TemplateKind::kRoundabout);
}

TEST(Mapgen, DegenerateGeometry) {
  MapTemplate t;
  t.lane_width = 2.0;
  EXPECT_EQ(code_of([&] { generate_map(t); }), ErrorCode::kDegenerateGeometry);
  t = MapTemplate{};
  t.arm_length = 5.0;
  EXPECT_EQ(code_of([&] { generate_map(t); }), ErrorCode::kDegenerateGeometry);
}

TEST(SampleBenchmark, CountsAndInitializationContract) {
  std::vector<MapModel> maps;
  for (const auto& t : benchmark_templates(1)) maps.push_back(generate_map(t));
  const auto specs = sample_benchmark(maps, 2, {1, 2, 4}, 1);
  ASSERT_EQ(specs.size(), 24u);
  const MapLibrary lib(maps);
  std::map<int, int> per_density;
  for (const auto& spec : specs) {
    ++per_density[spec.num_adversaries()];
    EXPECT_EQ(spec.horizon, 80);
    RuleBasedEgo ego;
    const auto r = rollout(spec, lib.at(spec.map_id), ego, TapeMode::kNoRecord);
    EXPECT_EQ(r.verdict.kind, VerdictKind::kNoCollision) << spec.map_id;
    EXPECT_EQ(r.states.size(), 81u);
  }
  EXPECT_EQ(per_density, (std::map<int, int>{{1, 8}, {2, 8}, {4, 8}}));

  const auto again = sample_benchmark(maps, 2, {1, 2, 4}, 1);
  EXPECT_EQ(again, specs);
}

TEST(SampleBenchmark, InsufficientRoutes) {
  MapTemplate t;
  t.kind = TemplateKind::kTwoLaneStraight;
  const std::vector<MapModel> maps{generate_map(t)};
  EXPECT_EQ(code_of([&] { sample_benchmark(maps, 3, {1}, 0); }), ErrorCode::kInsufficientRoutes);
  // The four-route-per-map paper shape asks for 20 ego routes per map.
  std::vector<MapModel> bench;
  for (const auto& tpl : benchmark_templates(1)) bench.push_back(generate_map(tpl));
  EXPECT_EQ(code_of([&] { sample_benchmark(bench, 20, {1, 2, 4}, 0); }), ErrorCode::kInsufficientRoutes);
}

TEST(SampleBenchmark, ManifestRoundTrip) {
  std::vector<MapModel> maps;
  for (const auto& t : benchmark_templates(2)) maps.push_back(generate_map(t));
  const auto specs = sample_benchmark(maps, 1, {1}, 2);
  std::vector<std::string> map_files, scenario_files;
  for (const auto& m : maps) map_files.push_back("maps/" + m.id() + ".json");
  for (std::size_t k = 0; k < specs.size(); ++k) {
    scenario_files.push_back("scenarios/" + scenario_file_name(specs[k], static_cast<int>(k)));
  }
  const Manifest back = manifest_from_json(manifest_to_json(map_files, scenario_files, specs), "/data");
  ASSERT_EQ(back.map_files.size(), map_files.size());
  ASSERT_EQ(back.scenario_files.size(), scenario_files.size());
  for (std::size_t k = 0; k < map_files.size(); ++k) EXPECT_EQ(back.map_files[k], "/data/" + map_files[k]);
  for (std::size_t k = 0; k < scenario_files.size(); ++k) {
    EXPECT_EQ(back.scenario_files[k], "/data/" + scenario_files[k]);
  }
  EXPECT_THROW(manifest_from_json("{\"version\":1}", "/data"), Error);
}
