#pragma once

#include "adversim/map_model.hpp"
#include "adversim/scenario.hpp"
#include "adversim/scenario_builder.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace adversim {

enum class TemplateKind { kFourWayIntersection, kTJunction, kTwoLaneStraight, kCurvedMerge, kRoundabout };

const char* to_string(TemplateKind kind);
TemplateKind template_kind_from_string(const std::string& s);

/// Parameters of a synthetic road layout. One lane per direction, right-hand
/// traffic. For two_lane_straight, arm_length is the full road length.
/// curvature_radius is the curb fillet radius of junctions, the central
/// island radius of a roundabout and the ramp radius of a merge.
struct MapTemplate {
  TemplateKind kind = TemplateKind::kFourWayIntersection;
  double lane_width = 3.5;
  double arm_length = 60.0;
  double curvature_radius = 0.0;  ///< <= 0 selects the per-kind default
  std::uint64_t seed = 0;         ///< drives the layout's rotation
  bool rotate = true;
};

void validate(const MapTemplate& tpl);

/// Drivable polygons and one named centerline route per legal movement.
/// Routes start and end route_inset metres inside the arm ends.
MapModel generate_map(const MapTemplate& tpl);

inline constexpr double kRouteInset = 5.0;

/// The four layouts used by the desk benchmark, seeded from `seed`.
std::vector<MapTemplate> benchmark_templates(std::uint64_t seed);

struct SamplerConfig {
  BuilderConfig builder;
  int horizon = 80;
  double dt = 0.25;
  std::vector<double> start_offsets{0.0, 10.0, 20.0, 30.0, 40.0};  ///< [m] adversary start slots along a route
  int max_attempts = 400;  ///< per emitted scenario
};

/// Deterministic benchmark: for every map, routes_per_map ego routes, and for
/// each of those one scenario per density. Adversaries are placed on routes
/// near the ego route (possibly the ego's own route, ahead of it) at one of
/// the start slots, and every scenario satisfies the initialization contract.
/// Throws kInsufficientRoutes when a map cannot supply the request.
std::vector<ScenarioSpec> sample_benchmark(const std::vector<MapModel>& maps, int routes_per_map,
                                           const std::vector<int>& densities, std::uint64_t seed,
                                           const SamplerConfig& cfg = {});

/// Deterministic file name of a benchmark scenario.
std::string scenario_file_name(const ScenarioSpec& spec, int index);

/// {"version", "maps": [map files], "scenarios": [{"file", "map_id", "density"}]}.
std::string manifest_to_json(const std::vector<std::string>& map_files, const std::vector<std::string>& scenario_files,
                             const std::vector<ScenarioSpec>& specs);

struct Manifest {
  std::vector<std::string> map_files;
  std::vector<std::string> scenario_files;
};

/// Relative paths are resolved against `base_dir`.
Manifest manifest_from_json(const std::string& bytes, const std::string& base_dir);

}  // namespace adversim
