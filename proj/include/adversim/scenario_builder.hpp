#pragma once

#include "adversim/agents/rule_based.hpp"
#include "adversim/map_model.hpp"
#include "adversim/rollout.hpp"
#include "adversim/scenario.hpp"

#include <cstdint>
#include <vector>

namespace adversim {

struct BuilderConfig {
  DrivingConfig driving;  ///< used by the recorded adversaries and the default ego
  SimConfig sim;
  double proximity_radius = 8.0;  ///< [m] closest approach of an adversary route to the ego route
  double speed_jitter = 0.25;     ///< adversary cruise speed varies by +/- this fraction (seeded)
  double route_check_step = 0.5;  ///< [m] spacing of the route containment check
};

/// Scenario whose adversaries follow their routes under the rule-based driver,
/// with the recorded actions stored as the initial plan. Agents start at the
/// first point of their route, heading along it, at cruise speed.
///
/// Throws kRouteInfeasible when a route leaves the drivable area or an
/// adversary cannot track its route on-road, kProximityUnmet when adversary
/// routes exist but none comes within proximity_radius of the ego route, and
/// kInitializationCritical when the recorded traffic collides.
ScenarioSpec build_initial_scenario(const MapModel& map, const Polyline& ego_route,
                                    const std::vector<Polyline>& adversary_routes, int horizon, double dt,
                                    std::uint64_t seed, const BuilderConfig& cfg = {});

}  // namespace adversim
