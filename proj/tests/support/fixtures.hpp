#pragma once

#include "adversim/map_model.hpp"
#include "adversim/scenario.hpp"

#include <cmath>
#include <random>

namespace fixture {

using namespace adversim;

/// Long straight road [-100, 100] x [-half_width, half_width].
inline MapModel straight_road(double half_width = 16.0, const std::string& id = "straight") {
  Polyline rect{{-100, -half_width}, {100, -half_width}, {100, half_width}, {-100, half_width}};
  return MapModel(id, {rect}, {NamedRoute{"east", {{-95, -1.75}, {95, -1.75}}}});
}

/// Random scenario on straight_road() for gradient checks: agents spread
/// around the ego with moderate speeds and small random plans.
inline ScenarioSpec random_scenario(std::mt19937_64& rng, int adversaries, int horizon, const std::string& map_id = "straight") {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 0.5);
  ScenarioSpec spec;
  spec.map_id = map_id;
  spec.horizon = horizon;
  spec.dt = 0.25;
  spec.ego_route = {{-90, 0}, {90, 0}};
  spec.ego_goal = {90, 0};
  AgentState ego;
  ego.position = {0, 0};
  ego.heading = 0.0;
  ego.speed = 4.0 + 2.0 * unit(rng);
  spec.initial_state.push_back(ego);
  while (static_cast<int>(spec.initial_state.size()) < adversaries + 1) {
    AgentState a;
    const double r = 7.0 + 8.0 * unit(rng);
    const double bearing = kTwoPi * unit(rng);
    a.position = {r * std::cos(bearing), std::clamp(r * std::sin(bearing), -10.0, 10.0)};
    a.heading = normalize_heading((unit(rng) < 0.5 ? 0.0 : kTwoPi / 2) + 1.2 * (unit(rng) - 0.5));
    a.speed = 3.0 + 5.0 * unit(rng);
    bool clear = true;
    for (const auto& other : spec.initial_state) clear = clear && (other.position - a.position).norm() > 6.5;
    if (clear) spec.initial_state.push_back(a);
  }
  std::vector<double> raw(static_cast<std::size_t>(adversaries) * horizon * 2);
  for (auto& v : raw) v = gauss(rng);
  spec.initial_plan = ActionPlan(adversaries, horizon, raw);
  spec.seed = rng();
  return spec;
}

}  // namespace fixture
