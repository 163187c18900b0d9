#include "adversim/scenario_builder.hpp"

#include "adversim/agents/route.hpp"
#include "adversim/error.hpp"
#include "adversim/geometry.hpp"

#include <random>

namespace adversim {

namespace {

void check_route_inside(const MapModel& map, const Polyline& route, double step, const char* what) {
  if (route.size() < 2) throw Error(ErrorCode::kRouteInfeasible, std::string(what) + " route needs two points");
  const RoutePath path(route);
  for (double s = 0; s <= path.length(); s += step) {
    if (!map.inside_drivable(path.point_at(s))) {
      throw Error(ErrorCode::kRouteInfeasible, std::string(what) + " route leaves the drivable area");
    }
  }
  if (!map.inside_drivable(route.back())) {
    throw Error(ErrorCode::kRouteInfeasible, std::string(what) + " route leaves the drivable area");
  }
}

AgentState start_state(const Polyline& route, double speed) {
  const RoutePath path(route);
  AgentState s;
  s.position = route.front();
  const Vec2 tangent = path.tangent_at(0.0);
  s.heading = normalize_heading(std::atan2(tangent.y(), tangent.x()));
  s.speed = speed;
  return s;
}

}  // namespace

ScenarioSpec build_initial_scenario(const MapModel& map, const Polyline& ego_route,
                                    const std::vector<Polyline>& adversary_routes, int horizon, double dt,
                                    std::uint64_t seed, const BuilderConfig& cfg) {
  if (horizon < 1 || dt <= 0) throw Error(ErrorCode::kInvalidArgument, "horizon must be >= 1 and dt > 0");
  check_route_inside(map, ego_route, cfg.route_check_step, "ego");
  bool any_close = adversary_routes.empty();
  for (const auto& r : adversary_routes) {
    check_route_inside(map, r, cfg.route_check_step, "adversary");
    any_close = any_close || polyline_distance(r, ego_route) <= cfg.proximity_radius;
  }
  if (!any_close) throw Error(ErrorCode::kProximityUnmet, "no adversary route comes near the ego route");

  const int n = static_cast<int>(adversary_routes.size());
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(1.0 - cfg.speed_jitter, 1.0 + cfg.speed_jitter);

  ScenarioSpec spec;
  spec.map_id = map.id();
  spec.horizon = horizon;
  spec.dt = dt;
  spec.ego_route = ego_route;
  spec.ego_goal = ego_route.back();
  spec.seed = seed;
  spec.initial_state.push_back(start_state(ego_route, cfg.driving.cruise_speed));

  std::vector<DrivingConfig> drivers;
  std::vector<RouteTracker> trackers;
  for (const auto& r : adversary_routes) {
    DrivingConfig d = cfg.driving;
    d.cruise_speed *= jitter(rng);
    d.gains.dt = dt;
    drivers.push_back(d);
    spec.initial_state.push_back(start_state(r, d.cruise_speed));
    trackers.emplace_back(r, r.front());
  }
  spec.initial_plan = ActionPlan(n, horizon);

  BicycleParams params = cfg.sim.kinematics;
  params.dt = dt;
  RuleBasedEgo ego(cfg.driving);
  EgoContext ctx{&spec, &spec.initial_plan, &map, params};
  ego.reset(ctx);

  // Recorded actions pass through the plan's squashing so that the replay
  // reproduces this simulation exactly.
  TrafficState state = spec.initial_state;
  if (classify_state(state, map, 0)) throw Error(ErrorCode::kInitializationCritical, "agents overlap at t = 0");
  for (int t = 0; t < horizon; ++t) {
    TrafficState next(state.size());
    next[0] = step(state[0], clamp_action(ego.act(state, t)), params);
    for (int i = 1; i <= n; ++i) {
      const Waypoints w = rule_based_ego(state, i, trackers[i - 1], drivers[i - 1], params.max_brake);
      const Action a = controllers(w, state[i], drivers[i - 1].gains);
      for (int c = 0; c < 2; ++c) {
        const double v = c == 0 ? a.throttle : a.steer;
        spec.initial_plan.raw()[spec.initial_plan.index(i - 1, t, c)] = unsquash(v);
      }
      next[i] = step(state[i], spec.initial_plan.action(i - 1, t), params);
    }
    state = std::move(next);
    if (const auto v = classify_state(state, map, t + 1)) {
      if (v->kind == VerdictKind::kOffRoad) {
        throw Error(ErrorCode::kRouteInfeasible, "adversary " + std::to_string(v->agents_involved->first) +
                                                     " left the drivable area while tracking its route");
      }
      throw Error(ErrorCode::kInitializationCritical,
                  std::string("recorded traffic ends in ") + to_string(v->kind) + " at t = " +
                      std::to_string(*v->time_index));
    }
  }

  RuleBasedEgo check(cfg.driving);
  const auto result = rollout(spec, map, check, TapeMode::kNoRecord, cfg.sim);
  if (result.verdict.kind != VerdictKind::kNoCollision) {
    throw Error(ErrorCode::kInitializationCritical, "initial plan does not replay to NoCollision");
  }
  return spec;
}

}  // namespace adversim
