#include "adversim/agents/expert.hpp"

#include "adversim/error.hpp"
#include "adversim/kinematics.hpp"

#include <algorithm>

namespace adversim {

std::vector<std::vector<OrientedBox>> forecast_adversaries(const TrafficState& state, const ActionPlan& plan,
                                                           int t, int steps, const BicycleParams& params) {
  const int n = static_cast<int>(state.size()) - 1;
  std::vector<std::vector<OrientedBox>> boxes(steps, std::vector<OrientedBox>(n));
  for (int i = 0; i < n; ++i) {
    AgentState s = state[i + 1];
    for (int k = 0; k < steps; ++k) {
      const int tk = t + k;
      const Action a = (tk < plan.horizon() && i < plan.num_adversaries()) ? plan.action(i, tk) : Action{};
      s = step(s, a, params);
      boxes[k][i] = box_of(s);
    }
  }
  return boxes;
}

ExpertDecision privileged_expert(const TrafficState& state, const ActionPlan& plan, int t, RouteTracker& tracker,
                                 const ExpertConfig& cfg, const BicycleParams& params) {
  const AgentState& ego = state.front();
  const auto proj = tracker.update(ego.position);
  if (proj.beyond_end && proj.overshoot > cfg.driving.exhausted_tolerance) {
    throw Error(ErrorCode::kRouteExhausted, "expert is past the final route point");
  }
  const auto forecast = forecast_adversaries(state, plan, t, cfg.forecast_horizon, params);
  const RoutePath& path = tracker.path();
  const double dt = params.dt;

  const int num_profiles = static_cast<int>(cfg.profiles.size());
  int chosen = num_profiles - 1;
  for (int p = 0; p < num_profiles; ++p) {
    const double target = cfg.profiles[p] * cfg.driving.cruise_speed;
    double v = ego.speed;
    double s = tracker.progress();
    bool clear = true;
    for (int k = 0; k < cfg.forecast_horizon && clear; ++k) {
      s += v * dt;
      v = v < target ? std::min(v + params.max_accel * dt, target) : std::max(v - params.max_brake * dt, target);
      const double reach = 0.5 * cfg.headway * v;
      OrientedBox footprint;
      footprint.center = path.point_at(s + reach);
      const Vec2 tangent = path.tangent_at(s + reach);
      footprint.heading = std::atan2(tangent.y(), tangent.x());
      footprint.half_length = ego.half_length + cfg.safety_margin + reach;
      footprint.half_width = ego.half_width + cfg.safety_margin;
      for (const auto& adv : forecast[k]) {
        if (boxes_overlap(footprint, adv)) {
          clear = false;
          break;
        }
      }
    }
    if (clear) {
      chosen = p;
      break;
    }
  }

  ExpertDecision out;
  out.profile = chosen;
  out.waypoints = route_waypoints(path, tracker.progress(), ego, cfg.profiles[chosen] * cfg.driving.cruise_speed,
                                  cfg.driving.gains.dt);
  return out;
}

void ExpertEgo::reset(const EgoContext& ctx) {
  tracker_ = RouteTracker(ctx.spec->ego_route, ctx.spec->initial_state.front().position);
  plan_ = ctx.plan != nullptr ? *ctx.plan : ctx.spec->initial_plan;
  params_ = ctx.kinematics;
  params_.dt = ctx.spec->dt;
  cfg_.driving.gains.dt = ctx.spec->dt;
}

Action ExpertEgo::act(const TrafficState& state, int t) {
  last_ = privileged_expert(state, plan_, t, tracker_, cfg_, params_);
  return controllers(last_.waypoints, state.front(), cfg_.driving.gains);
}

}  // namespace adversim
