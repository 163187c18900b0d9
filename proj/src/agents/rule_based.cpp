#include "adversim/agents/rule_based.hpp"

#include "adversim/error.hpp"

#include <algorithm>

namespace adversim {

RouteTracker::RouteTracker(const Polyline& route, const Vec2& start) : path_(route) {
  progress_ = path_.project(start).s;
}

RoutePath::Projection RouteTracker::update(const Vec2& position) {
  const auto proj = path_.project(position, progress_ - kBackWindow, progress_ + kForwardWindow);
  progress_ = proj.s;
  return proj;
}

Waypoints route_waypoints(const RoutePath& route, double s, const AgentState& self, double speed, double dt) {
  Waypoints w;
  for (int k = 0; k < 4; ++k) {
    const Vec2 p = route.point_at(s + speed * dt * (k + 1));
    w[k] = to_local(p, self.position, self.heading);
  }
  return w;
}

OrientedBox hazard_region(const AgentState& self, const DrivingConfig& cfg, double max_brake) {
  const double length = cfg.hazard_gain * self.speed * self.speed / (2.0 * max_brake) + cfg.hazard_margin;
  OrientedBox box;
  box.heading = self.heading;
  box.half_length = 0.5 * length;
  box.half_width = self.half_width + cfg.hazard_lateral_margin;
  box.center = self.position + (self.half_length + 0.5 * length) * box.axis_long();
  return box;
}

bool hazard_triggered(const TrafficState& state, int self_index, const DrivingConfig& cfg, double max_brake) {
  const OrientedBox region = hazard_region(state[self_index], cfg, max_brake);
  for (int j = 0; j < static_cast<int>(state.size()); ++j) {
    if (j != self_index && boxes_overlap(region, box_of(state[j]))) return true;
  }
  return false;
}

Waypoints rule_based_ego(const TrafficState& state, int self_index, RouteTracker& tracker,
                         const DrivingConfig& cfg, double max_brake) {
  const AgentState& self = state[self_index];
  const auto proj = tracker.update(self.position);
  if (proj.beyond_end && proj.overshoot > cfg.exhausted_tolerance) {
    throw Error(ErrorCode::kRouteExhausted, "agent is past the final route point");
  }
  if (hazard_triggered(state, self_index, cfg, max_brake)) return stop_waypoints();
  return route_waypoints(tracker.path(), tracker.progress(), self, cfg.cruise_speed, cfg.gains.dt);
}

void RuleBasedEgo::reset(const EgoContext& ctx) {
  tracker_ = RouteTracker(ctx.spec->ego_route, ctx.spec->initial_state.front().position);
  cfg_.gains.dt = ctx.spec->dt;
  max_brake_ = ctx.kinematics.max_brake;
}

Action RuleBasedEgo::act(const TrafficState& state, int) {
  const Waypoints w = rule_based_ego(state, 0, tracker_, cfg_, max_brake_);
  return controllers(w, state.front(), cfg_.gains);
}

}  // namespace adversim
