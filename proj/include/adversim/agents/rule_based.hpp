#pragma once

#include "adversim/agents/controllers.hpp"
#include "adversim/agents/route.hpp"
#include "adversim/ego_agent.hpp"
#include "adversim/geometry.hpp"

namespace adversim {

struct DrivingConfig {
  double cruise_speed = 6.0;        ///< [m/s]
  double hazard_gain = 2.0;         ///< multiplies the braking distance v^2 / (2 max_brake)
  double hazard_margin = 1.0;       ///< [m] added to the hazard length
  double hazard_lateral_margin = 0.3;
  double exhausted_tolerance = 5.0; ///< [m] past the final route point before RouteExhausted
  ControllerGains gains;
};

/// Tracks arclength progress of one agent along its route.
class RouteTracker {
 public:
  RouteTracker() = default;
  RouteTracker(const Polyline& route, const Vec2& start);

  /// Re-projects near the previous progress and returns the projection.
  RoutePath::Projection update(const Vec2& position);
  double progress() const { return progress_; }
  const RoutePath& path() const { return path_; }

  static constexpr double kBackWindow = 5.0;
  static constexpr double kForwardWindow = 25.0;

 private:
  RoutePath path_;
  double progress_ = 0.0;
};

/// Waypoints k * speed * dt ahead of arclength s (k = 1..4), in the frame of `self`.
Waypoints route_waypoints(const RoutePath& route, double s, const AgentState& self, double speed, double dt);

/// All four waypoints at the agent's own position.
inline Waypoints stop_waypoints() { return {Vec2::Zero(), Vec2::Zero(), Vec2::Zero(), Vec2::Zero()}; }

/// Rectangle directly ahead of the agent whose length grows with the braking distance.
OrientedBox hazard_region(const AgentState& self, const DrivingConfig& cfg, double max_brake);

/// True iff any other agent's current box intersects the hazard region of `self_index`.
bool hazard_triggered(const TrafficState& state, int self_index, const DrivingConfig& cfg, double max_brake);

/// Route-following waypoints at cruise speed, or stop waypoints when the
/// hazard region is occupied. Throws Error(kRouteExhausted) once the agent is
/// past the final route point by more than cfg.exhausted_tolerance.
Waypoints rule_based_ego(const TrafficState& state, int self_index, RouteTracker& tracker,
                         const DrivingConfig& cfg, double max_brake);

class RuleBasedEgo final : public EgoAgent {
 public:
  explicit RuleBasedEgo(DrivingConfig cfg = {}) : cfg_(cfg) {}

  void reset(const EgoContext& ctx) override;
  Action act(const TrafficState& state, int t) override;
  std::unique_ptr<EgoAgent> clone() const override { return std::make_unique<RuleBasedEgo>(*this); }
  std::string name() const override { return "rule_based"; }

 private:
  DrivingConfig cfg_;
  RouteTracker tracker_;
  double max_brake_ = 8.0;
};

}  // namespace adversim
