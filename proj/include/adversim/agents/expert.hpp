#pragma once

#include "adversim/agents/rule_based.hpp"

#include <vector>

namespace adversim {

struct ExpertConfig {
  DrivingConfig driving;
  std::vector<double> profiles{1.0, 0.6, 0.3, 0.0};  ///< fractions of cruise speed, fastest first
  int forecast_horizon = 16;                          ///< steps
  double safety_margin = 0.5;                         ///< [m] inflation of the ego footprint
  double headway = 1.0;                               ///< [s] footprint stretched forward by headway * speed
};

struct ExpertDecision {
  Waypoints waypoints;
  int profile = 0;  ///< index into ExpertConfig::profiles
};

/// Future boxes of every adversary obtained by rolling its known plan forward.
/// boxes[k][i] is adversary i (0-based) at k + 1 steps ahead of t.
std::vector<std::vector<OrientedBox>> forecast_adversaries(const TrafficState& state, const ActionPlan& plan,
                                                           int t, int steps, const BicycleParams& params);

/// Privileged planner: picks the fastest speed profile whose swept footprint
/// along the route avoids every forecast adversary box. The last profile
/// (full stop) is taken when nothing else is feasible.
ExpertDecision privileged_expert(const TrafficState& state, const ActionPlan& plan, int t, RouteTracker& tracker,
                                 const ExpertConfig& cfg, const BicycleParams& params);

class ExpertEgo final : public EgoAgent {
 public:
  explicit ExpertEgo(ExpertConfig cfg = {}) : cfg_(std::move(cfg)) {}

  void reset(const EgoContext& ctx) override;
  Action act(const TrafficState& state, int t) override;
  std::unique_ptr<EgoAgent> clone() const override { return std::make_unique<ExpertEgo>(*this); }
  std::string name() const override { return "expert"; }

  const ExpertConfig& config() const { return cfg_; }
  const Waypoints& last_waypoints() const { return last_.waypoints; }
  const RouteTracker& tracker() const { return tracker_; }

 private:
  ExpertConfig cfg_;
  RouteTracker tracker_;
  ActionPlan plan_;
  BicycleParams params_;
  ExpertDecision last_;
};

}  // namespace adversim
