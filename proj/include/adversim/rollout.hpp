#pragma once

#include "adversim/costs.hpp"
#include "adversim/ego_agent.hpp"
#include "adversim/kinematics.hpp"
#include "adversim/map_model.hpp"
#include "adversim/scenario.hpp"

#include <Eigen/Core>

#include <optional>
#include <vector>

namespace adversim {

struct SimConfig {
  BicycleParams kinematics;  ///< dt is overridden by the scenario's dt
  CostWeights weights;
};

enum class TapeMode {
  kNoRecord,
  kRecord,      ///< kinematics Jacobians only
  kRecordFull,  ///< also the ego's action Jacobian; needs a differentiable ego
};

/// Jacobians of the step from state t to t+1.
struct StepTape {
  std::vector<StepJacobians> agents;
  Eigen::MatrixXd ego_action_jacobian;  ///< 2 x 4(N+1), full mode only
};

struct RolloutTape {
  bool full = false;
  std::vector<StepTape> steps;
};

struct RolloutResult {
  std::vector<TrafficState> states;  ///< states[0] is the initial state
  Verdict verdict;
  CostBreakdown cost;  ///< zero when there are no adversaries
  std::optional<RolloutTape> tape;
  ActionPlan plan;
  std::vector<Action> ego_actions;

  int steps_taken() const { return static_cast<int>(states.size()) - 1; }
};

/// d(total cost)/d(raw plan parameters), laid out like ActionPlan::raw().
struct PlanGradient {
  std::vector<double> d_cost_d_raw;
};

/// First violation in `state`, checked ego collisions, then adversary pairs,
/// then adversaries off-road. Lowest indices win.
std::optional<Verdict> classify_state(const TrafficState& state, const MapModel& map, int t);

/// Closed-loop simulation of `spec` against `ego`.
RolloutResult rollout(const ScenarioSpec& spec, const MapModel& map, EgoAgent& ego, TapeMode mode,
                      const SimConfig& cfg = {});

/// Reverse sweep through adversary dynamics only; the ego's reaction is
/// treated as constant.
PlanGradient backward_direct(const RolloutResult& result);

/// Reverse sweep that also follows the ego's dependence on every state.
PlanGradient backward_full(const RolloutResult& result);

}  // namespace adversim
