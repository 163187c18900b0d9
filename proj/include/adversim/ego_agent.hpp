#pragma once

#include "adversim/kinematics.hpp"
#include "adversim/map_model.hpp"
#include "adversim/scenario.hpp"

#include <Eigen/Core>

#include <memory>
#include <string>
#include <vector>

namespace adversim {

/// Everything an ego may consult when a rollout starts. The plan pointer is
/// privileged information; only the expert reads it.
struct EgoContext {
  const ScenarioSpec* spec = nullptr;
  const ActionPlan* plan = nullptr;
  const MapModel* map = nullptr;
  BicycleParams kinematics;
};

/// The driving agent under attack.
class EgoAgent {
 public:
  virtual ~EgoAgent() = default;

  virtual void reset(const EgoContext& ctx) = 0;
  virtual Action act(const TrafficState& state, int t) = 0;

  /// True when act_with_jacobian is implemented.
  virtual bool differentiable() const { return false; }

  /// Action plus d(action)/d(state), a 2 x 4(N+1) matrix over the flattened
  /// [x, y, heading, speed] blocks of every agent.
  virtual Action act_with_jacobian(const TrafficState& state, int t, Eigen::MatrixXd& jac);

  virtual std::unique_ptr<EgoAgent> clone() const = 0;
  virtual std::string name() const = 0;
};

/// Open-loop ego replaying a fixed action sequence (zero action past its end).
class ReplayEgo final : public EgoAgent {
 public:
  explicit ReplayEgo(std::vector<Action> actions) : actions_(std::move(actions)) {}

  void reset(const EgoContext&) override {}
  Action act(const TrafficState&, int t) override;
  bool differentiable() const override { return true; }
  Action act_with_jacobian(const TrafficState& state, int t, Eigen::MatrixXd& jac) override;
  std::unique_ptr<EgoAgent> clone() const override { return std::make_unique<ReplayEgo>(*this); }
  std::string name() const override { return "replay"; }

 private:
  std::vector<Action> actions_;
};

/// Ego applying one constant action at every step (full brake by default).
class ConstantEgo final : public EgoAgent {
 public:
  explicit ConstantEgo(Action action = {-1.0, 0.0}) : action_(action) {}

  void reset(const EgoContext&) override {}
  Action act(const TrafficState&, int) override { return action_; }
  std::unique_ptr<EgoAgent> clone() const override { return std::make_unique<ConstantEgo>(*this); }
  std::string name() const override { return "constant"; }

 private:
  Action action_;
};

}  // namespace adversim
