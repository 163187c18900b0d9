#pragma once

#include "adversim/agents/controllers.hpp"
#include "adversim/agents/features.hpp"
#include "adversim/agents/route.hpp"
#include "adversim/agents/rule_based.hpp"
#include "adversim/ego_agent.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <memory>
#include <string>

namespace adversim {

/// Feed-forward waypoint predictor: input -> tanh(hidden) -> tanh(hidden) -> 8.
///
/// The 8 outputs (times output_scale) are four ego-frame waypoints. All
/// parameters live in one flat vector in the order W1, b1, W2, b2, W3, b3,
/// matrices column-major.
class PolicyModel {
 public:
  PolicyModel() = default;
  PolicyModel(int input_dim, int hidden_dim, std::uint64_t seed, double output_scale = 5.0);

  static constexpr int kOutputDim = 8;

  int input_dim() const { return input_dim_; }
  int hidden_dim() const { return hidden_dim_; }
  double output_scale() const { return output_scale_; }
  Eigen::Index num_parameters() const { return params_.size(); }

  const Eigen::VectorXd& parameters() const { return params_; }
  Eigen::VectorXd& parameters() { return params_; }

  Eigen::VectorXd forward(const Eigen::VectorXd& x) const;
  /// Columns are samples.
  Eigen::MatrixXd forward_batch(const Eigen::MatrixXd& x) const;
  /// d(output)/d(input), 8 x input_dim.
  Eigen::MatrixXd input_jacobian(const Eigen::VectorXd& x) const;

  /// Mean absolute error over outputs and samples; fills `grad` (same shape as
  /// parameters) when non-null.
  double l1_loss(const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets, Eigen::VectorXd* grad) const;

  std::string to_json() const;
  static PolicyModel from_json(const std::string& bytes);

  bool operator==(const PolicyModel& other) const;

 private:
  struct Views;
  Views views() const;

  int input_dim_ = 0;
  int hidden_dim_ = 0;
  double output_scale_ = 5.0;
  Eigen::VectorXd params_;
};

struct GoalPoint {
  Vec2 point = Vec2::Zero();
  Eigen::Matrix2d d_point_d_ego = Eigen::Matrix2d::Zero();
};

/// Route target point `lookahead` metres beyond the projection.
GoalPoint route_goal(const RoutePath& path, const RoutePath::Projection& proj, double lookahead);

/// Ego driven by a PolicyModel through the proportional controllers.
class PolicyEgo final : public EgoAgent {
 public:
  PolicyEgo(std::shared_ptr<const PolicyModel> model, FeatureConfig features = {}, ControllerGains gains = {});

  void reset(const EgoContext& ctx) override;
  Action act(const TrafficState& state, int t) override;
  bool differentiable() const override { return true; }
  Action act_with_jacobian(const TrafficState& state, int t, Eigen::MatrixXd& jac) override;
  std::unique_ptr<EgoAgent> clone() const override { return std::make_unique<PolicyEgo>(*this); }
  std::string name() const override { return "policy"; }

  const PolicyModel& model() const { return *model_; }

 private:
  std::shared_ptr<const PolicyModel> model_;
  FeatureConfig features_;
  ControllerGains gains_;
  RouteTracker tracker_;
};

}  // namespace adversim
