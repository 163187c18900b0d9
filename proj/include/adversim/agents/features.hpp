#pragma once

#include "adversim/scenario.hpp"

#include <Eigen/Core>

namespace adversim {

/// Ego-centric featurization of the true traffic state.
///
/// Layout: [goal_x, goal_y, ego_speed, then per nearest adversary
/// (rel_x, rel_y, sin(rel_heading), cos(rel_heading), speed)], zero padded.
/// Positions are in the ego frame and divided by position_scale; speeds by
/// speed_scale.
struct FeatureConfig {
  int nearest = 4;
  double goal_lookahead = 8.0;  ///< [m] along the route
  double position_scale = 20.0;
  double speed_scale = 10.0;

  int dimension() const { return 3 + 5 * nearest; }
};

using FeatureVector = Eigen::VectorXd;

/// Features of `state` given the route target point. When `jac` is non-null it
/// receives d(features)/d(state) as a dim x 4(N+1) matrix; `d_goal_d_ego` is
/// the derivative of the target point w.r.t. the ego position (2 x 2).
FeatureVector extract_features(const TrafficState& state, const Vec2& goal, const FeatureConfig& cfg,
                               Eigen::MatrixXd* jac = nullptr,
                               const Eigen::Matrix2d& d_goal_d_ego = Eigen::Matrix2d::Zero());

}  // namespace adversim
