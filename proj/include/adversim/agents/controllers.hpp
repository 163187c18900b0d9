#pragma once

#include "adversim/scenario.hpp"

#include <Eigen/Core>

#include <array>

namespace adversim {

/// Four future positions in the ego frame, one timestep apart.
using Waypoints = std::array<Vec2, 4>;

Eigen::Matrix<double, 8, 1> flatten(const Waypoints& w);
Waypoints unflatten_waypoints(const Eigen::Ref<const Eigen::VectorXd>& v);

/// Gains of the proportional lateral and longitudinal laws.
struct ControllerGains {
  double k_lateral = 2.0;   ///< steer per radian of heading error to the aim point
  double k_accel = 0.5;     ///< throttle per m/s of speed deficit
  double k_brake = 1.0;     ///< brake per m/s of excess speed beyond the deadband
  double deadband = 0.5;    ///< m/s of excess speed tolerated without braking
  double dt = 0.25;         ///< waypoint spacing in time [s]
};

/// d(action)/d(waypoints) (2 x 8, flattened [w0x w0y ... w3x w3y]) and
/// d(action)/d(speed).
struct ControllerJacobian {
  Eigen::Matrix<double, 2, 8> d_waypoints = Eigen::Matrix<double, 2, 8>::Zero();
  Eigen::Vector2d d_speed = Eigen::Vector2d::Zero();
};

/// Lateral: steer = clamp(k_lateral * atan2(aim)), aim = mean(w0, w1).
/// Longitudinal: desired speed = |w2 - w0| / (2 dt); accelerate on a deficit,
/// coast within the deadband, brake beyond it.
Action controllers(const Waypoints& w, const AgentState& state, const ControllerGains& gains);
Action controllers_with_jacobian(const Waypoints& w, const AgentState& state, const ControllerGains& gains,
                                 ControllerJacobian& jac);

double desired_speed(const Waypoints& w, const ControllerGains& gains);

}  // namespace adversim
