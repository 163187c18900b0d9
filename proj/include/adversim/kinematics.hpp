#pragma once

#include "adversim/scenario.hpp"

#include <Eigen/Core>

namespace adversim {

/// Constants of the kinematic bicycle model.
struct BicycleParams {
  double lf = 1.3;         ///< front axle to center of gravity [m]
  double lr = 1.3;         ///< rear axle to center of gravity [m]
  double max_steer = 0.7;  ///< steering angle at |steer| = 1 [rad]
  double max_accel = 4.0;  ///< [m/s^2]
  double max_brake = 8.0;  ///< [m/s^2]
  double dt = 0.25;        ///< [s]
};

void validate(const BicycleParams& params);

/// Jacobians of one step, state ordered [x, y, heading, speed].
struct StepJacobians {
  Eigen::Matrix4d d_next_d_state = Eigen::Matrix4d::Identity();
  Eigen::Matrix<double, 4, 2> d_next_d_action = Eigen::Matrix<double, 4, 2>::Zero();
};

/// One forward-Euler step of the kinematic bicycle model.
///
///   delta = steer * max_steer
///   beta  = atan(lr * tan(delta) / (lf + lr))
///   x'    = x + v cos(psi + beta) dt
///   y'    = y + v sin(psi + beta) dt
///   psi'  = psi + (v / lr) sin(beta) dt          (wrapped to [0, 2pi))
///   v'    = max(v + a dt, 0),  a = throttle * (throttle >= 0 ? max_accel : max_brake)
AgentState step(const AgentState& state, const Action& action, const BicycleParams& params);

/// Same update plus exact derivatives. When the speed clamp is active the
/// subgradient 0 is used for dv'/dv and dv'/dthrottle.
AgentState step_with_jacobians(const AgentState& state, const Action& action,
                               const BicycleParams& params, StepJacobians& jac);

/// Upper bound on |psi' - psi| for a given speed.
double max_heading_change(double speed, const BicycleParams& params);

}  // namespace adversim
