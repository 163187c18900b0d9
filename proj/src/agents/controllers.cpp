#include "adversim/agents/controllers.hpp"

#include <algorithm>
#include <cmath>

namespace adversim {

Eigen::Matrix<double, 8, 1> flatten(const Waypoints& w) {
  Eigen::Matrix<double, 8, 1> v;
  for (int k = 0; k < 4; ++k) v.segment<2>(2 * k) = w[k];
  return v;
}

Waypoints unflatten_waypoints(const Eigen::Ref<const Eigen::VectorXd>& v) {
  Waypoints w;
  for (int k = 0; k < 4; ++k) w[k] = v.segment<2>(2 * k);
  return w;
}

namespace {

constexpr double kNormEps = 1e-12;

double smooth_norm(const Vec2& v) { return std::sqrt(v.squaredNorm() + kNormEps); }

}  // namespace

double desired_speed(const Waypoints& w, const ControllerGains& g) {
  return (smooth_norm(w[2] - w[0]) - std::sqrt(kNormEps)) / (2.0 * g.dt);
}

Action controllers_with_jacobian(const Waypoints& w, const AgentState& state, const ControllerGains& g,
                                 ControllerJacobian& jac) {
  jac = ControllerJacobian{};
  Action a;

  const Vec2 aim = 0.5 * (w[0] + w[1]);
  const double r2 = aim.squaredNorm();
  const double heading_error = r2 > 0.0 ? std::atan2(aim.y(), aim.x()) : 0.0;
  const double raw_steer = g.k_lateral * heading_error;
  a.steer = std::clamp(raw_steer, -1.0, 1.0);
  if (r2 > 0.0 && std::abs(raw_steer) < 1.0) {
    const Vec2 d_err_d_aim = Vec2(-aim.y(), aim.x()) / r2;
    const Vec2 d = 0.5 * g.k_lateral * d_err_d_aim;
    jac.d_waypoints.block<1, 2>(1, 0) = d.transpose();
    jac.d_waypoints.block<1, 2>(1, 2) = d.transpose();
  }

  const Vec2 span = w[2] - w[0];
  const double n = smooth_norm(span);
  const double v_des = (n - std::sqrt(kNormEps)) / (2.0 * g.dt);
  const Vec2 d_vdes_d_span = span / (n * 2.0 * g.dt);
  const double e = v_des - state.speed;
  double d_thr_d_e = 0.0;
  if (e >= 0.0) {
    const double raw = g.k_accel * e;
    a.throttle = std::min(raw, 1.0);
    d_thr_d_e = raw < 1.0 ? g.k_accel : 0.0;
  } else if (e >= -g.deadband) {
    a.throttle = 0.0;
  } else {
    const double raw = g.k_brake * (e + g.deadband);
    a.throttle = std::max(raw, -1.0);
    d_thr_d_e = raw > -1.0 ? g.k_brake : 0.0;
  }
  jac.d_waypoints.block<1, 2>(0, 4) = d_thr_d_e * d_vdes_d_span.transpose();
  jac.d_waypoints.block<1, 2>(0, 0) = -d_thr_d_e * d_vdes_d_span.transpose();
  jac.d_speed[0] = -d_thr_d_e;
  return a;
}

Action controllers(const Waypoints& w, const AgentState& state, const ControllerGains& g) {
  ControllerJacobian unused;
  return controllers_with_jacobian(w, state, g, unused);
}

}  // namespace adversim
