#include "adversim/kinematics.hpp"

#include "adversim/error.hpp"

#include <cmath>
#include <numbers>

namespace adversim {

void validate(const BicycleParams& p) {
  if (!(p.lf > 0 && p.lr > 0)) throw Error(ErrorCode::kInvalidArgument, "lf and lr must be positive");
  if (!(p.max_steer > 0 && p.max_steer < std::numbers::pi / 2)) {
    throw Error(ErrorCode::kInvalidArgument, "max_steer must lie in (0, pi/2)");
  }
  if (!(p.max_accel > 0 && p.max_brake > 0)) {
    throw Error(ErrorCode::kInvalidArgument, "max_accel and max_brake must be positive");
  }
  if (!(p.dt > 0)) throw Error(ErrorCode::kInvalidArgument, "dt must be positive");
}

namespace {

struct Intermediates {
  double delta, tan_delta, k, beta, dbeta_ddelta, accel_gain, raw_speed;
};

Intermediates intermediates(const AgentState& s, const Action& a, const BicycleParams& p) {
  Intermediates m{};
  m.delta = a.steer * p.max_steer;
  m.tan_delta = std::tan(m.delta);
  m.k = p.lr / (p.lf + p.lr);
  m.beta = std::atan(m.k * m.tan_delta);
  const double sec2 = 1.0 + m.tan_delta * m.tan_delta;
  m.dbeta_ddelta = m.k * sec2 / (1.0 + m.k * m.k * m.tan_delta * m.tan_delta);
  m.accel_gain = a.throttle >= 0.0 ? p.max_accel : p.max_brake;
  m.raw_speed = s.speed + a.throttle * m.accel_gain * p.dt;
  return m;
}

struct Trig {
  double cos_course, sin_course, cos_beta, sin_beta;
};

// Not inlined, so step and step_with_jacobians round identically.
[[gnu::noinline]] Trig trig(double heading, double beta) {
  const double course = heading + beta;
  return {std::cos(course), std::sin(course), std::cos(beta), std::sin(beta)};
}

AgentState advance(const AgentState& s, const BicycleParams& p, const Intermediates& m, const Trig& tr) {
  AgentState next = s;
  next.position.x() = s.position.x() + s.speed * tr.cos_course * p.dt;
  next.position.y() = s.position.y() + s.speed * tr.sin_course * p.dt;
  next.heading = normalize_heading(s.heading + (s.speed / p.lr) * tr.sin_beta * p.dt);
  next.speed = m.raw_speed > 0.0 ? m.raw_speed : 0.0;
  return next;
}

}  // namespace

AgentState step(const AgentState& state, const Action& action, const BicycleParams& params) {
  const Intermediates m = intermediates(state, action, params);
  return advance(state, params, m, trig(state.heading, m.beta));
}

AgentState step_with_jacobians(const AgentState& s, const Action& a, const BicycleParams& p,
                               StepJacobians& jac) {
  const Intermediates m = intermediates(s, a, p);
  const Trig tr = trig(s.heading, m.beta);
  const double c = tr.cos_course;
  const double sn = tr.sin_course;
  const double dt = p.dt;
  const double dbeta_dsteer = m.dbeta_ddelta * p.max_steer;

  auto& A = jac.d_next_d_state;
  A.setIdentity();
  A(0, 2) = -s.speed * sn * dt;
  A(0, 3) = c * dt;
  A(1, 2) = s.speed * c * dt;
  A(1, 3) = sn * dt;
  A(2, 3) = tr.sin_beta / p.lr * dt;
  const bool speed_active = m.raw_speed > 0.0;
  A(3, 3) = speed_active ? 1.0 : 0.0;

  auto& B = jac.d_next_d_action;
  B.setZero();
  B(0, 1) = -s.speed * sn * dt * dbeta_dsteer;
  B(1, 1) = s.speed * c * dt * dbeta_dsteer;
  B(2, 1) = s.speed / p.lr * tr.cos_beta * dt * dbeta_dsteer;
  B(3, 0) = speed_active ? m.accel_gain * dt : 0.0;

  return advance(s, p, m, tr);
}

double max_heading_change(double speed, const BicycleParams& p) {
  const double beta_max = std::atan(p.lr * std::tan(p.max_steer) / (p.lf + p.lr));
  return speed / p.lr * std::sin(beta_max) * p.dt;
}

}  // namespace adversim
