#include "adversim/kinematics.hpp"

#include "../support/oracles.hpp"

#include <gtest/gtest.h>

#include <bit>
#include <random>

using namespace adversim;

namespace {

Eigen::Vector4d as_vec(const AgentState& s) { return {s.position.x(), s.position.y(), s.heading, s.speed}; }

AgentState make_state(double x, double y, double heading, double speed) {
  AgentState s;
  s.position = {x, y};
  s.heading = heading;
  s.speed = speed;
  return s;
}

bool bitwise_equal(const AgentState& a, const AgentState& b) {
  return std::bit_cast<std::uint64_t>(a.position.x()) == std::bit_cast<std::uint64_t>(b.position.x()) &&
         std::bit_cast<std::uint64_t>(a.position.y()) == std::bit_cast<std::uint64_t>(b.position.y()) &&
         std::bit_cast<std::uint64_t>(a.heading) == std::bit_cast<std::uint64_t>(b.heading) &&
         std::bit_cast<std::uint64_t>(a.speed) == std::bit_cast<std::uint64_t>(b.speed);
}

// Heading is wrapped, so compare heading outputs through angle_difference.
Eigen::Vector4d delta(const AgentState& a, const AgentState& b) {
  return {a.position.x() - b.position.x(), a.position.y() - b.position.y(), angle_difference(a.heading, b.heading),
          a.speed - b.speed};
}

}  // namespace

TEST(Kinematics, StraightLineMotion) {
  const AgentState next = step(make_state(0, 0, 0, 10), {0, 0}, BicycleParams{});
  EXPECT_DOUBLE_EQ(next.position.x(), 2.5);
  EXPECT_DOUBLE_EQ(next.position.y(), 0.0);
  EXPECT_DOUBLE_EQ(next.heading, 0.0);
  EXPECT_DOUBLE_EQ(next.speed, 10.0);
}

TEST(Kinematics, SpeedClampAndSubgradient) {
  const BicycleParams p;
  StepJacobians jac;
  const AgentState next = step_with_jacobians(make_state(3, 4, 1, 0), {-1, 0.2}, p, jac);
  EXPECT_EQ(next.speed, 0.0);
  EXPECT_EQ(jac.d_next_d_action(3, 0), 0.0);
  EXPECT_EQ(jac.d_next_d_state(3, 3), 0.0);
  EXPECT_EQ(step(make_state(0, 0, 0, 1.0), {-1, 0}, p).speed, 0.0);
}

TEST(Kinematics, ReadOffDerivative) {
  StepJacobians jac;
  step_with_jacobians(make_state(0, 0, 0, 7), {0, 0}, BicycleParams{}, jac);
  EXPECT_DOUBLE_EQ(jac.d_next_d_state(0, 3), 0.25);
}

TEST(Kinematics, ClosedFormEulerUpdate) {
  const BicycleParams p;
  const AgentState next = step(make_state(0, 0, 0, 5), {0.5, 0.3}, p);
  const double beta = std::atan(p.lr * std::tan(0.3 * p.max_steer) / (p.lf + p.lr));
  EXPECT_NEAR(next.position.x(), 5 * std::cos(beta) * p.dt, 1e-15);
  EXPECT_NEAR(next.position.y(), 5 * std::sin(beta) * p.dt, 1e-15);
  EXPECT_NEAR(next.heading, 5 / p.lr * std::sin(beta) * p.dt, 1e-15);
  EXPECT_NEAR(next.speed, 5 + 0.5 * p.max_accel * p.dt, 1e-15);
}

// One Euler step at dt = 0.25 carries O(dt^2) local error against the exact
// flow, about 6 cm here. Composing the same update over small substeps must
// converge to the RK4 reference of the ODE.
TEST(Kinematics, EulerConvergesToRk4Reference) {
  BicycleParams p;
  const Eigen::Vector4d ref =
      oracle::rk4_bicycle({0, 0, 0, 5}, 0.5, 0.3, p.lf, p.lr, p.max_steer, p.max_accel, p.max_brake, 0.25);

  const AgentState one = step(make_state(0, 0, 0, 5), {0.5, 0.3}, p);
  const double beta = std::atan(p.lr * std::tan(0.3 * p.max_steer) / (p.lf + p.lr));
  const double v_max = 5 + 0.5 * p.max_accel * p.dt;
  const double local_bound = 0.5 * p.dt * p.dt * (0.5 * p.max_accel + v_max * v_max / p.lr * std::sin(beta));
  EXPECT_LT((as_vec(one) - ref).head<2>().norm(), local_bound);

  for (int sub : {64, 256}) {
    BicycleParams fine = p;
    fine.dt = p.dt / sub;
    AgentState s = make_state(0, 0, 0, 5);
    for (int k = 0; k < sub; ++k) s = step(s, {0.5, 0.3}, fine);
    EXPECT_LT((as_vec(s) - ref).head<2>().norm(), 5e-3) << sub;
    EXPECT_NEAR(s.speed, ref[3], 1e-9);
  }
}

TEST(Kinematics, InvariantsOnRandomSamples) {
  const BicycleParams p;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> pos(-50.0, 50.0);
  std::uniform_real_distribution<double> ang(0.0, kTwoPi);
  std::uniform_real_distribution<double> spd(0.0, 15.0);
  for (int k = 0; k < 1000; ++k) {
    const AgentState s = make_state(pos(rng), pos(rng), ang(rng), spd(rng));
    const Action a{u(rng), u(rng)};

    const AgentState next = step(s, a, p);
    EXPECT_GE(next.speed, 0.0);
    EXPECT_GE(next.heading, 0.0);
    EXPECT_LT(next.heading, kTwoPi);
    EXPECT_LE(std::abs(angle_difference(next.heading, s.heading)), max_heading_change(s.speed, p) + 1e-12);

    EXPECT_EQ(step(s, {a.throttle, 0.0}, p).heading, s.heading);
    EXPECT_EQ(step(s, {0.0, a.steer}, p).speed, s.speed);

    StepJacobians jac;
    const AgentState viaj = step_with_jacobians(s, a, p, jac);
    EXPECT_TRUE(bitwise_equal(viaj, next));
  }
}

TEST(Kinematics, JacobiansMatchFiniteDifferences) {
  const BicycleParams p;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-0.95, 0.95);
  std::uniform_real_distribution<double> pos(-20.0, 20.0);
  std::uniform_real_distribution<double> ang(0.5, kTwoPi - 0.5);
  std::uniform_real_distribution<double> spd(0.5, 15.0);
  const double h = 1e-5;
  double worst = 0.0;
  int checked = 0;
  while (checked < 1000) {
    const AgentState s = make_state(pos(rng), pos(rng), ang(rng), spd(rng));
    const Action a{u(rng), u(rng)};
    if (std::abs(a.throttle) < 2 * h) continue;
    if (s.speed + a.throttle * (a.throttle >= 0 ? p.max_accel : p.max_brake) * p.dt < 0.05) continue;
    ++checked;

    StepJacobians jac;
    step_with_jacobians(s, a, p, jac);
    std::vector<double> got, ref;
    for (int c = 0; c < 4; ++c) {
      AgentState lo = s, hi = s;
      if (c < 2) {
        lo.position[c] -= h;
        hi.position[c] += h;
      } else if (c == 2) {
        lo.heading -= h;
        hi.heading += h;
      } else {
        lo.speed -= h;
        hi.speed += h;
      }
      const Eigen::Vector4d fd = delta(step(hi, a, p), step(lo, a, p)) / (2 * h);
      for (int r = 0; r < 4; ++r) {
        got.push_back(jac.d_next_d_state(r, c));
        ref.push_back(fd[r]);
      }
    }
    for (int c = 0; c < 2; ++c) {
      Action lo = a, hi = a;
      (c == 0 ? lo.throttle : lo.steer) -= h;
      (c == 0 ? hi.throttle : hi.steer) += h;
      const Eigen::Vector4d fd = delta(step(s, hi, p), step(s, lo, p)) / (2 * h);
      for (int r = 0; r < 4; ++r) {
        got.push_back(jac.d_next_d_action(r, c));
        ref.push_back(fd[r]);
      }
    }
    for (double g : got) ASSERT_TRUE(std::isfinite(g));
    worst = std::max(worst, oracle::max_relative_error(got, ref));
  }
  EXPECT_LT(worst, 1e-6);
}

TEST(Kinematics, ValidateRejectsNonsense) {
  BicycleParams p;
  p.dt = 0.0;
  EXPECT_ANY_THROW(validate(p));
  p = BicycleParams{};
  p.lr = -1.0;
  EXPECT_ANY_THROW(validate(p));
}
