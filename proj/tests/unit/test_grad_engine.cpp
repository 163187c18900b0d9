#include "adversim/agents/policy.hpp"
#include "adversim/error.hpp"
#include "adversim/geometry.hpp"
#include "adversim/rollout.hpp"

#include "../support/fixtures.hpp"
#include "../support/oracles.hpp"

#include <gtest/gtest.h>

#include <chrono>

using namespace adversim;

namespace {

std::vector<Action> random_actions(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-0.6, 0.6);
  std::vector<Action> out;
  for (int k = 0; k < n; ++k) out.push_back({u(rng), u(rng)});
  return out;
}

std::vector<double> fd_gradient(const ScenarioSpec& spec, const MapModel& map, const EgoAgent& proto,
                                double h = 1e-5) {
  std::vector<double> g(spec.initial_plan.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    auto eval = [&](double x) {
      ScenarioSpec s = spec;
      s.initial_plan.raw()[k] = x;
      auto ego = proto.clone();
      return rollout(s, map, *ego, TapeMode::kNoRecord).cost.total;
    };
    g[k] = oracle::central_difference(eval, spec.initial_plan.raw()[k], h);
  }
  return g;
}

}  // namespace

TEST(Rollout, InitialStateAndLength) {
  const MapModel map = fixture::straight_road();
  ScenarioSpec spec;
  spec.map_id = map.id();
  spec.horizon = 80;
  spec.ego_route = {{-90, -1.75}, {90, -1.75}};
  spec.ego_goal = {90, -1.75};
  AgentState ego;
  ego.position = {-50, -1.75};
  ego.speed = 5;
  AgentState adv;
  adv.position = {-50, 1.75};
  adv.speed = 5;
  spec.initial_state = {ego, adv};
  spec.initial_plan = ActionPlan(1, 80);
  ReplayEgo replay({});
  const auto r = rollout(spec, map, replay, TapeMode::kNoRecord);
  EXPECT_EQ(r.states.size(), 81u);
  EXPECT_EQ(r.states.front(), spec.initial_state);
  EXPECT_EQ(r.verdict.kind, VerdictKind::kNoCollision);
  EXPECT_FALSE(r.verdict.time_index.has_value());
}

TEST(Rollout, HeadOnCollisionWithStationaryEgo) {
  const MapModel map = fixture::straight_road();
  ScenarioSpec spec;
  spec.map_id = map.id();
  spec.horizon = 40;
  spec.ego_route = {{-90, 0}, {90, 0}};
  spec.ego_goal = {90, 0};
  AgentState ego;
  AgentState adv;
  adv.position = {20, 0};
  adv.heading = kTwoPi / 2;
  adv.speed = 6;
  spec.initial_state = {ego, adv};
  spec.initial_plan = ActionPlan(1, 40);
  ConstantEgo stub;
  const auto r = rollout(spec, map, stub, TapeMode::kRecord);
  ASSERT_EQ(r.verdict.kind, VerdictKind::kEgoCollision);
  ASSERT_TRUE(r.verdict.time_index.has_value());
  EXPECT_LT(*r.verdict.time_index, 40);
  EXPECT_EQ(r.verdict.agents_involved, (std::pair{0, 1}));
  const auto& s = r.states[*r.verdict.time_index];
  EXPECT_TRUE(boxes_overlap(box_of(s[0]), box_of(s[1])));
  EXPECT_EQ(static_cast<int>(r.states.size()) - 1, *r.verdict.time_index);
}

TEST(Rollout, Deterministic) {
  const MapModel map = fixture::straight_road();
  std::mt19937_64 rng(3);
  const auto spec = fixture::random_scenario(rng, 2, 20);
  ConstantEgo e1({0.1, 0.05}), e2({0.1, 0.05});
  const auto a = rollout(spec, map, e1, TapeMode::kNoRecord);
  const auto b = rollout(spec, map, e2, TapeMode::kRecord);
  EXPECT_EQ(a.states, b.states);
}

TEST(BackwardDirect, TapeMissing) {
  const MapModel map = fixture::straight_road();
  std::mt19937_64 rng(1);
  const auto spec = fixture::random_scenario(rng, 1, 5);
  ConstantEgo ego;
  const auto r = rollout(spec, map, ego, TapeMode::kNoRecord);
  try {
    backward_direct(r);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTapeMissing);
  }
}

TEST(BackwardFull, NeedsDifferentiableEgo) {
  const MapModel map = fixture::straight_road();
  std::mt19937_64 rng(1);
  const auto spec = fixture::random_scenario(rng, 1, 5);
  ConstantEgo ego;
  try {
    rollout(spec, map, ego, TapeMode::kRecordFull);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotDifferentiableEgo);
  }
  const auto r = rollout(spec, map, ego, TapeMode::kRecord);
  try {
    backward_full(r);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotDifferentiableEgo);
  }
}

TEST(BackwardDirect, OneStepChainRule) {
  const MapModel map("open", {{{-60, -60}, {60, -60}, {60, 60}, {-60, 60}}});
  ScenarioSpec spec;
  spec.map_id = "open";
  spec.horizon = 1;
  spec.ego_route = {{0, 0}, {10, 0}};
  spec.ego_goal = {10, 0};
  AgentState ego;
  AgentState adv;
  adv.position = {3, 9};
  adv.heading = 1.0;
  adv.speed = 4;
  spec.initial_state = {ego, adv};
  spec.initial_plan = ActionPlan(1, 1, {0.3, -0.2});
  ConstantEgo stub({0, 0});
  SimConfig cfg;
  cfg.weights.gamma = 0;
  const auto r = rollout(spec, map, stub, TapeMode::kRecord, cfg);
  const auto g = backward_direct(r);

  // cost = (d0 + d1) / 2 with T = 1; only d1 depends on the action.
  StepJacobians jac;
  const AgentState next = step_with_jacobians(adv, spec.initial_plan.action(0, 0), BicycleParams{}, jac);
  const auto d = box_distance(box_of(r.states[1][0]), box_of(next));
  const Eigen::Vector4d dd(d.grad_b.center.x(), d.grad_b.center.y(), d.grad_b.heading, 0.0);
  const Eigen::Vector2d da = 0.5 * jac.d_next_d_action.transpose() * dd;
  EXPECT_NEAR(g.d_cost_d_raw[0], da[0] * squash_derivative(0.3), 1e-12);
  EXPECT_NEAR(g.d_cost_d_raw[1], da[1] * squash_derivative(-0.2), 1e-12);
}

TEST(BackwardDirect, MatchesFiniteDifferencesOpenLoop) {
  const MapModel map = fixture::straight_road();
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 1 + trial % 2;
    const auto spec = fixture::random_scenario(rng, n, 10);
    ReplayEgo ego(random_actions(rng, 10));
    const auto r = rollout(spec, map, ego, TapeMode::kRecord);
    const auto g = backward_direct(r);
    const auto fd = fd_gradient(spec, map, ego);
    EXPECT_LT(oracle::max_relative_error(g.d_cost_d_raw, fd), 1e-4) << "trial " << trial;
  }
}

TEST(BackwardDirect, ZeroAfterTermination) {
  const MapModel map = fixture::straight_road();
  ScenarioSpec spec;
  spec.map_id = map.id();
  spec.horizon = 30;
  spec.ego_route = {{-90, 0}, {90, 0}};
  spec.ego_goal = {90, 0};
  AgentState adv;
  adv.position = {15, 0};
  adv.heading = kTwoPi / 2;
  adv.speed = 8;
  spec.initial_state = {AgentState{}, adv};
  spec.initial_plan = ActionPlan(1, 30);
  ConstantEgo stub;
  const auto r = rollout(spec, map, stub, TapeMode::kRecord);
  ASSERT_EQ(r.verdict.kind, VerdictKind::kEgoCollision);
  const int stop = *r.verdict.time_index;
  const auto g = backward_direct(r);
  for (int t = stop; t < 30; ++t) {
    for (int c = 0; c < 2; ++c) EXPECT_EQ(g.d_cost_d_raw[spec.initial_plan.index(0, t, c)], 0.0);
  }
  for (double v : g.d_cost_d_raw) EXPECT_TRUE(std::isfinite(v));
}

TEST(BackwardFull, MatchesFiniteDifferencesClosedLoop) {
  const MapModel map = fixture::straight_road();
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 1 + trial % 3;
    const auto spec = fixture::random_scenario(rng, n, 10);
    auto model = std::make_shared<PolicyModel>(FeatureConfig{}.dimension(), 64, 100 + trial);
    PolicyEgo ego(model);
    const auto r = rollout(spec, map, ego, TapeMode::kRecordFull);
    const auto g = backward_full(r);
    const auto fd = fd_gradient(spec, map, ego);
    EXPECT_LT(oracle::max_relative_error(g.d_cost_d_raw, fd), 1e-4) << "trial " << trial;
  }
}

TEST(BackwardFull, ZeroPolicyEqualsDirect) {
  const MapModel map = fixture::straight_road();
  std::mt19937_64 rng(8);
  const auto spec = fixture::random_scenario(rng, 2, 10);
  auto model = std::make_shared<PolicyModel>(FeatureConfig{}.dimension(), 64, 1);
  model->parameters().setZero();
  PolicyEgo ego(model);
  const auto r = rollout(spec, map, ego, TapeMode::kRecordFull);
  EXPECT_EQ(backward_full(r).d_cost_d_raw, backward_direct(r).d_cost_d_raw);
}

TEST(BackwardDirect, DescentDirectionClosedLoop) {
  const MapModel map = fixture::straight_road();
  std::mt19937_64 rng(21);
  int ok = 0;
  const int trials = 100;
  for (int trial = 0; trial < trials; ++trial) {
    const auto spec = fixture::random_scenario(rng, 1 + trial % 2, 10);
    auto model = std::make_shared<PolicyModel>(FeatureConfig{}.dimension(), 64, trial);
    PolicyEgo ego(model);
    const auto r = rollout(spec, map, ego, TapeMode::kRecord);
    const auto g = backward_direct(r);
    double norm = 0;
    for (double v : g.d_cost_d_raw) norm += v * v;
    norm = std::sqrt(norm);
    ScenarioSpec moved = spec;
    if (norm > 0) {
      for (std::size_t k = 0; k < g.d_cost_d_raw.size(); ++k) moved.initial_plan.raw()[k] -= 1e-3 * g.d_cost_d_raw[k] / norm;
    }
    PolicyEgo ego2(model);
    const double after = rollout(moved, map, ego2, TapeMode::kNoRecord).cost.total;
    if (after <= r.cost.total) ++ok;
  }
  EXPECT_GE(ok, 90);
}

TEST(BackwardFull, SlowerThanDirect) {
  const MapModel map = fixture::straight_road();
  std::mt19937_64 rng(2);
  const auto spec = fixture::random_scenario(rng, 4, 80);
  auto model = std::make_shared<PolicyModel>(FeatureConfig{}.dimension(), 64, 4);
  auto time = [&](TapeMode mode) {
    const auto start = std::chrono::steady_clock::now();
    for (int k = 0; k < 20; ++k) {
      PolicyEgo ego(model);
      const auto r = rollout(spec, map, ego, mode);
      if (mode == TapeMode::kRecordFull) {
        backward_full(r);
      } else {
        backward_direct(r);
      }
    }
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };
  const double direct = time(TapeMode::kRecord);
  const double full = time(TapeMode::kRecordFull);
  EXPECT_GT(full, direct);
}
