#include "adversim/rollout.hpp"

#include "adversim/error.hpp"
#include "adversim/geometry.hpp"

namespace adversim {

std::optional<Verdict> classify_state(const TrafficState& state, const MapModel& map, int t) {
  const int n = static_cast<int>(state.size());
  std::vector<OrientedBox> boxes;
  boxes.reserve(state.size());
  for (const auto& s : state) boxes.push_back(box_of(s));
  for (int i = 1; i < n; ++i) {
    if (boxes_overlap(boxes[0], boxes[i])) return Verdict{VerdictKind::kEgoCollision, t, std::pair{0, i}};
  }
  for (int i = 1; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (boxes_overlap(boxes[i], boxes[j])) return Verdict{VerdictKind::kAdvAdvCollision, t, std::pair{i, j}};
    }
  }
  for (int i = 1; i < n; ++i) {
    if (box_offroad_violation(map, boxes[i])) return Verdict{VerdictKind::kOffRoad, t, std::pair{i, i}};
  }
  return std::nullopt;
}

RolloutResult rollout(const ScenarioSpec& spec, const MapModel& map, EgoAgent& ego, TapeMode mode,
                      const SimConfig& cfg) {
  validate(spec);
  if (mode == TapeMode::kRecordFull && !ego.differentiable()) {
    throw Error(ErrorCode::kNotDifferentiableEgo, "ego '" + ego.name() + "' has no action Jacobian");
  }
  BicycleParams params = cfg.kinematics;
  params.dt = spec.dt;
  const int n = static_cast<int>(spec.initial_state.size());
  const int adversaries = n - 1;

  RolloutResult r;
  r.plan = spec.initial_plan;
  r.states.reserve(spec.horizon + 1);
  r.states.push_back(spec.initial_state);
  if (mode != TapeMode::kNoRecord) {
    r.tape.emplace();
    r.tape->full = mode == TapeMode::kRecordFull;
    r.tape->steps.reserve(spec.horizon);
  }

  EgoContext ctx{&spec, &r.plan, &map, params};
  ego.reset(ctx);

  std::optional<Verdict> verdict = classify_state(r.states.front(), map, 0);
  for (int t = 0; t < spec.horizon && !verdict; ++t) {
    const TrafficState& cur = r.states.back();
    StepTape* tape = nullptr;
    if (r.tape) {
      r.tape->steps.emplace_back();
      tape = &r.tape->steps.back();
      tape->agents.resize(n);
    }
    Action ego_action;
    if (mode == TapeMode::kRecordFull) {
      ego_action = ego.act_with_jacobian(cur, t, tape->ego_action_jacobian);
    } else {
      ego_action = ego.act(cur, t);
    }
    ego_action = clamp_action(ego_action);
    r.ego_actions.push_back(ego_action);

    TrafficState next(n);
    for (int i = 0; i < n; ++i) {
      const Action a = i == 0 ? ego_action : r.plan.action(i - 1, t);
      next[i] = tape ? step_with_jacobians(cur[i], a, params, tape->agents[i]) : step(cur[i], a, params);
    }
    r.states.push_back(std::move(next));
    verdict = classify_state(r.states.back(), map, t + 1);
  }
  r.verdict = verdict.value_or(Verdict{});
  if (adversaries > 0) r.cost = total_cost(r.states, spec.horizon, map, cfg.weights);
  return r;
}

namespace {

PlanGradient backward(const RolloutResult& r, bool full) {
  if (!r.tape) throw Error(ErrorCode::kTapeMissing, "rollout was not recorded");
  if (full && !r.tape->full) throw Error(ErrorCode::kNotDifferentiableEgo, "tape has no ego Jacobians");
  PlanGradient g;
  g.d_cost_d_raw.assign(r.plan.size(), 0.0);
  const int steps = r.steps_taken();
  if (steps == 0 || r.plan.num_adversaries() == 0) return g;
  const int n = static_cast<int>(r.states.front().size());
  const StateGradient& dc = r.cost.d_cost_d_state;

  // adjoint[i] holds dC/d(state t+1 of agent i) while processing step t.
  std::vector<Eigen::Vector4d> adjoint(n);
  for (int i = 0; i < n; ++i) adjoint[i] = dc.at(steps, i);
  const int first = full ? 0 : 1;
  if (!full) adjoint[0].setZero();

  std::vector<Eigen::Vector4d> prev(n);
  for (int t = steps - 1; t >= 0; --t) {
    const StepTape& tape = r.tape->steps[t];
    for (int i = 1; i < n; ++i) {
      const Eigen::Vector2d da = tape.agents[i].d_next_d_action.transpose() * adjoint[i];
      for (int c = 0; c < 2; ++c) {
        const std::size_t k = r.plan.index(i - 1, t, c);
        g.d_cost_d_raw[k] = da[c] * squash_derivative(r.plan.raw()[k]);
      }
    }
    for (int i = 0; i < n; ++i) prev[i] = Eigen::Vector4d::Zero();
    for (int i = first; i < n; ++i) {
      prev[i] = dc.at(t, i) + tape.agents[i].d_next_d_state.transpose() * adjoint[i];
    }
    if (full) {
      const Eigen::Vector2d d_ego_action = tape.agents[0].d_next_d_action.transpose() * adjoint[0];
      const Eigen::VectorXd pulled = tape.ego_action_jacobian.transpose() * d_ego_action;
      for (int i = 0; i < n; ++i) prev[i] += pulled.segment<4>(4 * i);
    }
    adjoint.swap(prev);
  }
  return g;
}

}  // namespace

PlanGradient backward_direct(const RolloutResult& result) { return backward(result, false); }

PlanGradient backward_full(const RolloutResult& result) { return backward(result, true); }

}  // namespace adversim
