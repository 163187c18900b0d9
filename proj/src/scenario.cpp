#include "adversim/scenario.hpp"

#include "adversim/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace adversim {

double normalize_heading(double heading) {
  double h = std::fmod(heading, kTwoPi);
  if (h < 0.0) h += kTwoPi;
  if (h >= kTwoPi) h = 0.0;
  return h;
}

double angle_difference(double a, double b) {
  double d = std::fmod(a - b, kTwoPi);
  if (d <= -std::numbers::pi) d += kTwoPi;
  if (d > std::numbers::pi) d -= kTwoPi;
  return d;
}

void validate(const AgentState& s) {
  if (!(s.speed >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "agent speed must be >= 0");
  if (!(s.half_length > 0.0 && s.half_width > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "agent extents must be positive");
  }
  if (!(s.heading >= 0.0 && s.heading < kTwoPi)) {
    throw Error(ErrorCode::kInvalidArgument, "agent heading must lie in [0, 2pi)");
  }
}

Action clamp_action(Action a) {
  return {std::clamp(a.throttle, -1.0, 1.0), std::clamp(a.steer, -1.0, 1.0)};
}

double unsquash(double action) {
  const double lim = ActionPlan::kMaxRepresentableAction;
  return std::atanh(std::clamp(action, -lim, lim));
}

ActionPlan::ActionPlan(int num_adversaries, int horizon)
    : num_adversaries_(num_adversaries),
      horizon_(horizon),
      raw_(static_cast<std::size_t>(num_adversaries) * horizon * 2, 0.0) {}

ActionPlan::ActionPlan(int num_adversaries, int horizon, std::vector<double> raw)
    : num_adversaries_(num_adversaries), horizon_(horizon), raw_(std::move(raw)) {
  if (raw_.size() != static_cast<std::size_t>(num_adversaries) * horizon * 2) {
    throw Error(ErrorCode::kShapeMismatch, "raw plan size does not match N x T x 2");
  }
}

ActionPlan ActionPlan::from_actions(const std::vector<std::vector<Action>>& actions) {
  const int n = static_cast<int>(actions.size());
  const int horizon = n == 0 ? 0 : static_cast<int>(actions.front().size());
  ActionPlan plan(n, horizon);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(actions[i].size()) != horizon) {
      throw Error(ErrorCode::kShapeMismatch, "ragged action sequences");
    }
    for (int t = 0; t < horizon; ++t) {
      plan.raw_[plan.index(i, t, 0)] = unsquash(actions[i][t].throttle);
      plan.raw_[plan.index(i, t, 1)] = unsquash(actions[i][t].steer);
    }
  }
  return plan;
}

Action ActionPlan::action(int adversary, int t) const {
  return {squash(raw_[index(adversary, t, 0)]), squash(raw_[index(adversary, t, 1)])};
}

std::vector<std::vector<Action>> ActionPlan::per_agent() const {
  std::vector<std::vector<Action>> out(num_adversaries_, std::vector<Action>(horizon_));
  for (int i = 0; i < num_adversaries_; ++i) {
    for (int t = 0; t < horizon_; ++t) out[i][t] = action(i, t);
  }
  return out;
}

void validate(const ScenarioSpec& spec) {
  if (spec.horizon < 1) throw Error(ErrorCode::kInvalidArgument, "horizon must be >= 1");
  if (!(spec.dt > 0.0)) throw Error(ErrorCode::kInvalidArgument, "dt must be > 0");
  if (spec.initial_state.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "initial state must contain the ego");
  }
  for (const auto& a : spec.initial_state) validate(a);
  if (spec.initial_plan.num_adversaries() != spec.num_adversaries() ||
      (spec.num_adversaries() > 0 && spec.initial_plan.horizon() != spec.horizon)) {
    throw Error(ErrorCode::kShapeMismatch, "initial plan shape does not match (N, T)");
  }
}

ScenarioSpec with_plan(const ScenarioSpec& spec, ActionPlan plan) {
  ScenarioSpec out = spec;
  out.initial_plan = std::move(plan);
  return out;
}

const char* to_string(VerdictKind kind) {
  switch (kind) {
    case VerdictKind::kEgoCollision: return "EgoCollision";
    case VerdictKind::kAdvAdvCollision: return "AdvAdvCollision";
    case VerdictKind::kOffRoad: return "OffRoad";
    case VerdictKind::kNoCollision: return "NoCollision";
  }
  return "NoCollision";
}

VerdictKind verdict_kind_from_string(const std::string& s) {
  if (s == "EgoCollision") return VerdictKind::kEgoCollision;
  if (s == "AdvAdvCollision") return VerdictKind::kAdvAdvCollision;
  if (s == "OffRoad") return VerdictKind::kOffRoad;
  if (s == "NoCollision") return VerdictKind::kNoCollision;
  throw Error(ErrorCode::kSchemaViolation, "unknown verdict kind '" + s + "'");
}

}  // namespace adversim
