#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace adversim {

using Vec2 = Eigen::Vector2d;
using Polyline = std::vector<Vec2>;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Wraps an angle into [0, 2*pi).
double normalize_heading(double heading);

/// Signed smallest difference a - b, in (-pi, pi].
double angle_difference(double a, double b);

inline constexpr double kDefaultHalfLength = 2.45;
inline constexpr double kDefaultHalfWidth = 1.0;

/// Pose, heading and speed of one vehicle plus its bounding-box extents.
struct AgentState {
  Vec2 position = Vec2::Zero();
  double heading = 0.0;  ///< radians, [0, 2*pi)
  double speed = 0.0;    ///< m/s, >= 0
  double half_length = kDefaultHalfLength;
  double half_width = kDefaultHalfWidth;

  bool operator==(const AgentState&) const = default;
};

/// Checks the record invariants; throws Error(kInvalidArgument) on violation.
void validate(const AgentState& state);

/// All agents at one timestep. Index 0 is the ego.
using TrafficState = std::vector<AgentState>;

struct Action {
  double throttle = 0.0;
  double steer = 0.0;

  bool operator==(const Action&) const = default;
};

Action clamp_action(Action a);

/// Odd sigmoidal map from raw optimizer parameters onto (-1, 1).
inline double squash(double raw) { return std::tanh(raw); }
inline double squash_derivative(double raw) {
  const double t = std::tanh(raw);
  return 1.0 - t * t;
}
double unsquash(double action);

/// Per-adversary action sequences, stored as unconstrained raw parameters.
///
/// Layout is agent-major: raw[((i * horizon) + t) * 2 + c], c = 0 throttle,
/// c = 1 steer, i indexing adversaries (ego excluded). The action applied at
/// step t (between states t and t+1) is squash(raw).
class ActionPlan {
 public:
  ActionPlan() = default;
  ActionPlan(int num_adversaries, int horizon);
  ActionPlan(int num_adversaries, int horizon, std::vector<double> raw);

  /// Builds a plan whose squashed actions equal `actions` (clipped to
  /// +/- kMaxRepresentableAction). actions[i][t].
  static ActionPlan from_actions(const std::vector<std::vector<Action>>& actions);

  int num_adversaries() const { return num_adversaries_; }
  int horizon() const { return horizon_; }
  std::size_t size() const { return raw_.size(); }

  Action action(int adversary, int t) const;
  std::vector<std::vector<Action>> per_agent() const;

  std::size_t index(int adversary, int t, int component) const {
    return (static_cast<std::size_t>(adversary) * horizon_ + t) * 2 + component;
  }

  const std::vector<double>& raw() const { return raw_; }
  std::vector<double>& raw() { return raw_; }

  bool operator==(const ActionPlan&) const = default;

  static constexpr double kMaxRepresentableAction = 0.98;

 private:
  int num_adversaries_ = 0;
  int horizon_ = 0;
  std::vector<double> raw_;
};

struct ScenarioSpec {
  std::string map_id;
  int horizon = 80;
  double dt = 0.25;
  Polyline ego_route;
  Vec2 ego_goal = Vec2::Zero();
  TrafficState initial_state;
  ActionPlan initial_plan;
  std::uint64_t seed = 0;

  int num_adversaries() const { return static_cast<int>(initial_state.size()) - 1; }

  bool operator==(const ScenarioSpec&) const = default;
};

void validate(const ScenarioSpec& spec);

/// Copy of `spec` with its plan replaced.
ScenarioSpec with_plan(const ScenarioSpec& spec, ActionPlan plan);

enum class VerdictKind { kEgoCollision, kAdvAdvCollision, kOffRoad, kNoCollision };

const char* to_string(VerdictKind kind);
VerdictKind verdict_kind_from_string(const std::string& s);

struct Verdict {
  VerdictKind kind = VerdictKind::kNoCollision;
  std::optional<int> time_index;
  std::optional<std::pair<int, int>> agents_involved;

  bool operator==(const Verdict&) const = default;
};

}  // namespace adversim
