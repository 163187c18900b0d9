#include "adversim/costs.hpp"

#include "adversim/error.hpp"
#include "adversim/geometry.hpp"

#include <limits>

namespace adversim {

void validate(const CostWeights& w) {
  if (!(w.lambda >= 0 && w.gamma >= 0)) throw Error(ErrorCode::kInvalidArgument, "cost weights must be >= 0");
  if (!(w.tau > 0 && w.sigma > 0)) throw Error(ErrorCode::kInvalidArgument, "tau and sigma must be > 0");
}

void StateGradient::add_scaled(const StateGradient& other, double scale) {
  if (scale == 0.0) return;
  for (std::size_t k = 0; k < blocks_.size(); ++k) blocks_[k] += scale * other.blocks_[k];
}

namespace {

int agent_count(std::span<const TrafficState> states) {
  return states.empty() ? 0 : static_cast<int>(states.front().size());
}

void accumulate(Eigen::Vector4d& block, const BoxGradient& g, double scale) {
  block[0] += scale * g.center.x();
  block[1] += scale * g.center.y();
  block[2] += scale * g.heading;
}

}  // namespace

CostTerm phi_ego(std::span<const TrafficState> states, int horizon) {
  const int agents = agent_count(states);
  if (agents < 2) throw Error(ErrorCode::kNoAdversaries, "ego attraction needs at least one adversary");
  const int steps = static_cast<int>(states.size());
  const double norm = 1.0 / (horizon + 1);

  int best = -1;
  double best_mean = std::numeric_limits<double>::infinity();
  for (int i = 1; i < agents; ++i) {
    double sum = 0.0;
    for (int t = 0; t < steps; ++t) sum += box_distance_value(box_of(states[t][0]), box_of(states[t][i]));
    const double mean = sum * norm;
    if (mean < best_mean) {
      best_mean = mean;
      best = i;
    }
  }

  CostTerm out{best_mean, StateGradient(steps, agents)};
  for (int t = 0; t < steps; ++t) {
    const BoxDistance d = box_distance(box_of(states[t][0]), box_of(states[t][best]));
    accumulate(out.grad.at(t, 0), d.grad_a, norm);
    accumulate(out.grad.at(t, best), d.grad_b, norm);
  }
  return out;
}

CostTerm phi_adv_col(std::span<const TrafficState> states, double tau) {
  const int agents = agent_count(states);
  const int steps = static_cast<int>(states.size());
  CostTerm out{-tau, StateGradient(steps, agents)};
  if (agents < 3) return out;

  double best = std::numeric_limits<double>::infinity();
  int bi = -1, bj = -1, bt = -1;
  for (int i = 1; i < agents; ++i) {
    for (int j = i + 1; j < agents; ++j) {
      for (int t = 0; t < steps; ++t) {
        const double d = box_distance_value(box_of(states[t][i]), box_of(states[t][j]));
        if (d < best) {
          best = d;
          bi = i;
          bj = j;
          bt = t;
        }
      }
    }
  }
  if (best < tau) {
    out.value = -best;
    const BoxDistance d = box_distance(box_of(states[bt][bi]), box_of(states[bt][bj]));
    accumulate(out.grad.at(bt, bi), d.grad_a, -1.0);
    accumulate(out.grad.at(bt, bj), d.grad_b, -1.0);
  }
  return out;
}

CostTerm phi_dev(std::span<const TrafficState> states, const MapModel& map, double sigma) {
  const int agents = agent_count(states);
  const int steps = static_cast<int>(states.size());
  CostTerm out{0.0, StateGradient(steps, agents)};
  for (int t = 0; t < steps; ++t) {
    for (int i = 1; i < agents; ++i) {
      const FieldValue f = offroad_field(map, states[t][i].position, sigma);
      out.value += f.value;
      out.grad.at(t, i)[0] += f.grad.x();
      out.grad.at(t, i)[1] += f.grad.y();
    }
  }
  return out;
}

CostBreakdown total_cost(std::span<const TrafficState> states, int horizon, const MapModel& map,
                         const CostWeights& w) {
  CostTerm ego = phi_ego(states, horizon);
  const CostTerm adv = phi_adv_col(states, w.tau);
  const CostTerm dev = phi_dev(states, map, w.sigma);
  CostBreakdown out;
  out.ego_term = ego.value;
  out.adv_col_term = adv.value;
  out.dev_term = dev.value;
  out.total = ego.value + w.lambda * adv.value + w.gamma * dev.value;
  out.d_cost_d_state = std::move(ego.grad);
  out.d_cost_d_state.add_scaled(adv.grad, w.lambda);
  out.d_cost_d_state.add_scaled(dev.grad, w.gamma);
  return out;
}

}  // namespace adversim
