#pragma once

#include "adversim/map_model.hpp"
#include "adversim/scenario.hpp"

#include <Eigen/Core>

#include <span>
#include <vector>

namespace adversim {

struct CostWeights {
  double lambda = 1.0;  ///< adversary-adversary repulsion weight
  double gamma = 1.0;   ///< off-road weight
  double tau = 2.0;     ///< repulsion threshold [m]
  double sigma = 1.5;   ///< off-road Gaussian width [m]
};

void validate(const CostWeights& w);

/// d(cost)/d(state) blocks, one 4-vector [x, y, heading, speed] per agent per
/// timestep of the realized sequence.
class StateGradient {
 public:
  StateGradient() = default;
  StateGradient(int num_steps, int num_agents)
      : num_steps_(num_steps), num_agents_(num_agents),
        blocks_(static_cast<std::size_t>(num_steps) * num_agents, Eigen::Vector4d::Zero()) {}

  int num_steps() const { return num_steps_; }
  int num_agents() const { return num_agents_; }

  Eigen::Vector4d& at(int t, int agent) { return blocks_[static_cast<std::size_t>(t) * num_agents_ + agent]; }
  const Eigen::Vector4d& at(int t, int agent) const {
    return blocks_[static_cast<std::size_t>(t) * num_agents_ + agent];
  }

  void add_scaled(const StateGradient& other, double scale);

 private:
  int num_steps_ = 0;
  int num_agents_ = 0;
  std::vector<Eigen::Vector4d> blocks_;
};

struct CostTerm {
  double value = 0.0;
  StateGradient grad;
};

struct CostBreakdown {
  double ego_term = 0.0;
  double adv_col_term = 0.0;
  double dev_term = 0.0;
  double total = 0.0;
  StateGradient d_cost_d_state;
};

/// Attraction between the ego and its closest adversary: the smallest
/// time-mean box distance, normalized by horizon + 1 regardless of truncation.
/// Throws Error(kNoAdversaries) when there are no adversaries.
CostTerm phi_ego(std::span<const TrafficState> states, int horizon);

/// -min(min over adversary pairs and timesteps of box distance, tau). The
/// gradient reaches only the closest pair at its argmin timestep and only when
/// that distance is below tau.
CostTerm phi_adv_col(std::span<const TrafficState> states, double tau);

/// Sum of the off-road potential at every adversary center and timestep.
CostTerm phi_dev(std::span<const TrafficState> states, const MapModel& map, double sigma);

/// phi_ego + lambda * phi_adv_col + gamma * phi_dev with matching gradient.
CostBreakdown total_cost(std::span<const TrafficState> states, int horizon, const MapModel& map,
                         const CostWeights& w);

}  // namespace adversim
