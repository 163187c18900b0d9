#pragma once

#include "adversim/ego_agent.hpp"
#include "adversim/map_model.hpp"
#include "adversim/rollout.hpp"
#include "adversim/scenario.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace adversim {

enum class AttackMethod { kKingDirect, kKingFull, kRandomSearch, kSimba, kCmaEs };

const char* to_string(AttackMethod m);
AttackMethod attack_method_from_string(const std::string& s);

struct AttackConfig {
  AttackMethod method = AttackMethod::kKingDirect;
  double wall_clock_budget = 30.0;  ///< [s]
  int max_iterations = 200;         ///< one iteration = one rollout evaluation
  // gradient methods
  double learning_rate = 0.02;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_epsilon = 1e-8;
  bool best_iterate = true;  ///< return the lowest-cost iterate rather than the last
  // random search
  double perturbation_scale = 0.3;
  // simba
  double simba_epsilon = 0.2;
  // cma-es
  int population = 0;  ///< 0 selects 4 + floor(3 ln dim)
  double cma_sigma = 0.3;
  std::uint64_t seed = 0;
  SimConfig sim;
};

void validate(const AttackConfig& cfg);

struct AttackOutcome {
  bool success = false;
  ActionPlan best_plan;
  double best_cost = 0.0;
  int iterations = 0;
  int generations = 0;  ///< cma_es populations evaluated
  double wall_time = 0.0;
  std::optional<double> time_to_success;
  std::vector<double> cost_trace;  ///< total cost of every evaluated rollout
  Verdict verdict;                 ///< of best_plan's rollout
};

/// Searches the adversary plan for an ego collision. Stops at the first
/// EgoCollision, when the wall-clock budget is spent, or after max_iterations
/// rollouts. A success is certified by replay before returning.
/// Throws kMethodIncompatible when king_full meets a non-differentiable ego.
AttackOutcome attack(const ScenarioSpec& spec, const MapModel& map, const EgoAgent& ego, const AttackConfig& cfg);

/// Rolls out `spec` with `plan` substituted.
RolloutResult replay(const ScenarioSpec& spec, const ActionPlan& plan, const MapModel& map, const EgoAgent& ego,
                     const SimConfig& sim = {});

}  // namespace adversim
