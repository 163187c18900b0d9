#pragma once

#include "adversim/agents/policy.hpp"
#include "adversim/agents/training.hpp"
#include "adversim/map_library.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace adversim {

/// Train/held-out split that keeps every scenario sharing a map and ego start
/// position on the same side.
struct HoldoutSplit {
  std::vector<int> train;
  std::vector<int> heldout;
};

HoldoutSplit split_by_start(const std::vector<ScenarioSpec>& specs, double heldout_fraction, std::uint64_t seed);

struct RobustnessConfig {
  TrainConfig finetune = [] {
    TrainConfig t;
    t.steps = 4000;
    return t;
  }();  ///< critical_fraction is set per variant
  double mixed_critical_fraction = 0.75;
  /// Rounds of on-policy relabelling on the training scenarios: the current
  /// D_crit-only model drives, the expert labels, and D_crit grows.
  int critical_rounds = 3;
  CollectConfig collect;
  int jobs = 1;
};

struct RobustnessRow {
  std::string variant;
  int scenarios = 0;
  int collisions = 0;
  double collision_rate = 0.0;  ///< percent
  std::vector<VerdictKind> verdicts;  ///< per held-out scenario
};

struct RobustnessTable {
  std::vector<RobustnessRow> rows;  ///< none, D_reg, D_crit, D_reg + D_crit
  std::size_t critical_samples = 0;
};

/// Scenario plans are the fixed adversarial plans. Critical demonstrations are
/// collected with the expert on `train_specs`, then extended by
/// `critical_rounds` on-policy rounds. Each variant is fine-tuned from `base`
/// and replayed as ego on every held-out scenario.
RobustnessTable robustness_experiment(const std::vector<ScenarioSpec>& train_specs,
                                      const std::vector<ScenarioSpec>& heldout_specs, const PolicyModel& base,
                                      const DemoDataset& regular, const MapLibrary& maps,
                                      const RobustnessConfig& cfg = {});

/// Columns: variant,scenarios,collisions,cr.
std::string robustness_csv(const RobustnessTable& table);

}  // namespace adversim
