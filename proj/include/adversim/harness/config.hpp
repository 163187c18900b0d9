#pragma once

#include "adversim/agents/expert.hpp"
#include "adversim/agents/features.hpp"
#include "adversim/agents/training.hpp"
#include "adversim/optimizers.hpp"
#include "adversim/rollout.hpp"

#include <filesystem>
#include <string>

namespace adversim {

/// Settings shared by the command-line tools.
///
/// JSON sections: "kinematics", "costs", "attack", "training", "expert",
/// "driving", "features". Every section and key is optional; unknown keys are
/// rejected. The attack's simulation settings always mirror `sim`.
struct RunConfig {
  SimConfig sim;
  AttackConfig attack;
  TrainConfig training;
  int aggregation_rounds = 4;  ///< "training.rounds"
  int finetune_steps = 4000;   ///< "training.finetune_steps"
  double mixed_critical_fraction = 0.75;  ///< "training.mixed_critical_fraction"
  int critical_rounds = 3;                ///< "training.critical_rounds"
  ExpertConfig expert;
  DrivingConfig driving;
  FeatureConfig features;

  void validate() const;
};

RunConfig config_from_json(const std::string& bytes);
std::string config_to_json(const RunConfig& cfg);
RunConfig load_config(const std::filesystem::path& path);

}  // namespace adversim
