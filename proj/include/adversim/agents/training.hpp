#pragma once

#include "adversim/agents/controllers.hpp"
#include "adversim/agents/expert.hpp"
#include "adversim/agents/features.hpp"
#include "adversim/agents/policy.hpp"
#include "adversim/map_library.hpp"
#include "adversim/rollout.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace adversim {

enum class DemoTag { kRegular, kCritical };

const char* to_string(DemoTag tag);
DemoTag demo_tag_from_string(const std::string& s);

struct DemoSample {
  FeatureVector features;
  Waypoints waypoints;
  DemoTag tag = DemoTag::kRegular;
};

struct DemoDataset {
  std::vector<DemoSample> samples;

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
  std::size_t count(DemoTag tag) const;
  void append(const DemoDataset& other);
};

/// One JSON object per line: {"tag", "features", "waypoints"}.
std::string dataset_to_jsonl(const DemoDataset& data);
DemoDataset dataset_from_jsonl(const std::string& text);

struct TrainConfig {
  int steps = 30000;
  int batch_size = 64;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  /// Step size decays linearly to learning_rate * final_lr_fraction at the last step.
  double final_lr_fraction = 1.0;
  /// Probability that a batch element is drawn from the critical subset; a
  /// negative value samples uniformly over the whole dataset.
  double critical_fraction = -1.0;
  int hidden = 64;
  double output_scale = 5.0;
  std::uint64_t seed = 0;
};

void validate(const TrainConfig& cfg);

struct TrainReport {
  std::vector<double> step_loss;   ///< loss of every mini-batch before its update
  std::vector<double> epoch_loss;  ///< mean step loss per epoch (dataset size / batch size steps)
};

/// Fresh model trained from random initialization.
PolicyModel train_policy(const DemoDataset& data, const TrainConfig& cfg, TrainReport* report = nullptr);

/// Continues training `model` on `data`.
PolicyModel fine_tune(PolicyModel model, const DemoDataset& data, const TrainConfig& cfg,
                      TrainReport* report = nullptr);

/// Mean absolute waypoint error of `model` on `data` (all samples).
double evaluate_l1(const PolicyModel& model, const DemoDataset& data);

struct CollectConfig {
  ExpertConfig expert;
  FeatureConfig features;
  SimConfig sim;
};

/// Drives every scenario with the privileged expert and records (features,
/// expert waypoints) before each step.
DemoDataset collect_demos(const std::vector<ScenarioSpec>& scenarios, const MapLibrary& maps, DemoTag tag,
                          const CollectConfig& cfg = {});

/// Same labels, but `driver` controls the ego so that the recorded states
/// follow the driver's own distribution (dataset aggregation).
DemoDataset collect_demos_on_policy(const std::vector<ScenarioSpec>& scenarios, const MapLibrary& maps, DemoTag tag,
                                    const EgoAgent& driver, const CollectConfig& cfg = {});

struct AggregationConfig {
  int rounds = 4;
  TrainConfig train;
  CollectConfig collect;
};

/// Expert demonstrations followed by `rounds` of on-policy relabelling, each
/// retraining a fresh model on the aggregate. Returns the final model; the
/// aggregate is stored in `data` when non-null.
PolicyModel train_with_aggregation(const std::vector<ScenarioSpec>& scenarios, const MapLibrary& maps,
                                   const AggregationConfig& cfg, DemoDataset* data = nullptr);

}  // namespace adversim
