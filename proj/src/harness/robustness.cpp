#include "adversim/harness/robustness.hpp"

#include "adversim/error.hpp"
#include "adversim/harness/parallel.hpp"
#include "adversim/optimizers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <random>
#include <sstream>

namespace adversim {

HoldoutSplit split_by_start(const std::vector<ScenarioSpec>& specs, double heldout_fraction, std::uint64_t seed) {
  if (!(heldout_fraction >= 0.0 && heldout_fraction <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "heldout_fraction must lie in [0, 1]");
  }
  std::map<std::string, std::vector<int>> groups;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const Vec2& p = specs[i].initial_state.at(0).position;
    char key[96];
    std::snprintf(key, sizeof(key), "%.3f,%.3f", p.x(), p.y());
    groups[specs[i].map_id + "@" + key].push_back(static_cast<int>(i));
  }
  std::vector<const std::vector<int>*> order;
  for (const auto& [key, members] : groups) order.push_back(&members);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  const auto target = static_cast<std::size_t>(std::llround(heldout_fraction * static_cast<double>(specs.size())));
  HoldoutSplit split;
  for (const auto* members : order) {
    auto& side = split.heldout.size() < target ? split.heldout : split.train;
    side.insert(side.end(), members->begin(), members->end());
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.heldout.begin(), split.heldout.end());
  return split;
}

RobustnessTable robustness_experiment(const std::vector<ScenarioSpec>& train_specs,
                                      const std::vector<ScenarioSpec>& heldout_specs, const PolicyModel& base,
                                      const DemoDataset& regular, const MapLibrary& maps,
                                      const RobustnessConfig& cfg) {
  RobustnessTable table;
  if (cfg.critical_rounds < 0) throw Error(ErrorCode::kInvalidArgument, "critical_rounds must be >= 0");
  TrainConfig plain_cfg = cfg.finetune;
  plain_cfg.critical_fraction = -1.0;
  TrainConfig mixed_cfg = cfg.finetune;
  mixed_cfg.critical_fraction = cfg.mixed_critical_fraction;

  DemoDataset critical = collect_demos(train_specs, maps, DemoTag::kCritical, cfg.collect);
  PolicyModel crit_model = fine_tune(base, critical, plain_cfg);
  for (int round = 0; round < cfg.critical_rounds; ++round) {
    const PolicyEgo driver(std::make_shared<const PolicyModel>(crit_model), cfg.collect.features,
                           cfg.collect.expert.driving.gains);
    critical.append(collect_demos_on_policy(train_specs, maps, DemoTag::kCritical, driver, cfg.collect));
    crit_model = fine_tune(base, critical, plain_cfg);
  }
  table.critical_samples = critical.size();

  DemoDataset mixed = regular;
  mixed.append(critical);

  std::vector<std::pair<std::string, PolicyModel>> variants;
  variants.emplace_back("none", base);
  variants.emplace_back("reg", fine_tune(base, regular, plain_cfg));
  variants.emplace_back("crit", std::move(crit_model));
  variants.emplace_back("reg+crit", fine_tune(base, mixed, mixed_cfg));

  for (auto& [name, model] : variants) {
    RobustnessRow row;
    row.variant = name;
    row.scenarios = static_cast<int>(heldout_specs.size());
    row.verdicts.resize(heldout_specs.size(), VerdictKind::kNoCollision);
    const auto shared = std::make_shared<const PolicyModel>(model);
    const PolicyEgo ego(shared, cfg.collect.features, cfg.collect.expert.driving.gains);
    parallel_for(heldout_specs.size(), cfg.jobs, [&](std::size_t i) {
      const ScenarioSpec& s = heldout_specs[i];
      row.verdicts[i] = replay(s, s.initial_plan, maps.at(s.map_id), ego, cfg.collect.sim).verdict.kind;
    });
    row.collisions = static_cast<int>(std::count(row.verdicts.begin(), row.verdicts.end(), VerdictKind::kEgoCollision));
    row.collision_rate = row.scenarios > 0 ? 100.0 * row.collisions / row.scenarios : 0.0;
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string robustness_csv(const RobustnessTable& table) {
  std::ostringstream out;
  out << "variant,scenarios,collisions,cr\n";
  for (const auto& r : table.rows) {
    char cr[32];
    std::snprintf(cr, sizeof(cr), "%.2f", r.collision_rate);
    out << r.variant << ',' << r.scenarios << ',' << r.collisions << ',' << cr << '\n';
  }
  return out.str();
}

}  // namespace adversim
