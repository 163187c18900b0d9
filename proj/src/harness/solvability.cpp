#include "adversim/harness/solvability.hpp"

#include "adversim/error.hpp"
#include "adversim/harness/parallel.hpp"

namespace adversim {

const char* to_string(Solvability s) {
  switch (s) {
    case Solvability::kSolvable:
      return "solvable";
    case Solvability::kNotSolvable:
      return "not_solvable";
    case Solvability::kNoCollision:
      return "no_collision";
  }
  return "?";
}

Solvability classify_solvability(const ScenarioSpec& spec, const AttackOutcome& outcome, const MapModel& map,
                                 const ExpertConfig& expert, const SimConfig& sim) {
  if (!outcome.success) return Solvability::kNoCollision;
  ExpertEgo ego(expert);
  const RolloutResult r = replay(spec, outcome.best_plan, map, ego, sim);
  return r.verdict.kind == VerdictKind::kEgoCollision ? Solvability::kNotSolvable : Solvability::kSolvable;
}

std::vector<Solvability> filter_solvable(const std::vector<ScenarioSpec>& specs,
                                         const std::vector<AttackOutcome>& outcomes, const MapLibrary& maps,
                                         const ExpertConfig& expert, const SimConfig& sim, int jobs) {
  if (specs.size() != outcomes.size()) {
    throw Error(ErrorCode::kInvalidArgument, "filter_solvable needs one outcome per scenario");
  }
  std::vector<Solvability> out(specs.size(), Solvability::kNoCollision);
  parallel_for(specs.size(), jobs, [&](std::size_t i) {
    out[i] = classify_solvability(specs[i], outcomes[i], maps.at(specs[i].map_id), expert, sim);
  });
  return out;
}

}  // namespace adversim
