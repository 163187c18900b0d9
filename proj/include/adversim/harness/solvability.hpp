#pragma once

#include "adversim/agents/expert.hpp"
#include "adversim/map_library.hpp"
#include "adversim/optimizers.hpp"

#include <string>
#include <vector>

namespace adversim {

enum class Solvability { kSolvable, kNotSolvable, kNoCollision };

const char* to_string(Solvability s);

/// Unsuccessful attacks are kNoCollision. A successful one is solvable when
/// the expert, facing the fixed best_plan, finishes without an ego collision.
Solvability classify_solvability(const ScenarioSpec& spec, const AttackOutcome& outcome, const MapModel& map,
                                 const ExpertConfig& expert = {}, const SimConfig& sim = {});

std::vector<Solvability> filter_solvable(const std::vector<ScenarioSpec>& specs,
                                         const std::vector<AttackOutcome>& outcomes, const MapLibrary& maps,
                                         const ExpertConfig& expert = {}, const SimConfig& sim = {}, int jobs = 1);

}  // namespace adversim
