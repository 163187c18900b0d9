#pragma once

#include "adversim/map_model.hpp"
#include "adversim/rollout.hpp"

#include <filesystem>
#include <optional>
#include <string>

namespace adversim {

/// Location of the terminating event: the overlap centroid for collisions,
/// the offending agent for off-road; absent for NoCollision.
std::optional<Vec2> impact_position(const RolloutResult& result);

/// Columns: t,agent,x,y,heading,speed. One row per realized state and agent.
std::string trace_csv(const RolloutResult& result);

/// Overhead plot: drivable polygons, trajectories, final boxes and an impact
/// marker (id "impact") when the rollout terminated early.
std::string trace_svg(const RolloutResult& result, const MapModel& map);

/// Writes <stem>.csv and <stem>.svg. Throws Error(kIoFailure).
void emit_traces(const RolloutResult& result, const MapModel& map, const std::filesystem::path& stem);

}  // namespace adversim
