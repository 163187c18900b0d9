#pragma once

#include "adversim/scenario.hpp"

#include <filesystem>
#include <string>

namespace adversim {

inline constexpr int kScenarioFormatVersion = 1;

/// JSON encoding of a scenario. The `plan` array holds the raw (unsquashed)
/// parameters, shape [N][T][2]; all reals keep full double precision.
std::string serialize_scenario(const ScenarioSpec& spec);

/// Throws Error(kSchemaViolation) naming the offending JSON path.
ScenarioSpec deserialize_scenario(const std::string& bytes);

void save_scenario(const ScenarioSpec& spec, const std::filesystem::path& path);
ScenarioSpec load_scenario(const std::filesystem::path& path);

/// Reads a whole file; throws Error(kIoFailure).
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace adversim
