#pragma once

#include "adversim/ego_agent.hpp"
#include "adversim/map_library.hpp"
#include "adversim/optimizers.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace adversim {

struct BenchmarkConfig {
  AttackConfig attack;  ///< method is overridden per run; seed is offset by the scenario index
  int jobs = 1;
  std::uint64_t seed = 0;
};

/// One (method, scenario) attack.
struct BenchmarkRow {
  int scenario = 0;  ///< index into the input specs
  std::string name;
  std::string map_id;
  int density = 0;
  AttackMethod method = AttackMethod::kKingDirect;
  AttackOutcome outcome;
  std::string error;  ///< non-empty when the attack threw; the row then counts as a failure
};

/// Aggregate of one (method, density) cell; density < 0 pools all densities.
struct BenchmarkCell {
  AttackMethod method = AttackMethod::kKingDirect;
  int density = -1;
  int scenarios = 0;
  int successes = 0;
  double collision_rate = 0.0;  ///< percent
  std::optional<double> t50;    ///< seconds; present iff collision_rate >= 50
  double seconds_per_iteration = 0.0;
};

struct BenchmarkReport {
  std::vector<BenchmarkRow> rows;  ///< method-major, scenarios in input order
  std::vector<BenchmarkCell> cells;
  std::uint64_t seed = 0;
  std::string config_json;
};

/// Attacks every spec with every method. Attack errors are recorded in the
/// row and do not abort the run.
BenchmarkReport run_benchmark(const std::vector<ScenarioSpec>& specs, const MapLibrary& maps, const EgoAgent& ego,
                              const std::vector<AttackMethod>& methods, const BenchmarkConfig& cfg,
                              const std::vector<std::string>& names = {});

/// Cells recomputed from rows, in method order then density (ascending, pooled last).
std::vector<BenchmarkCell> aggregate_cells(const std::vector<BenchmarkRow>& rows,
                                           const std::vector<AttackMethod>& methods);

/// Time by which half of the scenarios were solved: the ceil(n/2)-th smallest
/// time to success, absent when fewer succeeded.
std::optional<double> time_to_half(const std::vector<std::optional<double>>& times_to_success);

/// Wall-clock columns (wall_time, time_to_success) come last.
std::string rows_csv(const BenchmarkReport& report);
std::string cells_csv(const BenchmarkReport& report);
std::string report_json(const BenchmarkReport& report);

}  // namespace adversim
