#include "adversim/harness/benchmark.hpp"

#include "adversim/error.hpp"
#include "adversim/harness/parallel.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace adversim {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::optional<double> time_to_half(const std::vector<std::optional<double>>& times) {
  std::vector<double> solved;
  for (const auto& t : times) {
    if (t) solved.push_back(*t);
  }
  const std::size_t need = (times.size() + 1) / 2;
  if (times.empty() || solved.size() < need) return std::nullopt;
  std::sort(solved.begin(), solved.end());
  return solved[need - 1];
}

std::vector<BenchmarkCell> aggregate_cells(const std::vector<BenchmarkRow>& rows,
                                           const std::vector<AttackMethod>& methods) {
  std::vector<BenchmarkCell> cells;
  for (AttackMethod m : methods) {
    std::map<int, std::vector<const BenchmarkRow*>> by_density;
    std::vector<const BenchmarkRow*> all;
    for (const auto& r : rows) {
      if (r.method != m) continue;
      by_density[r.density].push_back(&r);
      all.push_back(&r);
    }
    auto make = [&](int density, const std::vector<const BenchmarkRow*>& members) {
      BenchmarkCell c;
      c.method = m;
      c.density = density;
      c.scenarios = static_cast<int>(members.size());
      std::vector<std::optional<double>> times;
      double wall = 0.0;
      long iterations = 0;
      for (const auto* r : members) {
        const bool ok = r->error.empty() && r->outcome.success;
        c.successes += ok;
        times.push_back(ok ? r->outcome.time_to_success : std::nullopt);
        wall += r->outcome.wall_time;
        iterations += r->outcome.iterations;
      }
      c.collision_rate = c.scenarios > 0 ? 100.0 * c.successes / c.scenarios : 0.0;
      c.t50 = time_to_half(times);
      c.seconds_per_iteration = iterations > 0 ? wall / static_cast<double>(iterations) : 0.0;
      cells.push_back(c);
    };
    for (const auto& [density, members] : by_density) make(density, members);
    if (!all.empty()) make(-1, all);
  }
  return cells;
}

BenchmarkReport run_benchmark(const std::vector<ScenarioSpec>& specs, const MapLibrary& maps, const EgoAgent& ego,
                              const std::vector<AttackMethod>& methods, const BenchmarkConfig& cfg,
                              const std::vector<std::string>& names) {
  if (specs.empty()) throw Error(ErrorCode::kInvalidArgument, "run_benchmark needs at least one scenario");
  if (methods.empty()) throw Error(ErrorCode::kInvalidArgument, "run_benchmark needs at least one method");
  if (!names.empty() && names.size() != specs.size()) {
    throw Error(ErrorCode::kInvalidArgument, "names must match the scenarios one to one");
  }

  BenchmarkReport report;
  report.seed = cfg.seed;
  const std::size_t n = specs.size();
  report.rows.resize(methods.size() * n);
  for (std::size_t m = 0; m < methods.size(); ++m) {
    for (std::size_t i = 0; i < n; ++i) {
      BenchmarkRow& row = report.rows[m * n + i];
      row.scenario = static_cast<int>(i);
      row.name = names.empty() ? "scenario_" + std::to_string(i) : names[i];
      row.map_id = specs[i].map_id;
      row.density = specs[i].num_adversaries();
      row.method = methods[m];
    }
  }

  parallel_for(report.rows.size(), cfg.jobs, [&](std::size_t k) {
    BenchmarkRow& row = report.rows[k];
    const ScenarioSpec& spec = specs[row.scenario];
    AttackConfig ac = cfg.attack;
    ac.method = row.method;
    ac.seed = cfg.seed + static_cast<std::uint64_t>(row.scenario);
    try {
      row.outcome = attack(spec, maps.at(spec.map_id), ego, ac);
    } catch (const std::exception& e) {
      row.outcome = AttackOutcome{};
      row.outcome.best_plan = spec.initial_plan;
      row.error = e.what();
    }
  });

  report.cells = aggregate_cells(report.rows, methods);
  return report;
}

std::string rows_csv(const BenchmarkReport& report) {
  std::ostringstream out;
  out << "scenario,name,map_id,density,method,success,verdict,impact_t,iterations,generations,best_cost,error,"
         "wall_time,time_to_success\n";
  for (const auto& r : report.rows) {
    const AttackOutcome& o = r.outcome;
    out << r.scenario << ',' << csv_field(r.name) << ',' << csv_field(r.map_id) << ',' << r.density << ','
        << to_string(r.method) << ',' << (r.error.empty() && o.success ? 1 : 0) << ','
        << (r.error.empty() ? to_string(o.verdict.kind) : "error") << ','
        << (o.verdict.time_index ? std::to_string(*o.verdict.time_index) : "") << ',' << o.iterations << ','
        << o.generations << ',' << fmt(o.best_cost) << ',' << csv_field(r.error) << ',' << fmt(o.wall_time) << ','
        << (o.time_to_success ? fmt(*o.time_to_success) : "") << '\n';
  }
  return out.str();
}

std::string cells_csv(const BenchmarkReport& report) {
  std::ostringstream out;
  out << "method,density,scenarios,successes,cr,t50,s_per_it\n";
  for (const auto& c : report.cells) {
    out << to_string(c.method) << ',' << (c.density < 0 ? "all" : std::to_string(c.density)) << ',' << c.scenarios
        << ',' << c.successes << ',' << fmt(c.collision_rate) << ',' << (c.t50 ? fmt(*c.t50) : "") << ','
        << fmt(c.seconds_per_iteration) << '\n';
  }
  return out.str();
}

std::string report_json(const BenchmarkReport& report) {
  using nlohmann::json;
  json j;
  j["seed"] = report.seed;
  j["config"] = report.config_json.empty() ? json(nullptr) : json::parse(report.config_json);
  json cells = json::array();
  for (const auto& c : report.cells) {
    cells.push_back({{"method", to_string(c.method)},
                     {"density", c.density < 0 ? json("all") : json(c.density)},
                     {"scenarios", c.scenarios},
                     {"successes", c.successes},
                     {"cr", c.collision_rate},
                     {"t50", c.t50 ? json(*c.t50) : json(nullptr)},
                     {"s_per_it", c.seconds_per_iteration}});
  }
  j["cells"] = std::move(cells);
  json rows = json::array();
  for (const auto& r : report.rows) {
    const AttackOutcome& o = r.outcome;
    rows.push_back({{"scenario", r.scenario},
                    {"name", r.name},
                    {"map_id", r.map_id},
                    {"density", r.density},
                    {"method", to_string(r.method)},
                    {"success", r.error.empty() && o.success},
                    {"verdict", r.error.empty() ? to_string(o.verdict.kind) : "error"},
                    {"impact_t", o.verdict.time_index ? json(*o.verdict.time_index) : json(nullptr)},
                    {"iterations", o.iterations},
                    {"generations", o.generations},
                    {"best_cost", o.best_cost},
                    {"error", r.error},
                    {"wall_time", o.wall_time},
                    {"time_to_success", o.time_to_success ? json(*o.time_to_success) : json(nullptr)}});
  }
  j["rows"] = std::move(rows);
  return j.dump(2);
}

}  // namespace adversim
