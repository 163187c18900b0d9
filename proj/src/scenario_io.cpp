#include "adversim/scenario_io.hpp"

#include "adversim/error.hpp"
#include "json_util.hpp"

#include <fstream>
#include <sstream>

namespace adversim {

using nlohmann::json;

std::string serialize_scenario(const ScenarioSpec& spec) {
  json j;
  j["version"] = kScenarioFormatVersion;
  j["map_id"] = spec.map_id;
  j["horizon"] = spec.horizon;
  j["dt"] = spec.dt;
  j["seed"] = spec.seed;
  j["ego_route"] = json_util::to_json(spec.ego_route);
  j["ego_goal"] = json_util::to_json(spec.ego_goal);
  json agents = json::array();
  for (const auto& a : spec.initial_state) {
    agents.push_back({{"x", a.position.x()},
                      {"y", a.position.y()},
                      {"heading", a.heading},
                      {"speed", a.speed},
                      {"half_length", a.half_length},
                      {"half_width", a.half_width}});
  }
  j["agents"] = std::move(agents);
  const auto& plan = spec.initial_plan;
  json pj = json::array();
  for (int i = 0; i < plan.num_adversaries(); ++i) {
    json seq = json::array();
    for (int t = 0; t < plan.horizon(); ++t) {
      seq.push_back({plan.raw()[plan.index(i, t, 0)], plan.raw()[plan.index(i, t, 1)]});
    }
    pj.push_back(std::move(seq));
  }
  j["plan"] = std::move(pj);
  return j.dump();
}

ScenarioSpec deserialize_scenario(const std::string& bytes) {
  const json j = json_util::parse(bytes);
  json_util::Reader r(j, "");
  ScenarioSpec spec;
  const int version = r.get<int>("version");
  if (version != kScenarioFormatVersion) {
    throw Error(ErrorCode::kSchemaViolation, "/version: unsupported version " + std::to_string(version));
  }
  spec.map_id = r.get<std::string>("map_id");
  spec.horizon = r.get<int>("horizon");
  spec.dt = r.get<double>("dt");
  spec.seed = r.get<std::uint64_t>("seed");
  spec.ego_route = r.polyline("ego_route");
  spec.ego_goal = r.vec2("ego_goal");

  const json& agents = r.array("agents");
  for (std::size_t k = 0; k < agents.size(); ++k) {
    json_util::Reader a(agents[k], "/agents/" + std::to_string(k));
    AgentState s;
    s.position = Vec2(a.get<double>("x"), a.get<double>("y"));
    s.heading = a.get<double>("heading");
    s.speed = a.get<double>("speed");
    s.half_length = a.get<double>("half_length");
    s.half_width = a.get<double>("half_width");
    spec.initial_state.push_back(s);
  }

  const json& plan = r.array("plan");
  const int n = static_cast<int>(plan.size());
  if (n != static_cast<int>(spec.initial_state.size()) - 1) {
    throw Error(ErrorCode::kSchemaViolation, "/plan: expected one sequence per adversary");
  }
  std::vector<double> raw;
  raw.reserve(static_cast<std::size_t>(n) * spec.horizon * 2);
  for (int i = 0; i < n; ++i) {
    const std::string path = "/plan/" + std::to_string(i);
    if (!plan[i].is_array() || static_cast<int>(plan[i].size()) != spec.horizon) {
      throw Error(ErrorCode::kSchemaViolation, path + ": expected " + std::to_string(spec.horizon) + " actions");
    }
    for (int t = 0; t < spec.horizon; ++t) {
      const Vec2 v = json_util::vec2(plan[i][t], path + "/" + std::to_string(t));
      raw.push_back(v.x());
      raw.push_back(v.y());
    }
  }
  spec.initial_plan = ActionPlan(n, spec.horizon, std::move(raw));
  try {
    validate(spec);
  } catch (const Error& e) {
    throw Error(ErrorCode::kSchemaViolation, std::string("/: ") + e.what());
  }
  return spec;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw Error(ErrorCode::kIoFailure, "cannot create " + path.parent_path().string() + ": " + ec.message());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot write " + path.string());
  out << contents;
  if (!out) throw Error(ErrorCode::kIoFailure, "short write to " + path.string());
}

void save_scenario(const ScenarioSpec& spec, const std::filesystem::path& path) {
  write_file(path, serialize_scenario(spec));
}

ScenarioSpec load_scenario(const std::filesystem::path& path) {
  return deserialize_scenario(read_file(path));
}

}  // namespace adversim
