#include "adversim/harness/config.hpp"

#include "adversim/error.hpp"
#include "adversim/scenario_io.hpp"
#include "../json_util.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <vector>

namespace adversim {

namespace {

using nlohmann::json;

// Two-way binding between one JSON object and struct fields.
class Section {
 public:
  explicit Section(std::string name) : name_(std::move(name)) {}

  template <typename T>
  Section& field(const std::string& key, T& value) {
    keys_.insert(key);
    readers_.push_back([this, key, &value](const json_util::Reader& r) {
      if (r.has(key)) value = r.get<T>(key);
    });
    writers_.push_back([key, &value](json& j) { j[key] = value; });
    return *this;
  }

  Section& custom(const std::string& key, std::function<void(const json&, const std::string&)> read,
                  std::function<json()> write) {
    keys_.insert(key);
    readers_.push_back([this, key, read](const json_util::Reader& r) {
      if (r.has(key)) read(r.at(key), r.path() + "/" + key);
    });
    writers_.push_back([key, write](json& j) { j[key] = write(); });
    return *this;
  }

  void read(const json& root) const {
    if (!root.contains(name_)) return;
    const json& j = root.at(name_);
    json_util::Reader r(j, "/" + name_);
    for (const auto& [key, value] : j.items()) {
      (void)value;
      if (!keys_.count(key)) json_util::fail("/" + name_ + "/" + key, "unknown key");
    }
    for (const auto& f : readers_) f(r);
  }

  void write(json& root) const {
    json j = json::object();
    for (const auto& f : writers_) f(j);
    root[name_] = std::move(j);
  }

  const std::string& name() const { return name_; }

 private:
  std::string name_;
  std::set<std::string> keys_;
  std::vector<std::function<void(const json_util::Reader&)>> readers_;
  std::vector<std::function<void(json&)>> writers_;
};

std::vector<Section> bind(RunConfig& c) {
  std::vector<Section> s;
  s.emplace_back("kinematics");
  s.back()
      .field("lf", c.sim.kinematics.lf)
      .field("lr", c.sim.kinematics.lr)
      .field("max_steer", c.sim.kinematics.max_steer)
      .field("max_accel", c.sim.kinematics.max_accel)
      .field("max_brake", c.sim.kinematics.max_brake);

  s.emplace_back("costs");
  s.back()
      .field("lambda", c.sim.weights.lambda)
      .field("gamma", c.sim.weights.gamma)
      .field("tau", c.sim.weights.tau)
      .field("sigma", c.sim.weights.sigma);

  s.emplace_back("attack");
  AttackConfig& a = c.attack;
  s.back()
      .custom(
          "method", [&a](const json& j, const std::string& path) {
            if (!j.is_string()) json_util::fail(path, "expected a string");
            try {
              a.method = attack_method_from_string(j.get<std::string>());
            } catch (const Error&) {
              json_util::fail(path, "unknown method '" + j.get<std::string>() + "'");
            }
          },
          [&a] { return json(to_string(a.method)); })
      .field("wall_clock_budget", a.wall_clock_budget)
      .field("max_iterations", a.max_iterations)
      .field("learning_rate", a.learning_rate)
      .field("beta1", a.beta1)
      .field("beta2", a.beta2)
      .field("adam_epsilon", a.adam_epsilon)
      .field("best_iterate", a.best_iterate)
      .field("perturbation_scale", a.perturbation_scale)
      .field("simba_epsilon", a.simba_epsilon)
      .field("population", a.population)
      .field("cma_sigma", a.cma_sigma)
      .field("seed", a.seed);

  s.emplace_back("training");
  TrainConfig& t = c.training;
  s.back()
      .field("steps", t.steps)
      .field("batch_size", t.batch_size)
      .field("learning_rate", t.learning_rate)
      .field("beta1", t.beta1)
      .field("beta2", t.beta2)
      .field("epsilon", t.epsilon)
      .field("final_lr_fraction", t.final_lr_fraction)
      .field("critical_fraction", t.critical_fraction)
      .field("hidden", t.hidden)
      .field("output_scale", t.output_scale)
      .field("seed", t.seed)
      .field("rounds", c.aggregation_rounds)
      .field("finetune_steps", c.finetune_steps)
      .field("mixed_critical_fraction", c.mixed_critical_fraction)
      .field("critical_rounds", c.critical_rounds);

  s.emplace_back("expert");
  ExpertConfig& e = c.expert;
  s.back()
      .custom(
          "profiles", [&e](const json& j, const std::string& path) {
            if (!j.is_array()) json_util::fail(path, "expected an array");
            e.profiles.clear();
            for (std::size_t k = 0; k < j.size(); ++k) {
              e.profiles.push_back(json_util::number(j[k], path + "/" + std::to_string(k)));
            }
          },
          [&e] { return json(e.profiles); })
      .field("forecast_horizon", e.forecast_horizon)
      .field("safety_margin", e.safety_margin)
      .field("headway", e.headway);

  s.emplace_back("driving");
  DrivingConfig& d = c.driving;
  s.back()
      .field("cruise_speed", d.cruise_speed)
      .field("hazard_gain", d.hazard_gain)
      .field("hazard_margin", d.hazard_margin)
      .field("hazard_lateral_margin", d.hazard_lateral_margin)
      .field("exhausted_tolerance", d.exhausted_tolerance)
      .field("k_lateral", d.gains.k_lateral)
      .field("k_accel", d.gains.k_accel)
      .field("k_brake", d.gains.k_brake)
      .field("deadband", d.gains.deadband);

  s.emplace_back("features");
  s.back()
      .field("nearest", c.features.nearest)
      .field("goal_lookahead", c.features.goal_lookahead)
      .field("position_scale", c.features.position_scale)
      .field("speed_scale", c.features.speed_scale);
  return s;
}

}  // namespace

void RunConfig::validate() const {
  adversim::validate(sim.kinematics);
  adversim::validate(sim.weights);
  adversim::validate(attack);
  adversim::validate(training);
  if (aggregation_rounds < 0) throw Error(ErrorCode::kInvalidArgument, "training.rounds must be >= 0");
  if (critical_rounds < 0) throw Error(ErrorCode::kInvalidArgument, "training.critical_rounds must be >= 0");
  if (finetune_steps < 1) throw Error(ErrorCode::kInvalidArgument, "training.finetune_steps must be >= 1");
  if (!(mixed_critical_fraction >= 0.0 && mixed_critical_fraction <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "training.mixed_critical_fraction must lie in [0, 1]");
  }
  if (expert.profiles.empty() || expert.forecast_horizon < 1 || expert.safety_margin < 0.0 || expert.headway < 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "invalid expert section");
  }
  if (driving.cruise_speed <= 0.0) throw Error(ErrorCode::kInvalidArgument, "driving.cruise_speed must be > 0");
  if (features.nearest < 0 || features.position_scale <= 0.0 || features.speed_scale <= 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "invalid features section");
  }
}

RunConfig config_from_json(const std::string& bytes) {
  const json root = json_util::parse(bytes);
  if (!root.is_object()) json_util::fail("", "expected an object");
  RunConfig cfg;
  const auto sections = bind(cfg);
  for (const auto& [key, value] : root.items()) {
    (void)value;
    const bool known = std::any_of(sections.begin(), sections.end(), [&](const Section& s) { return s.name() == key; });
    if (!known) json_util::fail("/" + key, "unknown section");
  }
  for (const auto& s : sections) s.read(root);
  cfg.expert.driving = cfg.driving;
  cfg.attack.sim = cfg.sim;
  cfg.validate();
  return cfg;
}

std::string config_to_json(const RunConfig& cfg) {
  RunConfig copy = cfg;
  json root = json::object();
  for (const auto& s : bind(copy)) s.write(root);
  return root.dump(2);
}

RunConfig load_config(const std::filesystem::path& path) { return config_from_json(read_file(path)); }

}  // namespace adversim
