#include "adversim/agents/training.hpp"

#include "adversim/error.hpp"
#include "../json_util.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace adversim {

const char* to_string(DemoTag tag) { return tag == DemoTag::kCritical ? "critical" : "regular"; }

DemoTag demo_tag_from_string(const std::string& s) {
  if (s == "regular") return DemoTag::kRegular;
  if (s == "critical") return DemoTag::kCritical;
  throw Error(ErrorCode::kSchemaViolation, "unknown demo tag '" + s + "'");
}

std::size_t DemoDataset::count(DemoTag tag) const {
  std::size_t n = 0;
  for (const auto& s : samples) n += s.tag == tag ? 1 : 0;
  return n;
}

void DemoDataset::append(const DemoDataset& other) {
  samples.insert(samples.end(), other.samples.begin(), other.samples.end());
}

std::string dataset_to_jsonl(const DemoDataset& data) {
  std::string out;
  for (const auto& s : data.samples) {
    json_util::json j;
    j["tag"] = to_string(s.tag);
    j["features"] = std::vector<double>(s.features.data(), s.features.data() + s.features.size());
    json_util::json w = json_util::json::array();
    for (const auto& p : s.waypoints) w.push_back(json_util::to_json(p));
    j["waypoints"] = std::move(w);
    out += j.dump();
    out += '\n';
  }
  return out;
}

DemoDataset dataset_from_jsonl(const std::string& text) {
  DemoDataset data;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string path = "/line" + std::to_string(lineno);
    json_util::json j;
    try {
      j = json_util::json::parse(line);
    } catch (const json_util::json::parse_error&) {
      json_util::fail(path, "malformed JSON");
    }
    json_util::Reader r(j, path);
    DemoSample s;
    s.tag = demo_tag_from_string(r.get<std::string>("tag"));
    const auto& f = r.array("features");
    s.features.resize(static_cast<Eigen::Index>(f.size()));
    for (std::size_t k = 0; k < f.size(); ++k) s.features[k] = json_util::number(f[k], path + "/features");
    const auto& w = r.array("waypoints");
    if (w.size() != 4) json_util::fail(path + "/waypoints", "expected 4 points");
    for (int k = 0; k < 4; ++k) s.waypoints[k] = json_util::vec2(w[k], path + "/waypoints/" + std::to_string(k));
    if (!data.empty() && data.samples.front().features.size() != s.features.size()) {
      throw Error(ErrorCode::kShapeMismatch, path + ": feature length differs from the first line");
    }
    data.samples.push_back(std::move(s));
  }
  return data;
}

void validate(const TrainConfig& cfg) {
  if (cfg.steps < 0 || cfg.batch_size <= 0 || cfg.learning_rate <= 0 || cfg.hidden <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "training config needs positive batch size, rate and width");
  }
  if (!(cfg.final_lr_fraction >= 0.0 && cfg.final_lr_fraction <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "final_lr_fraction must lie in [0, 1]");
  }
  if (cfg.critical_fraction > 1.0) throw Error(ErrorCode::kInvalidArgument, "critical_fraction must be <= 1");
}

namespace {

void check_shapes(const DemoDataset& data, int input_dim) {
  if (data.empty()) throw Error(ErrorCode::kEmptyDataset, "no demonstrations");
  for (const auto& s : data.samples) {
    if (s.features.size() != input_dim) throw Error(ErrorCode::kShapeMismatch, "feature length does not match the policy");
  }
}

void run_adam(PolicyModel& model, const DemoDataset& data, const TrainConfig& cfg, TrainReport* report) {
  validate(cfg);
  check_shapes(data, model.input_dim());
  std::vector<int> regular, critical, all;
  for (int k = 0; k < static_cast<int>(data.size()); ++k) {
    all.push_back(k);
    (data.samples[k].tag == DemoTag::kCritical ? critical : regular).push_back(k);
  }
  std::mt19937_64 rng(cfg.seed ^ 0x5eedf00dULL);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  auto pick = [&](const std::vector<int>& pool) {
    return pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)];
  };
  auto draw = [&]() {
    if (cfg.critical_fraction < 0) return pick(all);
    const bool crit = coin(rng) < cfg.critical_fraction;
    const auto& pool = crit ? critical : regular;
    return pick(pool.empty() ? all : pool);
  };

  const Eigen::Index np = model.num_parameters();
  Eigen::VectorXd m = Eigen::VectorXd::Zero(np), v = Eigen::VectorXd::Zero(np), grad(np);
  Eigen::MatrixXd x(model.input_dim(), cfg.batch_size), y(PolicyModel::kOutputDim, cfg.batch_size);
  const int epoch_steps = std::max<int>(1, static_cast<int>(data.size()) / cfg.batch_size);
  double epoch_sum = 0;
  int in_epoch = 0;
  for (int step = 1; step <= cfg.steps; ++step) {
    for (int b = 0; b < cfg.batch_size; ++b) {
      const DemoSample& s = data.samples[draw()];
      x.col(b) = s.features;
      y.col(b) = flatten(s.waypoints);
    }
    const double loss = model.l1_loss(x, y, &grad);
    m = cfg.beta1 * m + (1 - cfg.beta1) * grad;
    v = cfg.beta2 * v + (1 - cfg.beta2) * grad.cwiseProduct(grad);
    const double c1 = 1 - std::pow(cfg.beta1, step);
    const double c2 = 1 - std::pow(cfg.beta2, step);
    const double progress = cfg.steps > 1 ? static_cast<double>(step - 1) / (cfg.steps - 1) : 0.0;
    const double lr = cfg.learning_rate * (1.0 - (1.0 - cfg.final_lr_fraction) * progress);
    model.parameters().array() -=
        lr * (m.array() / c1) / ((v.array() / c2).sqrt() + cfg.epsilon);
    if (report) {
      report->step_loss.push_back(loss);
      epoch_sum += loss;
      if (++in_epoch == epoch_steps) {
        report->epoch_loss.push_back(epoch_sum / epoch_steps);
        epoch_sum = 0;
        in_epoch = 0;
      }
    }
  }
}

}  // namespace

PolicyModel train_policy(const DemoDataset& data, const TrainConfig& cfg, TrainReport* report) {
  if (data.empty()) throw Error(ErrorCode::kEmptyDataset, "no demonstrations");
  PolicyModel model(static_cast<int>(data.samples.front().features.size()), cfg.hidden, cfg.seed, cfg.output_scale);
  run_adam(model, data, cfg, report);
  return model;
}

PolicyModel fine_tune(PolicyModel model, const DemoDataset& data, const TrainConfig& cfg, TrainReport* report) {
  run_adam(model, data, cfg, report);
  return model;
}

double evaluate_l1(const PolicyModel& model, const DemoDataset& data) {
  check_shapes(data, model.input_dim());
  Eigen::MatrixXd x(model.input_dim(), static_cast<Eigen::Index>(data.size()));
  Eigen::MatrixXd y(PolicyModel::kOutputDim, static_cast<Eigen::Index>(data.size()));
  for (std::size_t k = 0; k < data.size(); ++k) {
    x.col(k) = data.samples[k].features;
    y.col(k) = flatten(data.samples[k].waypoints);
  }
  return model.l1_loss(x, y, nullptr);
}

namespace {

/// Expert ego that records what it sees and what it emits.
class RecordingExpert final : public EgoAgent {
 public:
  RecordingExpert(const CollectConfig& cfg, DemoTag tag, DemoDataset& sink, const EgoAgent* driver = nullptr)
      : expert_(cfg.expert), features_(cfg.features), tag_(tag), sink_(&sink),
        driver_(driver ? driver->clone() : nullptr) {}
  RecordingExpert(const RecordingExpert& o)
      : expert_(o.expert_), features_(o.features_), tag_(o.tag_), sink_(o.sink_),
        driver_(o.driver_ ? o.driver_->clone() : nullptr), tracker_(o.tracker_) {}

  void reset(const EgoContext& ctx) override {
    expert_.reset(ctx);
    if (driver_) driver_->reset(ctx);
    tracker_ = RouteTracker(ctx.spec->ego_route, ctx.spec->initial_state.front().position);
  }

  Action act(const TrafficState& state, int t) override {
    const auto proj = tracker_.update(state.front().position);
    const GoalPoint goal = route_goal(tracker_.path(), proj, features_.goal_lookahead);
    const Action a = expert_.act(state, t);
    sink_->samples.push_back({extract_features(state, goal.point, features_), expert_.last_waypoints(), tag_});
    return driver_ ? driver_->act(state, t) : a;
  }

  std::unique_ptr<EgoAgent> clone() const override { return std::make_unique<RecordingExpert>(*this); }
  std::string name() const override { return "recording_expert"; }

 private:
  ExpertEgo expert_;
  FeatureConfig features_;
  DemoTag tag_;
  DemoDataset* sink_;
  std::unique_ptr<EgoAgent> driver_;
  RouteTracker tracker_;
};

}  // namespace

DemoDataset collect_demos(const std::vector<ScenarioSpec>& scenarios, const MapLibrary& maps, DemoTag tag,
                          const CollectConfig& cfg) {
  DemoDataset data;
  for (const auto& spec : scenarios) {
    RecordingExpert ego(cfg, tag, data);
    rollout(spec, maps.at(spec.map_id), ego, TapeMode::kNoRecord, cfg.sim);
  }
  return data;
}

DemoDataset collect_demos_on_policy(const std::vector<ScenarioSpec>& scenarios, const MapLibrary& maps, DemoTag tag,
                                    const EgoAgent& driver, const CollectConfig& cfg) {
  DemoDataset data;
  for (const auto& spec : scenarios) {
    RecordingExpert ego(cfg, tag, data, &driver);
    try {
      rollout(spec, maps.at(spec.map_id), ego, TapeMode::kNoRecord, cfg.sim);
    } catch (const Error& e) {
      // A wandering driver can overrun its route; keep what was recorded.
      if (e.code() != ErrorCode::kRouteExhausted) throw;
    }
  }
  return data;
}

PolicyModel train_with_aggregation(const std::vector<ScenarioSpec>& scenarios, const MapLibrary& maps,
                                   const AggregationConfig& cfg, DemoDataset* data) {
  DemoDataset all = collect_demos(scenarios, maps, DemoTag::kRegular, cfg.collect);
  PolicyModel model = train_policy(all, cfg.train);
  for (int round = 0; round < cfg.rounds; ++round) {
    PolicyEgo driver(std::make_shared<const PolicyModel>(model), cfg.collect.features, cfg.collect.expert.driving.gains);
    all.append(collect_demos_on_policy(scenarios, maps, DemoTag::kRegular, driver, cfg.collect));
    TrainConfig tc = cfg.train;
    tc.seed = cfg.train.seed + round + 1;
    model = train_policy(all, tc);
  }
  if (data) *data = std::move(all);
  return model;
}

}  // namespace adversim
