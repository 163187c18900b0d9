#include "adversim/error.hpp"
#include "adversim/harness/benchmark.hpp"
#include "adversim/harness/clustering.hpp"
#include "adversim/harness/config.hpp"
#include "adversim/harness/parallel.hpp"
#include "adversim/harness/robustness.hpp"
#include "adversim/harness/solvability.hpp"
#include "adversim/harness/traces.hpp"

#include "../support/fixtures.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

using namespace adversim;

namespace {

AgentState car(double x, double y, double speed, double heading = 0.0) {
  AgentState s;
  s.position = {x, y};
  s.heading = heading;
  s.speed = speed;
  return s;
}

ScenarioSpec lane_spec(std::vector<AgentState> adversaries, int horizon = 40, double ego_x = -40) {
  ScenarioSpec spec;
  spec.map_id = "straight";
  spec.horizon = horizon;
  spec.dt = 0.25;
  spec.ego_route = {{-95, -1.75}, {95, -1.75}};
  spec.ego_goal = spec.ego_route.back();
  spec.initial_state = {car(ego_x, -1.75, 6.0)};
  for (auto& a : adversaries) spec.initial_state.push_back(a);
  spec.initial_plan = ActionPlan(static_cast<int>(adversaries.size()), horizon);
  return spec;
}

// Fast adversary closing from behind at full throttle.
ScenarioSpec rear_ram() {
  ScenarioSpec spec = lane_spec({car(-52, -1.75, 14.0)});
  for (int t = 0; t < spec.horizon; ++t) spec.initial_plan.raw()[spec.initial_plan.index(0, t, 0)] = 3.0;
  return spec;
}

// Stationary car parked in the ego lane 30 m ahead.
ScenarioSpec parked_ahead() { return lane_spec({car(-10, -1.75, 0.0)}); }

// Adversary alongside in the other lane.
ScenarioSpec alongside(double gap) { return lane_spec({car(-40, -1.75 + gap, 6.0)}); }

MapLibrary library() { return MapLibrary({fixture::straight_road(7.0)}); }

AttackOutcome succeeded(const ScenarioSpec& spec) {
  AttackOutcome o;
  o.success = true;
  o.best_plan = spec.initial_plan;
  return o;
}

}  // namespace

TEST(TimeToHalf, OrderStatistic) {
  EXPECT_EQ(time_to_half({}), std::nullopt);
  EXPECT_EQ(time_to_half({3.0, std::nullopt, 1.0, std::nullopt}), 3.0);
  EXPECT_EQ(time_to_half({3.0, std::nullopt, std::nullopt, std::nullopt}), std::nullopt);
  EXPECT_EQ(time_to_half({5.0, 2.0, 4.0}), 4.0);
  EXPECT_EQ(time_to_half({5.0, std::nullopt, 4.0}), 5.0);
}

TEST(Benchmark, RowsCellsAndCsv) {
  const MapLibrary maps = library();
  std::vector<ScenarioSpec> specs{alongside(3.5), alongside(3.5), parked_ahead(), alongside(3.5)};
  specs[1].initial_state.push_back(car(20, 1.75, 5.0, kTwoPi / 2));
  specs[1].initial_plan = ActionPlan(2, specs[1].horizon);
  specs[3].map_id = "missing";
  ConstantEgo ego({0.0, 0.0});
  const std::vector<AttackMethod> methods{AttackMethod::kKingDirect, AttackMethod::kRandomSearch};
  BenchmarkConfig cfg;
  cfg.attack.max_iterations = 30;
  cfg.attack.wall_clock_budget = 600.0;
  const BenchmarkReport rep = run_benchmark(specs, maps, ego, methods, cfg);

  ASSERT_EQ(rep.rows.size(), 8u);
  for (std::size_t m = 0; m < methods.size(); ++m) {
    for (std::size_t i = 0; i < specs.size(); ++i) {
      const BenchmarkRow& r = rep.rows[m * specs.size() + i];
      EXPECT_EQ(r.method, methods[m]);
      EXPECT_EQ(r.scenario, static_cast<int>(i));
      EXPECT_EQ(r.density, specs[i].num_adversaries());
    }
  }
  EXPECT_FALSE(rep.rows[3].error.empty());
  EXPECT_FALSE(rep.rows[3].outcome.success);
  EXPECT_TRUE(rep.rows[2].outcome.success);

  EXPECT_EQ(aggregate_cells(rep.rows, methods).size(), rep.cells.size());
  for (const BenchmarkCell& c : rep.cells) {
    int n = 0, hits = 0;
    std::vector<std::optional<double>> times;
    for (const auto& r : rep.rows) {
      if (r.method != c.method || (c.density >= 0 && r.density != c.density)) continue;
      ++n;
      hits += r.outcome.success;
      times.push_back(r.outcome.time_to_success);
    }
    EXPECT_EQ(c.scenarios, n);
    EXPECT_EQ(c.successes, hits);
    EXPECT_DOUBLE_EQ(c.collision_rate, 100.0 * hits / n);
    EXPECT_EQ(c.t50.has_value(), c.collision_rate >= 50.0);
    if (c.t50) EXPECT_EQ(c.t50, time_to_half(times));
  }
  EXPECT_EQ(rep.cells.back().density, -1);

  const std::string csv = rows_csv(rep);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 9);
  const std::string header = csv.substr(0, csv.find('\n'));
  EXPECT_EQ(header.substr(header.size() - std::string("wall_time,time_to_success").size()),
            "wall_time,time_to_success");
  EXPECT_NE(report_json(rep).find("\"rows\""), std::string::npos);
  EXPECT_FALSE(cells_csv(rep).empty());
}

TEST(Benchmark, JobsDoNotChangeResults) {
  const MapLibrary maps = library();
  const std::vector<ScenarioSpec> specs{alongside(3.5), alongside(9.0), parked_ahead()};
  ConstantEgo ego({0.0, 0.0});
  BenchmarkConfig cfg;
  cfg.attack.max_iterations = 12;
  cfg.attack.wall_clock_budget = 600.0;
  const auto one = run_benchmark(specs, maps, ego, {AttackMethod::kSimba}, cfg);
  cfg.jobs = 3;
  const auto three = run_benchmark(specs, maps, ego, {AttackMethod::kSimba}, cfg);
  ASSERT_EQ(one.rows.size(), three.rows.size());
  for (std::size_t i = 0; i < one.rows.size(); ++i) {
    EXPECT_EQ(one.rows[i].outcome.cost_trace, three.rows[i].outcome.cost_trace);
    EXPECT_EQ(one.rows[i].outcome.best_plan, three.rows[i].outcome.best_plan);
  }
}

TEST(Solvability, Buckets) {
  const MapLibrary maps = library();
  const MapModel& map = maps.at("straight");
  ConstantEgo cruise({0.0, 0.0});
  const ScenarioSpec ram = rear_ram();
  const ScenarioSpec parked = parked_ahead();
  ASSERT_EQ(replay(ram, ram.initial_plan, map, cruise).verdict.kind, VerdictKind::kEgoCollision);
  ASSERT_EQ(replay(parked, parked.initial_plan, map, cruise).verdict.kind, VerdictKind::kEgoCollision);

  EXPECT_EQ(classify_solvability(ram, succeeded(ram), map), Solvability::kNotSolvable);
  EXPECT_EQ(classify_solvability(parked, succeeded(parked), map), Solvability::kSolvable);
  EXPECT_EQ(classify_solvability(parked, AttackOutcome{}, map), Solvability::kNoCollision);

  const std::vector<ScenarioSpec> specs{ram, parked, parked};
  const std::vector<AttackOutcome> outcomes{succeeded(ram), succeeded(parked), AttackOutcome{}};
  const auto serial = filter_solvable(specs, outcomes, maps);
  EXPECT_EQ(serial, (std::vector<Solvability>{Solvability::kNotSolvable, Solvability::kSolvable,
                                               Solvability::kNoCollision}));
  EXPECT_EQ(filter_solvable(specs, outcomes, maps, {}, {}, 3), serial);

  // Solvable means the expert survives the replayed plan.
  ExpertEgo expert;
  EXPECT_NE(replay(parked, parked.initial_plan, map, expert).verdict.kind, VerdictKind::kEgoCollision);
}

TEST(Clustering, SeparableBlobs) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> noise(0.0, 0.1);
  const std::vector<Eigen::Vector2d> centers{{0, 0}, {10, 0}, {0, 10}};
  std::vector<Eigen::VectorXd> pts;
  std::vector<int> truth;
  for (int i = 0; i < 60; ++i) {
    const int c = i % 3;
    pts.push_back(centers[c] + Eigen::Vector2d(noise(rng), noise(rng)));
    truth.push_back(c);
  }
  ClusterConfig cfg;
  cfg.k = 3;
  const ClusterReport rep = cluster_features(pts, cfg);
  std::map<int, int> label_of;
  for (int i = 0; i < 60; ++i) {
    auto [it, inserted] = label_of.emplace(truth[i], rep.assignments[i]);
    EXPECT_EQ(it->second, rep.assignments[i]);
  }
  std::set<int> labels;
  for (auto& [t, l] : label_of) labels.insert(l);
  EXPECT_EQ(labels.size(), 3u);
  EXPECT_EQ(rep.counts, (std::vector<int>{20, 20, 20}));
}

TEST(Clustering, InertiaBeatsRandomAssignments) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<Eigen::VectorXd> pts;
  for (int i = 0; i < 40; ++i) {
    Eigen::VectorXd p(kImpactFeatureDim);
    for (int d = 0; d < kImpactFeatureDim; ++d) p[d] = g(rng) * (d + 1);
    pts.push_back(p);
  }
  ClusterConfig cfg;
  cfg.k = 4;
  const ClusterReport rep = cluster_features(pts, cfg);
  EXPECT_NEAR(rep.inertia, within_cluster_ss(rep.standardized, rep.assignments, 4), 1e-9);
  std::uniform_int_distribution<int> pick(0, 3);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<int> a(40);
    for (auto& x : a) x = pick(rng);
    EXPECT_LE(rep.inertia, within_cluster_ss(rep.standardized, a, 4) + 1e-9);
  }
  for (int d = 0; d < kImpactFeatureDim; ++d) {
    EXPECT_NEAR(rep.standardized.col(d).mean(), 0.0, 1e-12);
    EXPECT_NEAR(std::sqrt(rep.standardized.col(d).array().square().mean()), 1.0, 1e-12);
  }
}

TEST(Clustering, DuplicatesAndTooFew) {
  std::vector<Eigen::VectorXd> pts(5, Eigen::Vector2d(1.0, 2.0));
  pts.push_back(Eigen::Vector2d(3.0, 2.0));
  ClusterConfig cfg;
  cfg.k = 2;
  const ClusterReport rep = cluster_features(pts, cfg);
  EXPECT_NEAR(rep.inertia, 0.0, 1e-12);
  EXPECT_EQ(std::count(rep.assignments.begin(), rep.assignments.end(), rep.assignments.back()), 1);

  cfg.k = 7;
  try {
    cluster_features(pts, cfg);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTooFewScenarios);
  }
}

TEST(Clustering, ImpactFeaturesOfRearRam) {
  const MapLibrary maps = library();
  const ScenarioSpec ram = rear_ram();
  ConstantEgo cruise({0.0, 0.0});
  const RolloutResult r = replay(ram, ram.initial_plan, maps.at("straight"), cruise);
  ASSERT_EQ(r.verdict.kind, VerdictKind::kEgoCollision);
  const Eigen::VectorXd f = impact_features(r);
  ASSERT_EQ(f.size(), kImpactFeatureDim);
  EXPECT_NEAR(f[0], 0.0, 1e-9);
  EXPECT_NEAR(f[1], 1.0, 1e-9);
  EXPECT_NEAR(f[2], 0.0, 1e-6);
  EXPECT_NEAR(f[3], -1.0, 1e-6);
  const TrafficState& hit = r.states.back();
  EXPECT_EQ(f[4], hit[0].speed);
  EXPECT_EQ(f[5], hit[1].speed);

  const ScenarioSpec calm = alongside(3.5);
  EXPECT_ANY_THROW(impact_features(replay(calm, calm.initial_plan, maps.at("straight"), cruise)));

  const ClusterReport rep = cluster_failures({ram, calm, ram}, {succeeded(ram), AttackOutcome{}, succeeded(ram)},
                                             {Solvability::kSolvable, Solvability::kNoCollision,
                                              Solvability::kNotSolvable},
                                             maps, cruise, ClusterConfig{1, 10, 0});
  EXPECT_EQ(rep.members, (std::vector<int>{0}));
  EXPECT_EQ(rep.no_collision, 1);
  EXPECT_EQ(rep.not_solvable, 1);
}

TEST(Robustness, SplitKeepsStartsTogether) {
  std::vector<ScenarioSpec> specs;
  for (int start = 0; start < 10; ++start) {
    for (int k = 0; k < 3; ++k) {
      ScenarioSpec s = alongside(3.5);
      s.initial_state[0].position.x() = -60.0 + 5.0 * start;
      specs.push_back(s);
    }
  }
  const HoldoutSplit split = split_by_start(specs, 0.2, 9);
  EXPECT_EQ(split.train.size() + split.heldout.size(), specs.size());
  EXPECT_EQ(split.heldout.size(), 6u);
  std::set<int> all(split.train.begin(), split.train.end());
  for (int i : split.heldout) EXPECT_TRUE(all.insert(i).second);
  std::set<double> held_starts, train_starts;
  for (int i : split.heldout) held_starts.insert(specs[i].initial_state[0].position.x());
  for (int i : split.train) train_starts.insert(specs[i].initial_state[0].position.x());
  for (double x : held_starts) EXPECT_EQ(train_starts.count(x), 0u);
  EXPECT_EQ(split_by_start(specs, 0.2, 9).heldout, split.heldout);
  EXPECT_TRUE(split_by_start(specs, 0.0, 9).heldout.empty());
  EXPECT_ANY_THROW(split_by_start(specs, 1.5, 9));
}

TEST(Robustness, TableMatchesReplay) {
  const MapLibrary maps = library();
  const std::vector<ScenarioSpec> train{parked_ahead(), alongside(3.5)};
  const std::vector<ScenarioSpec> held{rear_ram(), parked_ahead(), alongside(3.5)};
  FeatureConfig fc;
  const PolicyModel base(fc.dimension(), 8, 1);
  const DemoDataset regular = collect_demos(train, maps, DemoTag::kRegular);
  RobustnessConfig cfg;
  cfg.finetune.steps = 30;
  cfg.finetune.batch_size = 8;
  cfg.critical_rounds = 1;
  const RobustnessTable table = robustness_experiment(train, held, base, regular, maps, cfg);
  ASSERT_EQ(table.rows.size(), 4u);
  EXPECT_EQ(table.rows[0].variant, "none");
  EXPECT_GT(table.critical_samples, 0u);
  for (const auto& row : table.rows) {
    EXPECT_EQ(row.scenarios, 3);
    ASSERT_EQ(row.verdicts.size(), 3u);
    const int hits = static_cast<int>(std::count(row.verdicts.begin(), row.verdicts.end(), VerdictKind::kEgoCollision));
    EXPECT_EQ(row.collisions, hits);
    EXPECT_DOUBLE_EQ(row.collision_rate, 100.0 * hits / 3);
  }
  // The untouched base model reproduces the "none" row.
  const PolicyEgo ego(std::make_shared<const PolicyModel>(base), cfg.collect.features,
                      cfg.collect.expert.driving.gains);
  for (std::size_t i = 0; i < held.size(); ++i) {
    EXPECT_EQ(replay(held[i], held[i].initial_plan, maps.at("straight"), ego).verdict.kind,
              table.rows[0].verdicts[i]);
  }
  const std::string csv = robustness_csv(table);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "variant,scenarios,collisions,cr");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
}

TEST(Traces, CsvAndSvg) {
  const MapLibrary maps = library();
  const MapModel& map = maps.at("straight");
  ConstantEgo cruise({0.0, 0.0});
  const ScenarioSpec ram = rear_ram();
  const RolloutResult hit = replay(ram, ram.initial_plan, map, cruise);
  ASSERT_EQ(hit.verdict.kind, VerdictKind::kEgoCollision);
  const std::string csv = trace_csv(hit);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "t,agent,x,y,heading,speed");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + (hit.steps_taken() + 1) * 2);
  EXPECT_NE(trace_svg(hit, map).find("id=\"impact\""), std::string::npos);
  const auto p = impact_position(hit);
  ASSERT_TRUE(p.has_value());
  EXPECT_LT(p->x(), hit.states.back()[0].position.x());
  EXPECT_GT(p->x(), hit.states.back()[1].position.x());

  const ScenarioSpec calm = alongside(3.5);
  const RolloutResult clean = replay(calm, calm.initial_plan, map, cruise);
  ASSERT_EQ(clean.verdict.kind, VerdictKind::kNoCollision);
  const std::string clean_csv = trace_csv(clean);
  EXPECT_EQ(std::count(clean_csv.begin(), clean_csv.end(), '\n'), 1 + 41 * 2);
  EXPECT_EQ(trace_svg(clean, map).find("id=\"impact\""), std::string::npos);
  EXPECT_FALSE(impact_position(clean).has_value());

  const auto dir = std::filesystem::temp_directory_path() / "adversim_trace_test";
  std::filesystem::create_directories(dir);
  emit_traces(hit, map, dir / "ram");
  std::ifstream in(dir / "ram.csv");
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str(), csv);
  EXPECT_TRUE(std::filesystem::exists(dir / "ram.svg"));
  try {
    emit_traces(hit, map, dir / "ram.csv" / "ram");
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIoFailure);
  }
  std::filesystem::remove_all(dir);
}

TEST(Config, RoundTripAndUnknownKeys) {
  RunConfig cfg;
  cfg.sim.weights.lambda = 0.25;
  cfg.attack.method = AttackMethod::kCmaEs;
  cfg.attack.population = 12;
  cfg.training.steps = 77;
  cfg.training.final_lr_fraction = 0.5;
  cfg.aggregation_rounds = 2;
  cfg.expert.headway = 1.5;
  cfg.driving.cruise_speed = 7.0;
  cfg.features.nearest = 3;
  const std::string json = config_to_json(cfg);
  const RunConfig back = config_from_json(json);
  EXPECT_EQ(config_to_json(back), json);
  EXPECT_EQ(back.attack.method, AttackMethod::kCmaEs);
  EXPECT_EQ(back.training.final_lr_fraction, 0.5);
  EXPECT_EQ(back.features.nearest, 3);
  EXPECT_EQ(back.attack.sim.weights.lambda, 0.25);

  EXPECT_EQ(config_to_json(config_from_json("{}")), config_to_json(RunConfig{}));
  EXPECT_ANY_THROW(config_from_json(R"({"attack": {"budget": 3}})"));
  EXPECT_ANY_THROW(config_from_json(R"({"plotting": {}})"));
  EXPECT_ANY_THROW(config_from_json(R"({"training": {"rounds": -1}})"));
  EXPECT_ANY_THROW(config_from_json("{"));
}

TEST(Parallel, MatchesSerialAndRethrows) {
  std::vector<double> a(50), b(50);
  auto work = [](std::size_t i) { return std::sqrt(static_cast<double>(i)) * 3.0; };
  parallel_for(a.size(), 1, [&](std::size_t i) { a[i] = work(i); });
  parallel_for(b.size(), 4, [&](std::size_t i) { b[i] = work(i); });
  EXPECT_EQ(a, b);
  parallel_for(0, 4, [&](std::size_t) { ADD_FAILURE(); });
  EXPECT_THROW(parallel_for(20, 4,
                            [](std::size_t i) {
                              if (i == 7) throw std::runtime_error("seven");
                            }),
               std::runtime_error);
}
