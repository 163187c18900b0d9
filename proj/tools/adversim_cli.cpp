#include "adversim/agents/expert.hpp"
#include "adversim/agents/policy.hpp"
#include "adversim/agents/rule_based.hpp"
#include "adversim/agents/training.hpp"
#include "adversim/error.hpp"
#include "adversim/harness/benchmark.hpp"
#include "adversim/harness/clustering.hpp"
#include "adversim/harness/config.hpp"
#include "adversim/harness/robustness.hpp"
#include "adversim/harness/solvability.hpp"
#include "adversim/harness/traces.hpp"
#include "adversim/map_library.hpp"
#include "adversim/mapgen.hpp"
#include "adversim/optimizers.hpp"
#include "adversim/scenario_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace adversim;
using nlohmann::json;

namespace {

struct Globals {
  std::string config;
  std::uint64_t seed = 0;
  int jobs = 1;
  std::string out = ".";

  RunConfig run;

  fs::path out_dir() const {
    fs::create_directories(out);
    return out;
  }
};

struct Bench {
  MapLibrary maps;
  std::vector<ScenarioSpec> specs;
  std::vector<std::string> names;
};

Bench load_manifest(const fs::path& path) {
  const Manifest m = manifest_from_json(read_file(path), path.parent_path().string());
  Bench b;
  for (const auto& f : m.map_files) b.maps.add(map_from_json(read_file(f)));
  for (const auto& f : m.scenario_files) {
    b.specs.push_back(load_scenario(f));
    b.names.push_back(fs::path(f).stem().string());
  }
  return b;
}

MapLibrary load_maps(const std::string& manifest, const std::vector<std::string>& map_files) {
  MapLibrary maps;
  if (!manifest.empty()) maps = load_manifest(manifest).maps;
  for (const auto& f : map_files) maps.add(map_from_json(read_file(f)));
  return maps;
}

struct EgoOptions {
  std::string kind;
  std::string policy;

  void add(CLI::App* cmd) {
    cmd->add_option("--ego", kind, "ego driver: rule, expert or policy (default: policy when --policy is given)")
        ->check(CLI::IsMember({"rule", "expert", "policy"}));
    cmd->add_option("--policy", policy, "policy model JSON");
  }

  std::unique_ptr<EgoAgent> make(const RunConfig& run) const {
    const std::string k = kind.empty() ? (policy.empty() ? "rule" : "policy") : kind;
    if (k == "rule") return std::make_unique<RuleBasedEgo>(run.driving);
    if (k == "expert") return std::make_unique<ExpertEgo>(run.expert);
    if (policy.empty()) throw Error(ErrorCode::kInvalidArgument, "--ego policy needs --policy");
    auto model = std::make_shared<const PolicyModel>(PolicyModel::from_json(read_file(policy)));
    return std::make_unique<PolicyEgo>(model, run.features, run.driving.gains);
  }
};

CollectConfig collect_config(const RunConfig& run) {
  CollectConfig c;
  c.expert = run.expert;
  c.features = run.features;
  c.sim = run.sim;
  return c;
}

json outcome_json(const AttackOutcome& o) {
  json j;
  j["success"] = o.success;
  j["best_cost"] = o.best_cost;
  j["iterations"] = o.iterations;
  j["generations"] = o.generations;
  j["wall_time"] = o.wall_time;
  j["time_to_success"] = o.time_to_success ? json(*o.time_to_success) : json(nullptr);
  j["verdict"] = to_string(o.verdict.kind);
  j["impact_t"] = o.verdict.time_index ? json(*o.verdict.time_index) : json(nullptr);
  j["cost_trace"] = o.cost_trace;
  return j;
}

DemoDataset load_datasets(const std::vector<std::string>& files) {
  DemoDataset data;
  for (const auto& f : files) data.append(dataset_from_jsonl(read_file(f)));
  return data;
}

std::string loss_csv(const TrainReport& rep) {
  std::ostringstream out;
  out << "epoch,loss\n";
  for (std::size_t e = 0; e < rep.epoch_loss.size(); ++e) out << e << ',' << rep.epoch_loss[e] << '\n';
  return out.str();
}

// Rows of a benchmark report.json joined with their stored best plans.
struct StoredAttacks {
  std::vector<ScenarioSpec> specs;  ///< initial plan = best plan
  std::vector<AttackOutcome> outcomes;
  std::vector<std::string> names;
};

StoredAttacks load_attacks(const fs::path& dir, const std::string& method) {
  const json report = json::parse(read_file(dir / "report.json"));
  StoredAttacks s;
  for (const auto& row : report.at("rows")) {
    if (row.at("method").get<std::string>() != method) continue;
    const std::string name = row.at("name").get<std::string>();
    ScenarioSpec spec = load_scenario(dir / "plans" / method / (name + ".json"));
    AttackOutcome o;
    o.success = row.at("success").get<bool>();
    o.best_plan = spec.initial_plan;
    s.specs.push_back(std::move(spec));
    s.outcomes.push_back(std::move(o));
    s.names.push_back(name);
  }
  if (s.specs.empty()) throw Error(ErrorCode::kInvalidArgument, "no '" + method + "' rows in " + dir.string());
  return s;
}

// Solvable collision scenarios listed by a filter run.
std::vector<std::pair<std::string, ScenarioSpec>> load_solvable(const fs::path& dir) {
  const json j = json::parse(read_file(dir / "filter.json"));
  std::vector<std::pair<std::string, ScenarioSpec>> out;
  for (const auto& e : j.at("entries")) {
    if (e.at("bucket").get<std::string>() != to_string(Solvability::kSolvable)) continue;
    out.emplace_back(e.at("name").get<std::string>(), load_scenario(dir / e.at("file").get<std::string>()));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adversarial driving scenario generation"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config, "JSON config with sections kinematics, costs, attack, training")
      ->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "master seed");
  app.add_option("--jobs", g.jobs, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "output directory");

  // genmaps
  auto* genmaps = app.add_subcommand("genmaps", "write map JSON files");
  std::vector<std::string> kinds;
  MapTemplate tpl;
  bool no_rotate = false;
  genmaps->add_option("--kind", kinds, "template kinds (default: the four benchmark layouts)");
  genmaps->add_option("--lane-width", tpl.lane_width);
  genmaps->add_option("--arm-length", tpl.arm_length);
  genmaps->add_option("--radius", tpl.curvature_radius, "curvature radius, <= 0 for the kind default");
  genmaps->add_flag("--no-rotate", no_rotate);

  // genbench
  auto* genbench = app.add_subcommand("genbench", "sample benchmark scenarios from maps");
  std::vector<std::string> map_files;
  int routes_per_map = 2;
  std::vector<int> densities{1, 2, 4};
  SamplerConfig sampler;
  genbench->add_option("--maps", map_files, "map JSON files")->required()->check(CLI::ExistingFile);
  genbench->add_option("--routes-per-map", routes_per_map);
  genbench->add_option("--densities", densities)->delimiter(',');
  genbench->add_option("--horizon", sampler.horizon);
  genbench->add_option("--dt", sampler.dt);

  // attack
  auto* attack_cmd = app.add_subcommand("attack", "attack one scenario with one method");
  std::string scenario_file;
  std::string manifest_file;
  std::string method_name;
  EgoOptions ego_opts;
  attack_cmd->add_option("--scenario", scenario_file)->required()->check(CLI::ExistingFile);
  attack_cmd->add_option("--manifest", manifest_file, "manifest providing the maps")->check(CLI::ExistingFile);
  attack_cmd->add_option("--map", map_files, "map JSON files")->check(CLI::ExistingFile);
  attack_cmd->add_option("--method", method_name, "king_direct, king_full, random_search, simba or cma_es");
  ego_opts.add(attack_cmd);

  // benchmark
  auto* benchmark = app.add_subcommand("benchmark", "attack every manifest scenario with every method");
  std::vector<std::string> method_names;
  benchmark->add_option("--manifest", manifest_file)->required()->check(CLI::ExistingFile);
  benchmark->add_option("--methods", method_names, "default: every method the ego supports")->delimiter(',');
  ego_opts.add(benchmark);

  // filter
  auto* filter = app.add_subcommand("filter", "split attacked scenarios into solvable, not solvable, no collision");
  std::string bench_dir;
  filter->add_option("--manifest", manifest_file)->required()->check(CLI::ExistingFile);
  filter->add_option("--benchmark", bench_dir, "output directory of a benchmark run")->required()->check(
      CLI::ExistingDirectory);
  filter->add_option("--method", method_name, "method whose plans are filtered (default king_direct)");

  // cluster
  auto* cluster = app.add_subcommand("cluster", "k-means over the solvable collisions");
  std::string filter_dir;
  ClusterConfig ccfg;
  cluster->add_option("--manifest", manifest_file)->required()->check(CLI::ExistingFile);
  cluster->add_option("--filter", filter_dir, "output directory of a filter run")->required()->check(
      CLI::ExistingDirectory);
  cluster->add_option("--k", ccfg.k);
  ego_opts.add(cluster);

  // collect
  auto* collect = app.add_subcommand("collect", "record expert demonstrations");
  std::vector<std::string> scenario_files;
  std::string tag_name = "regular";
  collect->add_option("--manifest", manifest_file, "maps, and the scenarios when --scenarios is absent")
      ->required()
      ->check(CLI::ExistingFile);
  collect->add_option("--scenarios", scenario_files)->check(CLI::ExistingFile);
  collect->add_option("--filter", filter_dir, "use the solvable scenarios of a filter run")->check(
      CLI::ExistingDirectory);
  collect->add_option("--tag", tag_name)->check(CLI::IsMember({"regular", "critical"}));

  // train
  auto* train = app.add_subcommand("train", "train a policy from scratch");
  std::vector<std::string> data_files;
  train->add_option("--data", data_files, "JSON-lines datasets");
  train->add_option("--manifest", manifest_file, "train with on-policy aggregation on these scenarios")
      ->check(CLI::ExistingFile);

  // finetune
  auto* finetune = app.add_subcommand("finetune", "continue training a policy");
  double critical_fraction = -2.0;
  int steps = 0;
  finetune->add_option("--policy", ego_opts.policy)->required()->check(CLI::ExistingFile);
  finetune->add_option("--data", data_files)->required()->check(CLI::ExistingFile);
  finetune->add_option("--critical-fraction", critical_fraction, "share of critical samples per batch");
  finetune->add_option("--steps", steps);

  // robustness
  auto* robustness = app.add_subcommand("robustness", "fine-tuning experiment on held-out attacks");
  std::string regular_file;
  double heldout_fraction = 0.2;
  robustness->add_option("--manifest", manifest_file)->required()->check(CLI::ExistingFile);
  robustness->add_option("--filter", filter_dir)->required()->check(CLI::ExistingDirectory);
  robustness->add_option("--policy", ego_opts.policy)->required()->check(CLI::ExistingFile);
  robustness->add_option("--regular", regular_file, "regular demonstrations (JSON lines)")->required()->check(
      CLI::ExistingFile);
  robustness->add_option("--heldout-fraction", heldout_fraction);

  // trace
  auto* trace = app.add_subcommand("trace", "write per-step CSV and an SVG plot of one rollout");
  std::string stem;
  trace->add_option("--scenario", scenario_file)->required()->check(CLI::ExistingFile);
  trace->add_option("--manifest", manifest_file)->check(CLI::ExistingFile);
  trace->add_option("--map", map_files)->check(CLI::ExistingFile);
  trace->add_option("--name", stem, "output file stem (default: scenario file stem)");
  ego_opts.add(trace);

  CLI11_PARSE(app, argc, argv);

  try {
    if (!g.config.empty()) g.run = load_config(g.config);
    RunConfig& run = g.run;

    if (genmaps->parsed()) {
      std::vector<MapTemplate> templates;
      if (kinds.empty()) {
        templates = benchmark_templates(g.seed);
      } else {
        for (std::size_t i = 0; i < kinds.size(); ++i) {
          MapTemplate t = tpl;
          t.kind = template_kind_from_string(kinds[i]);
          t.seed = g.seed * kinds.size() + i;
          templates.push_back(t);
        }
      }
      const fs::path dir = g.out_dir();
      for (auto& t : templates) {
        t.rotate = !no_rotate;
        if (!kinds.empty()) {
          t.lane_width = tpl.lane_width;
          t.arm_length = tpl.arm_length;
          t.curvature_radius = tpl.curvature_radius;
        }
        const MapModel map = generate_map(t);
        write_file(dir / (map.id() + ".json"), map_to_json(map));
        std::cout << map.id() << '\n';
      }
    } else if (genbench->parsed()) {
      std::vector<MapModel> maps;
      for (const auto& f : map_files) maps.push_back(map_from_json(read_file(f)));
      sampler.builder.driving = run.driving;
      sampler.builder.sim = run.sim;
      const auto specs = sample_benchmark(maps, routes_per_map, densities, g.seed, sampler);
      const fs::path dir = g.out_dir();
      fs::create_directories(dir / "scenarios");
      std::vector<std::string> rel_maps;
      for (const auto& f : map_files) rel_maps.push_back(fs::relative(fs::absolute(f), fs::absolute(dir)).string());
      std::vector<std::string> rel_scenarios;
      for (std::size_t i = 0; i < specs.size(); ++i) {
        const std::string rel = "scenarios/" + scenario_file_name(specs[i], static_cast<int>(i));
        save_scenario(specs[i], dir / rel);
        rel_scenarios.push_back(rel);
      }
      write_file(dir / "manifest.json", manifest_to_json(rel_maps, rel_scenarios, specs));
      std::cout << specs.size() << " scenarios\n";
    } else if (attack_cmd->parsed()) {
      const MapLibrary maps = load_maps(manifest_file, map_files);
      const ScenarioSpec spec = load_scenario(scenario_file);
      auto ego = ego_opts.make(run);
      AttackConfig cfg = run.attack;
      if (!method_name.empty()) cfg.method = attack_method_from_string(method_name);
      cfg.seed = g.seed;
      const AttackOutcome o = attack(spec, maps.at(spec.map_id), *ego, cfg);
      const fs::path dir = g.out_dir();
      const std::string m = to_string(cfg.method);
      write_file(dir / ("attack_" + m + ".json"), outcome_json(o).dump(2));
      save_scenario(with_plan(spec, o.best_plan), dir / ("best_" + m + ".json"));
      std::cout << m << ' ' << (o.success ? "success" : "failure") << " after " << o.iterations << " iterations, "
                << to_string(o.verdict.kind) << '\n';
    } else if (benchmark->parsed()) {
      const Bench b = load_manifest(manifest_file);
      auto ego = ego_opts.make(run);
      std::vector<AttackMethod> methods;
      for (const auto& m : method_names) methods.push_back(attack_method_from_string(m));
      if (methods.empty()) {
        methods = {AttackMethod::kKingDirect, AttackMethod::kKingFull, AttackMethod::kRandomSearch,
                   AttackMethod::kSimba, AttackMethod::kCmaEs};
        if (!ego->differentiable()) methods.erase(methods.begin() + 1);
      }
      BenchmarkConfig cfg;
      cfg.attack = run.attack;
      cfg.jobs = g.jobs;
      cfg.seed = g.seed;
      BenchmarkReport rep = run_benchmark(b.specs, b.maps, *ego, methods, cfg, b.names);
      rep.config_json = config_to_json(run);
      const fs::path dir = g.out_dir();
      write_file(dir / "rows.csv", rows_csv(rep));
      write_file(dir / "cells.csv", cells_csv(rep));
      write_file(dir / "report.json", report_json(rep));
      for (const auto& row : rep.rows) {
        const fs::path plans = dir / "plans" / to_string(row.method);
        fs::create_directories(plans);
        save_scenario(with_plan(b.specs[row.scenario], row.outcome.best_plan), plans / (row.name + ".json"));
      }
      std::cout << cells_csv(rep);
    } else if (filter->parsed()) {
      const MapLibrary maps = load_manifest(manifest_file).maps;
      const std::string method = method_name.empty() ? "king_direct" : method_name;
      const StoredAttacks s = load_attacks(bench_dir, method);
      const auto buckets = filter_solvable(s.specs, s.outcomes, maps, run.expert, run.sim, g.jobs);
      const fs::path dir = g.out_dir();
      fs::create_directories(dir / "collisions");
      json entries = json::array();
      std::ostringstream csv;
      csv << "name,map_id,density,bucket\n";
      int counts[3] = {0, 0, 0};
      for (std::size_t i = 0; i < buckets.size(); ++i) {
        ++counts[static_cast<int>(buckets[i])];
        json e{{"name", s.names[i]}, {"map_id", s.specs[i].map_id}, {"bucket", to_string(buckets[i])}};
        if (buckets[i] != Solvability::kNoCollision) {
          const std::string rel = "collisions/" + s.names[i] + ".json";
          save_scenario(s.specs[i], dir / rel);
          e["file"] = rel;
        }
        entries.push_back(std::move(e));
        csv << s.names[i] << ',' << s.specs[i].map_id << ',' << s.specs[i].num_adversaries() << ','
            << to_string(buckets[i]) << '\n';
      }
      write_file(dir / "filter.json", json{{"method", method}, {"entries", entries}}.dump(2));
      write_file(dir / "filter.csv", csv.str());
      std::cout << "solvable " << counts[0] << ", not solvable " << counts[1] << ", no collision " << counts[2]
                << '\n';
    } else if (cluster->parsed()) {
      const MapLibrary maps = load_manifest(manifest_file).maps;
      const json j = json::parse(read_file(fs::path(filter_dir) / "filter.json"));
      auto ego = ego_opts.make(run);
      std::vector<ScenarioSpec> specs;
      std::vector<AttackOutcome> outcomes;
      std::vector<Solvability> buckets;
      std::vector<std::string> names;
      for (const auto& e : j.at("entries")) {
        const std::string bucket = e.at("bucket").get<std::string>();
        if (bucket == to_string(Solvability::kNoCollision)) {
          specs.emplace_back();
          outcomes.emplace_back();
          buckets.push_back(Solvability::kNoCollision);
        } else {
          specs.push_back(load_scenario(fs::path(filter_dir) / e.at("file").get<std::string>()));
          AttackOutcome o;
          o.success = true;
          o.best_plan = specs.back().initial_plan;
          outcomes.push_back(std::move(o));
          buckets.push_back(bucket == to_string(Solvability::kSolvable) ? Solvability::kSolvable
                                                                          : Solvability::kNotSolvable);
        }
        names.push_back(e.at("name").get<std::string>());
      }
      ccfg.seed = g.seed;
      const ClusterReport rep = cluster_failures(specs, outcomes, buckets, maps, *ego, ccfg, run.sim);
      const fs::path dir = g.out_dir();
      std::ostringstream csv;
      csv << "name,cluster,sin_rel_heading,cos_rel_heading,sin_bearing,cos_bearing,ego_speed,adv_speed\n";
      for (std::size_t r = 0; r < rep.members.size(); ++r) {
        csv << names[rep.members[r]] << ',' << rep.assignments[r];
        for (Eigen::Index c = 0; c < rep.features.cols(); ++c) csv << ',' << rep.features(r, c);
        csv << '\n';
      }
      json centroids = json::array();
      for (Eigen::Index k = 0; k < rep.centroids.rows(); ++k) {
        std::vector<double> row(rep.centroids.cols());
        for (Eigen::Index c = 0; c < rep.centroids.cols(); ++c) row[c] = rep.centroids(k, c);
        centroids.push_back(row);
      }
      json out{{"k", ccfg.k},
               {"counts", rep.counts},
               {"no_collision", rep.no_collision},
               {"not_solvable", rep.not_solvable},
               {"inertia", rep.inertia},
               {"iterations", rep.iterations},
               {"centroids_standardized", centroids}};
      write_file(dir / "clusters.csv", csv.str());
      write_file(dir / "clusters.json", out.dump(2));
      std::cout << out.dump() << '\n';
    } else if (collect->parsed()) {
      Bench b = load_manifest(manifest_file);
      std::vector<ScenarioSpec> specs;
      if (!filter_dir.empty()) {
        for (auto& [name, spec] : load_solvable(filter_dir)) specs.push_back(std::move(spec));
      } else if (!scenario_files.empty()) {
        for (const auto& f : scenario_files) specs.push_back(load_scenario(f));
      } else {
        specs = b.specs;
      }
      const DemoDataset data = collect_demos(specs, b.maps, demo_tag_from_string(tag_name), collect_config(run));
      write_file(g.out_dir() / "demos.jsonl", dataset_to_jsonl(data));
      std::cout << data.size() << " samples\n";
    } else if (train->parsed()) {
      TrainConfig tc = run.training;
      tc.seed = g.seed;
      const fs::path dir = g.out_dir();
      if (!manifest_file.empty()) {
        const Bench b = load_manifest(manifest_file);
        AggregationConfig ac;
        ac.rounds = run.aggregation_rounds;
        ac.train = tc;
        ac.collect = collect_config(run);
        DemoDataset aggregate;
        const PolicyModel model = train_with_aggregation(b.specs, b.maps, ac, &aggregate);
        write_file(dir / "policy.json", model.to_json());
        write_file(dir / "demos.jsonl", dataset_to_jsonl(aggregate));
        std::cout << aggregate.size() << " samples, L1 " << evaluate_l1(model, aggregate) << '\n';
      } else {
        if (data_files.empty()) throw Error(ErrorCode::kInvalidArgument, "train needs --data or --manifest");
        const DemoDataset data = load_datasets(data_files);
        TrainReport rep;
        const PolicyModel model = train_policy(data, tc, &rep);
        write_file(dir / "policy.json", model.to_json());
        write_file(dir / "train_loss.csv", loss_csv(rep));
        std::cout << data.size() << " samples, L1 " << evaluate_l1(model, data) << '\n';
      }
    } else if (finetune->parsed()) {
      TrainConfig tc = run.training;
      tc.seed = g.seed;
      tc.steps = steps > 0 ? steps : run.finetune_steps;
      if (critical_fraction >= -1.0) tc.critical_fraction = critical_fraction;
      const DemoDataset data = load_datasets(data_files);
      TrainReport rep;
      const PolicyModel model =
          fine_tune(PolicyModel::from_json(read_file(ego_opts.policy)), data, tc, &rep);
      const fs::path dir = g.out_dir();
      write_file(dir / "policy_finetuned.json", model.to_json());
      write_file(dir / "finetune_loss.csv", loss_csv(rep));
      std::cout << data.size() << " samples, L1 " << evaluate_l1(model, data) << '\n';
    } else if (robustness->parsed()) {
      const MapLibrary maps = load_manifest(manifest_file).maps;
      const auto solvable = load_solvable(filter_dir);
      std::vector<ScenarioSpec> specs;
      for (const auto& [name, spec] : solvable) specs.push_back(spec);
      const HoldoutSplit split = split_by_start(specs, heldout_fraction, g.seed);
      std::vector<ScenarioSpec> train_specs, heldout_specs;
      json sj{{"train", json::array()}, {"heldout", json::array()}};
      for (int i : split.train) {
        train_specs.push_back(specs[i]);
        sj["train"].push_back(solvable[i].first);
      }
      for (int i : split.heldout) {
        heldout_specs.push_back(specs[i]);
        sj["heldout"].push_back(solvable[i].first);
      }
      RobustnessConfig rc;
      rc.finetune = run.training;
      rc.finetune.steps = run.finetune_steps;
      rc.finetune.seed = g.seed;
      rc.mixed_critical_fraction = run.mixed_critical_fraction;
      rc.critical_rounds = run.critical_rounds;
      rc.collect = collect_config(run);
      rc.jobs = g.jobs;
      const RobustnessTable table =
          robustness_experiment(train_specs, heldout_specs, PolicyModel::from_json(read_file(ego_opts.policy)),
                                dataset_from_jsonl(read_file(regular_file)), maps, rc);
      const fs::path dir = g.out_dir();
      write_file(dir / "robustness.csv", robustness_csv(table));
      write_file(dir / "split.json", sj.dump(2));
      std::cout << robustness_csv(table);
    } else if (trace->parsed()) {
      const MapLibrary maps = load_maps(manifest_file, map_files);
      const ScenarioSpec spec = load_scenario(scenario_file);
      auto ego = ego_opts.make(run);
      const MapModel& map = maps.at(spec.map_id);
      const RolloutResult r = replay(spec, spec.initial_plan, map, *ego, run.sim);
      const std::string name = stem.empty() ? fs::path(scenario_file).stem().string() : stem;
      emit_traces(r, map, g.out_dir() / name);
      std::cout << to_string(r.verdict.kind) << " after " << r.steps_taken() << " steps\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
