#include "adversim/harness/clustering.hpp"

#include "adversim/error.hpp"
#include "adversim/geometry.hpp"
#include "adversim/optimizers.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace adversim {

Eigen::VectorXd impact_features(const RolloutResult& result) {
  const Verdict& v = result.verdict;
  if (v.kind != VerdictKind::kEgoCollision || !v.time_index || !v.agents_involved) {
    throw Error(ErrorCode::kInvalidArgument, "impact features need an ego collision");
  }
  const TrafficState& state = result.states.at(*v.time_index);
  const AgentState& ego = state.at(0);
  const AgentState& adv = state.at(v.agents_involved->first == 0 ? v.agents_involved->second : v.agents_involved->first);

  const Polyline region = overlap_region(box_of(ego), box_of(adv));
  Vec2 impact = 0.5 * (ego.position + adv.position);
  if (!region.empty()) {
    impact.setZero();
    for (const auto& p : region) impact += p;
    impact /= static_cast<double>(region.size());
  }
  const Vec2 local = to_local(impact, ego.position, ego.heading);
  const double bearing = std::atan2(local.y(), local.x());
  const double rel = adv.heading - ego.heading;

  Eigen::VectorXd f(kImpactFeatureDim);
  f << std::sin(rel), std::cos(rel), std::sin(bearing), std::cos(bearing), ego.speed, adv.speed;
  return f;
}

double within_cluster_ss(const Eigen::MatrixXd& points, const std::vector<int>& assignments, int k) {
  Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, points.cols());
  std::vector<int> counts(k, 0);
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    sums.row(assignments[i]) += points.row(i);
    ++counts[assignments[i]];
  }
  double ss = 0.0;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    const int c = assignments[i];
    ss += (points.row(i) - sums.row(c) / counts[c]).squaredNorm();
  }
  return ss;
}

ClusterReport cluster_features(const std::vector<Eigen::VectorXd>& features, const ClusterConfig& cfg) {
  if (cfg.k < 1) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
  const int n = static_cast<int>(features.size());
  if (n < cfg.k) {
    throw Error(ErrorCode::kTooFewScenarios,
                std::to_string(n) + " scenarios for " + std::to_string(cfg.k) + " clusters");
  }
  const int dim = static_cast<int>(features.front().size());
  ClusterReport rep;
  rep.features.resize(n, dim);
  for (int i = 0; i < n; ++i) {
    if (features[i].size() != dim) throw Error(ErrorCode::kShapeMismatch, "feature vectors differ in length");
    rep.features.row(i) = features[i].transpose();
  }

  const Eigen::RowVectorXd mean = rep.features.colwise().mean();
  Eigen::RowVectorXd scale(dim);
  for (int c = 0; c < dim; ++c) {
    const double sd = std::sqrt((rep.features.col(c).array() - mean[c]).square().mean());
    scale[c] = sd > 1e-12 ? sd : 1.0;
  }
  rep.standardized = (rep.features.rowwise() - mean).array().rowwise() / scale.array();
  const Eigen::MatrixXd& x = rep.standardized;

  // Farthest-point seeding.
  std::mt19937_64 rng(cfg.seed);
  std::vector<int> seeds{static_cast<int>(std::uniform_int_distribution<int>(0, n - 1)(rng))};
  Eigen::VectorXd nearest = (x.rowwise() - x.row(seeds[0])).rowwise().squaredNorm();
  while (static_cast<int>(seeds.size()) < cfg.k) {
    Eigen::Index far = 0;
    nearest.maxCoeff(&far);
    seeds.push_back(static_cast<int>(far));
    nearest = nearest.cwiseMin((x.rowwise() - x.row(far)).rowwise().squaredNorm());
  }
  rep.centroids.resize(cfg.k, dim);
  for (int c = 0; c < cfg.k; ++c) rep.centroids.row(c) = x.row(seeds[c]);

  rep.assignments.assign(n, -1);
  for (rep.iterations = 0; rep.iterations < cfg.max_iterations;) {
    bool changed = false;
    for (int i = 0; i < n; ++i) {
      Eigen::Index best = 0;
      (rep.centroids.rowwise() - x.row(i)).rowwise().squaredNorm().minCoeff(&best);
      if (rep.assignments[i] != best) {
        rep.assignments[i] = static_cast<int>(best);
        changed = true;
      }
    }
    ++rep.iterations;
    if (!changed) break;
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(cfg.k, dim);
    std::vector<int> counts(cfg.k, 0);
    for (int i = 0; i < n; ++i) {
      sums.row(rep.assignments[i]) += x.row(i);
      ++counts[rep.assignments[i]];
    }
    for (int c = 0; c < cfg.k; ++c) {
      if (counts[c] > 0) rep.centroids.row(c) = sums.row(c) / counts[c];
    }
  }

  rep.counts.assign(cfg.k, 0);
  rep.inertia = 0.0;
  for (int i = 0; i < n; ++i) {
    ++rep.counts[rep.assignments[i]];
    rep.inertia += (x.row(i) - rep.centroids.row(rep.assignments[i])).squaredNorm();
  }
  return rep;
}

ClusterReport cluster_failures(const std::vector<ScenarioSpec>& specs, const std::vector<AttackOutcome>& outcomes,
                               const std::vector<Solvability>& buckets, const MapLibrary& maps, const EgoAgent& ego,
                               const ClusterConfig& cfg, const SimConfig& sim) {
  if (specs.size() != outcomes.size() || specs.size() != buckets.size()) {
    throw Error(ErrorCode::kInvalidArgument, "cluster_failures needs matching scenarios, outcomes and buckets");
  }
  std::vector<Eigen::VectorXd> features;
  std::vector<int> members;
  int no_collision = 0;
  int not_solvable = 0;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    if (buckets[i] == Solvability::kNoCollision) {
      ++no_collision;
    } else if (buckets[i] == Solvability::kNotSolvable) {
      ++not_solvable;
    } else {
      const RolloutResult r = replay(specs[i], outcomes[i].best_plan, maps.at(specs[i].map_id), ego, sim);
      features.push_back(impact_features(r));
      members.push_back(static_cast<int>(i));
    }
  }
  ClusterReport rep = cluster_features(features, cfg);
  rep.members = std::move(members);
  rep.no_collision = no_collision;
  rep.not_solvable = not_solvable;
  return rep;
}

}  // namespace adversim
