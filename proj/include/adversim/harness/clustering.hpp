#pragma once

#include "adversim/ego_agent.hpp"
#include "adversim/harness/solvability.hpp"
#include "adversim/map_library.hpp"
#include "adversim/rollout.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <vector>

namespace adversim {

inline constexpr int kImpactFeatureDim = 6;

/// [sin, cos of the adversary heading relative to the ego, sin, cos of the
/// bearing of the impact point in the ego frame, ego speed, adversary speed]
/// at the collision step. The impact point is the centroid of the two boxes'
/// overlap. Throws kInvalidArgument unless the verdict is an ego collision.
Eigen::VectorXd impact_features(const RolloutResult& result);

struct ClusterConfig {
  int k = 6;
  int max_iterations = 100;
  std::uint64_t seed = 0;  ///< picks the first seed point
};

struct ClusterReport {
  Eigen::MatrixXd features;      ///< one row per clustered scenario, raw units
  Eigen::MatrixXd standardized;  ///< zero mean, unit variance per column
  std::vector<int> assignments;
  Eigen::MatrixXd centroids;  ///< k rows, standardized space
  std::vector<int> counts;
  double inertia = 0.0;  ///< within-cluster sum of squares, standardized space
  int iterations = 0;
  std::vector<int> members;  ///< input index of each clustered row (cluster_failures only)
  int no_collision = 0;
  int not_solvable = 0;
};

/// Within-cluster sum of squares of an arbitrary assignment.
double within_cluster_ss(const Eigen::MatrixXd& points, const std::vector<int>& assignments, int k);

/// k-means on standardized rows with greedy farthest-point seeding.
/// Throws kTooFewScenarios when there are fewer rows than clusters.
ClusterReport cluster_features(const std::vector<Eigen::VectorXd>& features, const ClusterConfig& cfg = {});

/// Replays every solvable collision's best plan against `ego`, clusters the
/// impact features and counts the other two buckets.
ClusterReport cluster_failures(const std::vector<ScenarioSpec>& specs, const std::vector<AttackOutcome>& outcomes,
                               const std::vector<Solvability>& buckets, const MapLibrary& maps, const EgoAgent& ego,
                               const ClusterConfig& cfg = {}, const SimConfig& sim = {});

}  // namespace adversim
