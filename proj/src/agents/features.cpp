#include "adversim/agents/features.hpp"

#include "adversim/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace adversim {

FeatureVector extract_features(const TrafficState& state, const Vec2& goal, const FeatureConfig& cfg,
                               Eigen::MatrixXd* jac, const Eigen::Matrix2d& d_goal_d_ego) {
  const int agents = static_cast<int>(state.size());
  FeatureVector f = FeatureVector::Zero(cfg.dimension());
  if (jac != nullptr) jac->setZero(cfg.dimension(), 4 * agents);

  const AgentState& ego = state.front();
  const double c = std::cos(ego.heading);
  const double s = std::sin(ego.heading);
  Eigen::Matrix2d rot_t;  // R(-heading)
  rot_t << c, s, -s, c;
  Eigen::Matrix2d d_rot_t;  // d R(-heading) / d heading
  d_rot_t << -s, c, -c, -s;
  const double ps = 1.0 / cfg.position_scale;
  const double ss = 1.0 / cfg.speed_scale;

  const Vec2 goal_delta = goal - ego.position;
  f.segment<2>(0) = ps * (rot_t * goal_delta);
  f[2] = ss * ego.speed;
  if (jac != nullptr) {
    jac->block<2, 2>(0, 0) = ps * rot_t * (d_goal_d_ego - Eigen::Matrix2d::Identity());
    jac->block<2, 1>(0, 2) = ps * d_rot_t * goal_delta;
    (*jac)(2, 3) = ss;
  }

  std::vector<int> order(std::max(agents - 1, 0));
  std::iota(order.begin(), order.end(), 1);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return (state[a].position - ego.position).squaredNorm() < (state[b].position - ego.position).squaredNorm();
  });

  const int used = std::min(cfg.nearest, static_cast<int>(order.size()));
  for (int k = 0; k < used; ++k) {
    const int j = order[k];
    const AgentState& other = state[j];
    const int row = 3 + 5 * k;
    const Vec2 delta = other.position - ego.position;
    const double rel = other.heading - ego.heading;
    f.segment<2>(row) = ps * (rot_t * delta);
    f[row + 2] = std::sin(rel);
    f[row + 3] = std::cos(rel);
    f[row + 4] = ss * other.speed;
    if (jac != nullptr) {
      jac->block<2, 2>(row, 4 * j) = ps * rot_t;
      jac->block<2, 2>(row, 0) = -ps * rot_t;
      jac->block<2, 1>(row, 2) = ps * d_rot_t * delta;
      (*jac)(row + 2, 4 * j + 2) = std::cos(rel);
      (*jac)(row + 2, 2) = -std::cos(rel);
      (*jac)(row + 3, 4 * j + 2) = -std::sin(rel);
      (*jac)(row + 3, 2) = std::sin(rel);
      (*jac)(row + 4, 4 * j + 3) = ss;
    }
  }
  return f;
}

}  // namespace adversim
