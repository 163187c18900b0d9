#include "adversim/costs.hpp"
#include "adversim/error.hpp"

#include "../support/fixtures.hpp"
#include "../support/oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace adversim;

namespace {

AgentState at(double x, double y, double heading = 0.0) {
  AgentState s;
  s.position = {x, y};
  s.heading = normalize_heading(heading);
  s.speed = 5.0;
  return s;
}

double oracle_box_distance(const AgentState& a, const AgentState& b) {
  const auto qa = oracle::box_corners(a.position, a.heading, a.half_length, a.half_width);
  const auto qb = oracle::box_corners(b.position, b.heading, b.half_length, b.half_width);
  if (oracle::quads_intersect(qa, qb)) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      best = std::min(best, oracle::seg_dist(qa[i], qb[j], qb[(j + 1) % 4]));
      best = std::min(best, oracle::seg_dist(qb[i], qa[j], qa[(j + 1) % 4]));
    }
  }
  return best;
}

// Agents drift along separated lanes with random jitter; no pair ever touches.
std::vector<TrafficState> random_sequence(std::mt19937_64& rng, int agents, int steps, double lane_gap) {
  std::uniform_real_distribution<double> j(-0.4, 0.4);
  std::uniform_real_distribution<double> hd(-0.15, 0.15);
  std::vector<TrafficState> seq(steps + 1);
  for (int t = 0; t <= steps; ++t) {
    for (int i = 0; i < agents; ++i) {
      seq[t].push_back(at(1.5 * t + 3.0 * i + j(rng), lane_gap * i - 8.0 + j(rng), hd(rng)));
    }
  }
  return seq;
}

using StateFn = std::function<double(const std::vector<TrafficState>&)>;

// Central differences of f wrt x, y, heading of every agent at every step,
// compared against the analytic blocks.
double worst_state_gradient_error(const std::vector<TrafficState>& seq, const StateGradient& grad, const StateFn& f,
                                  int first_agent, double h = 1e-6) {
  std::vector<double> got, ref;
  for (std::size_t t = 0; t < seq.size(); ++t) {
    for (int i = first_agent; i < static_cast<int>(seq[t].size()); ++i) {
      for (int c = 0; c < 3; ++c) {
        auto eval = [&](double x) {
          auto s = seq;
          AgentState& a = s[t][i];
          if (c < 2) a.position[c] = x;
          else a.heading = x;
          return f(s);
        };
        const AgentState& a = seq[t][i];
        const double x0 = c < 2 ? a.position[c] : a.heading;
        got.push_back(grad.at(static_cast<int>(t), i)[c]);
        ref.push_back(oracle::central_difference(eval, x0, h));
      }
    }
  }
  return oracle::max_relative_error(got, ref);
}

}  // namespace

TEST(PhiEgo, ConstantDistance) {
  std::vector<TrafficState> seq;
  for (int t = 0; t <= 10; ++t) seq.push_back({at(2.0 * t, 0), at(2.0 * t, 2.0 + 5.0)});
  const CostTerm c = phi_ego(seq, 10);
  EXPECT_NEAR(c.value, 5.0, 1e-12);
}

TEST(PhiEgo, MinSelectionAndZeroGradientToOther) {
  std::vector<TrafficState> seq;
  for (int t = 0; t <= 6; ++t) {
    seq.push_back({at(2.0 * t, 0), at(2.0 * t, 2.0 + 3.0), at(2.0 * t, -2.0 - 7.0)});
  }
  const CostTerm c = phi_ego(seq, 6);
  EXPECT_NEAR(c.value, 3.0, 1e-12);
  for (int t = 0; t <= 6; ++t) {
    EXPECT_EQ(c.grad.at(t, 2), Eigen::Vector4d::Zero());
    EXPECT_NE(c.grad.at(t, 1), Eigen::Vector4d::Zero());
  }
}

TEST(PhiEgo, NoAdversariesThrows) {
  std::vector<TrafficState> seq{{at(0, 0)}};
  try {
    phi_ego(seq, 0);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoAdversaries);
  }
}

TEST(PhiEgo, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const auto seq = random_sequence(rng, 3, 10, 4.5);
    const CostTerm c = phi_ego(seq, 10);
    EXPECT_GE(c.value, 0.0);
    const double err = worst_state_gradient_error(
        seq, c.grad, [](const std::vector<TrafficState>& s) { return phi_ego(s, 10).value; }, 1);
    EXPECT_LT(err, 1e-5) << trial;
  }
}

TEST(PhiEgo, MonotoneInDistance) {
  std::mt19937_64 rng(32);
  auto seq = random_sequence(rng, 2, 10, 5.0);
  const double before = phi_ego(seq, 10).value;
  for (auto& s : seq) s[1].position.y() -= 0.5;
  EXPECT_LE(phi_ego(seq, 10).value, before);
}

TEST(PhiAdvCol, InactiveThreshold) {
  std::vector<TrafficState> seq;
  for (int t = 0; t <= 5; ++t) seq.push_back({at(0, 0), at(t, 10), at(t, 20), at(t, 30)});
  const CostTerm c = phi_adv_col(seq, 2.0);
  EXPECT_EQ(c.value, -2.0);
  for (int t = 0; t <= 5; ++t) {
    for (int i = 0; i < 4; ++i) EXPECT_EQ(c.grad.at(t, i), Eigen::Vector4d::Zero());
  }
  std::vector<TrafficState> single{{at(0, 0), at(0, 3)}};
  EXPECT_EQ(phi_adv_col(single, 2.0).value, -2.0);
}

TEST(PhiAdvCol, ActiveAtHalfMetre) {
  std::vector<TrafficState> seq;
  for (int t = 0; t <= 5; ++t) seq.push_back({at(-30, 0), at(t, 0), at(t, 2.0 + 0.5 + (t == 3 ? 0.0 : 1.0))});
  const CostTerm c = phi_adv_col(seq, 2.0);
  EXPECT_NEAR(c.value, -0.5, 1e-12);
  for (int t = 0; t <= 5; ++t) {
    EXPECT_EQ(c.grad.at(t, 0), Eigen::Vector4d::Zero());
    if (t != 3) EXPECT_EQ(c.grad.at(t, 1), Eigen::Vector4d::Zero());
  }
  EXPECT_NE(c.grad.at(3, 1), Eigen::Vector4d::Zero());
}

TEST(PhiAdvCol, MatchesBruteForce) {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> pos(-6.0, 6.0);
  std::uniform_real_distribution<double> ang(0.0, kTwoPi);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<TrafficState> seq(8);
    for (auto& s : seq) {
      for (int i = 0; i < 4; ++i) s.push_back(at(pos(rng), pos(rng), ang(rng)));
    }
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s : seq) {
      for (int i = 1; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j) best = std::min(best, oracle_box_distance(s[i], s[j]));
      }
    }
    const double v = phi_adv_col(seq, 2.0).value;
    EXPECT_NEAR(v, -std::min(best, 2.0), 1e-9);
    EXPECT_GE(v, -2.0);
    EXPECT_LE(v, 0.0);
  }
}

TEST(PhiAdvCol, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(34);
  int active = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto seq = random_sequence(rng, 4, 10, 3.4);
    const CostTerm c = phi_adv_col(seq, 2.0);
    active += c.value > -2.0;
    const double err = worst_state_gradient_error(
        seq, c.grad, [](const std::vector<TrafficState>& s) { return phi_adv_col(s, 2.0).value; }, 1);
    EXPECT_LT(err, 1e-5) << trial;
  }
  EXPECT_GT(active, 10);
}

TEST(PhiDev, InteriorAndPlateau) {
  const MapModel map = fixture::straight_road(16.0);
  const double sigma = 1.5;
  std::vector<TrafficState> inner(81, TrafficState{at(0, 0), at(10, 0), at(-10, 3)});
  EXPECT_LT(phi_dev(inner, map, sigma).value, 2 * 81 * std::exp(-12.5));

  std::vector<TrafficState> off(81, TrafficState{at(0, 0), at(10, 25)});
  // Index 0 is the initial state; the 80 post-action steps are 1..80.
  std::vector<TrafficState> steps(off.begin() + 1, off.end());
  EXPECT_DOUBLE_EQ(phi_dev(steps, map, sigma).value, 80.0);
}

TEST(PhiDev, EqualsPerPointSum) {
  const MapModel map = fixture::straight_road(16.0);
  std::mt19937_64 rng(35);
  std::uniform_real_distribution<double> y(8.0, 22.0);
  std::uniform_real_distribution<double> x(-40.0, 40.0);
  std::vector<TrafficState> seq(12);
  for (auto& s : seq) {
    for (int i = 0; i < 4; ++i) s.push_back(at(x(rng), (i % 2 ? -1 : 1) * y(rng)));
  }
  double sum = 0.0;
  for (const auto& s : seq) {
    for (int i = 1; i < 4; ++i) sum += offroad_field(map, s[i].position, 1.5).value;
  }
  const CostTerm c = phi_dev(seq, map, 1.5);
  EXPECT_NEAR(c.value, sum, 1e-12);
  EXPECT_GE(c.value, 0.0);
  EXPECT_LE(c.value, 3.0 * 12.0);
  for (int t = 0; t < 12; ++t) EXPECT_EQ(c.grad.at(t, 0), Eigen::Vector4d::Zero());
}

TEST(TotalCost, Arithmetic) {
  const MapModel map = fixture::straight_road(16.0);
  std::vector<TrafficState> seq;
  for (int t = 0; t <= 4; ++t) seq.push_back({at(2.0 * t, -3.5), at(2.0 * t, 3.5), at(2.0 * t - 40, 0)});
  const CostBreakdown b = total_cost(seq, 4, map, CostWeights{});
  EXPECT_NEAR(b.ego_term, 5.0, 1e-12);
  EXPECT_EQ(b.adv_col_term, -2.0);
  EXPECT_LT(b.dev_term, 1e-6);
  EXPECT_EQ(b.total, b.ego_term + 1.0 * b.adv_col_term + 1.0 * b.dev_term);

  CostWeights none;
  none.lambda = 0.0;
  none.gamma = 0.0;
  const CostBreakdown e = total_cost(seq, 4, map, none);
  EXPECT_EQ(e.total, phi_ego(seq, 4).value);
}

TEST(TotalCost, GradientMatchesFiniteDifferences) {
  const MapModel map = fixture::straight_road(12.0);
  std::mt19937_64 rng(36);
  CostWeights w;
  w.lambda = 0.7;
  w.gamma = 1.3;
  for (int trial = 0; trial < 10; ++trial) {
    const auto seq = random_sequence(rng, 4, 10, 3.4);
    const CostBreakdown b = total_cost(seq, 10, map, w);
    EXPECT_EQ(b.total, b.ego_term + w.lambda * b.adv_col_term + w.gamma * b.dev_term);
    const double err = worst_state_gradient_error(
        seq, b.d_cost_d_state, [&](const std::vector<TrafficState>& s) { return total_cost(s, 10, map, w).total; },
        1);
    EXPECT_LT(err, 1e-5) << trial;
  }
}

TEST(CostWeights, Validate) {
  CostWeights w;
  EXPECT_NO_THROW(validate(w));
  w.tau = 0.0;
  EXPECT_ANY_THROW(validate(w));
  w = CostWeights{};
  w.lambda = -1.0;
  EXPECT_ANY_THROW(validate(w));
}
