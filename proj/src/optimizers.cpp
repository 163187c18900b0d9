#include "adversim/optimizers.hpp"

#include "adversim/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>

namespace adversim {

const char* to_string(AttackMethod m) {
  switch (m) {
    case AttackMethod::kKingDirect: return "king_direct";
    case AttackMethod::kKingFull: return "king_full";
    case AttackMethod::kRandomSearch: return "random_search";
    case AttackMethod::kSimba: return "simba";
    case AttackMethod::kCmaEs: return "cma_es";
  }
  return "unknown";
}

AttackMethod attack_method_from_string(const std::string& s) {
  for (auto m : {AttackMethod::kKingDirect, AttackMethod::kKingFull, AttackMethod::kRandomSearch, AttackMethod::kSimba,
                 AttackMethod::kCmaEs}) {
    if (s == to_string(m)) return m;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown attack method '" + s + "'");
}

void validate(const AttackConfig& cfg) {
  if (cfg.wall_clock_budget < 0 || cfg.max_iterations < 0) {
    throw Error(ErrorCode::kInvalidArgument, "attack budget must be non-negative");
  }
  switch (cfg.method) {
    case AttackMethod::kKingDirect:
    case AttackMethod::kKingFull:
      if (!(cfg.learning_rate > 0)) throw Error(ErrorCode::kInvalidArgument, "learning_rate must be positive");
      break;
    case AttackMethod::kRandomSearch:
      if (!(cfg.perturbation_scale > 0)) throw Error(ErrorCode::kInvalidArgument, "perturbation_scale must be positive");
      break;
    case AttackMethod::kSimba:
      if (!(cfg.simba_epsilon > 0)) throw Error(ErrorCode::kInvalidArgument, "simba_epsilon must be positive");
      break;
    case AttackMethod::kCmaEs:
      if (cfg.population < 0 || cfg.population == 1) throw Error(ErrorCode::kInvalidArgument, "population must be 0 or >= 2");
      if (!(cfg.cma_sigma > 0)) throw Error(ErrorCode::kInvalidArgument, "cma_sigma must be positive");
      break;
  }
}

RolloutResult replay(const ScenarioSpec& spec, const ActionPlan& plan, const MapModel& map, const EgoAgent& ego,
                     const SimConfig& sim) {
  auto agent = ego.clone();
  return rollout(with_plan(spec, plan), map, *agent, TapeMode::kNoRecord, sim);
}

namespace {

using Clock = std::chrono::steady_clock;

/// Shared bookkeeping: budget, best iterate, success detection.
class Search {
 public:
  Search(const ScenarioSpec& spec, const MapModel& map, const EgoAgent& ego, const AttackConfig& cfg)
      : spec_(spec), map_(map), ego_(ego.clone()), cfg_(cfg), start_(Clock::now()) {
    out_.best_plan = spec.initial_plan;
    out_.best_cost = std::numeric_limits<double>::infinity();
  }

  bool exhausted() const {
    return out_.success || out_.iterations >= cfg_.max_iterations || elapsed() >= cfg_.wall_clock_budget;
  }

  double elapsed() const { return std::chrono::duration<double>(Clock::now() - start_).count(); }

  /// Evaluates `raw` as one iteration; returns the rollout.
  RolloutResult evaluate(const std::vector<double>& raw, TapeMode mode) {
    ScenarioSpec s = spec_;
    s.initial_plan.raw() = raw;
    RolloutResult r = rollout(s, map_, *ego_, mode, cfg_.sim);
    ++out_.iterations;
    out_.cost_trace.push_back(r.cost.total);
    const bool hit = r.verdict.kind == VerdictKind::kEgoCollision;
    if (hit || r.cost.total < out_.best_cost || !cfg_.best_iterate) {
      out_.best_cost = r.cost.total;
      out_.best_plan = s.initial_plan;
      out_.verdict = r.verdict;
    }
    if (hit) {
      out_.success = true;
      out_.time_to_success = elapsed();
    }
    return r;
  }

  AttackOutcome finish() {
    out_.wall_time = elapsed();
    if (out_.iterations == 0) out_.best_cost = 0.0;
    if (out_.success) {
      const auto check = replay(spec_, out_.best_plan, map_, *ego_, cfg_.sim);
      if (check.verdict != out_.verdict) out_.success = false;
    }
    if (!out_.success) out_.time_to_success.reset();
    return std::move(out_);
  }

  AttackOutcome& outcome() { return out_; }

 private:
  const ScenarioSpec& spec_;
  const MapModel& map_;
  std::unique_ptr<EgoAgent> ego_;
  const AttackConfig& cfg_;
  Clock::time_point start_;
  AttackOutcome out_;
};

void run_king(Search& search, const ScenarioSpec& spec, const AttackConfig& cfg, bool full) {
  std::vector<double> raw = spec.initial_plan.raw();
  const std::size_t n = raw.size();
  std::vector<double> m(n, 0.0), v(n, 0.0);
  int step = 0;
  while (!search.exhausted()) {
    const RolloutResult r = search.evaluate(raw, full ? TapeMode::kRecordFull : TapeMode::kRecord);
    if (search.outcome().success) break;
    const PlanGradient g = full ? backward_full(r) : backward_direct(r);
    ++step;
    const double c1 = 1 - std::pow(cfg.beta1, step);
    const double c2 = 1 - std::pow(cfg.beta2, step);
    for (std::size_t k = 0; k < n; ++k) {
      const double gk = g.d_cost_d_raw[k];
      m[k] = cfg.beta1 * m[k] + (1 - cfg.beta1) * gk;
      v[k] = cfg.beta2 * v[k] + (1 - cfg.beta2) * gk * gk;
      raw[k] -= cfg.learning_rate * (m[k] / c1) / (std::sqrt(v[k] / c2) + cfg.adam_epsilon);
    }
  }
}

void run_random_search(Search& search, const ScenarioSpec& spec, const AttackConfig& cfg, std::mt19937_64& rng) {
  const std::vector<double>& base = spec.initial_plan.raw();
  std::normal_distribution<double> gauss(0.0, cfg.perturbation_scale);
  bool first = true;
  while (!search.exhausted()) {
    std::vector<double> raw = base;
    if (!first) {
      for (auto& x : raw) x += gauss(rng);
    }
    first = false;
    search.evaluate(raw, TapeMode::kNoRecord);
  }
}

void run_simba(Search& search, const ScenarioSpec& spec, const AttackConfig& cfg, std::mt19937_64& rng) {
  std::vector<double> raw = spec.initial_plan.raw();
  if (search.exhausted()) return;
  double current = search.evaluate(raw, TapeMode::kNoRecord).cost.total;
  std::vector<std::size_t> order(raw.size());
  std::size_t cursor = order.size();
  while (!search.exhausted() && !raw.empty()) {
    if (cursor == order.size()) {
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::shuffle(order.begin(), order.end(), rng);
      cursor = 0;
    }
    const std::size_t k = order[cursor++];
    for (double sign : {1.0, -1.0}) {
      if (search.exhausted()) break;
      std::vector<double> trial = raw;
      trial[k] += sign * cfg.simba_epsilon;
      const double c = search.evaluate(trial, TapeMode::kNoRecord).cost.total;
      if (c < current) {
        current = c;
        raw = std::move(trial);
        break;
      }
    }
  }
}

void run_cma_es(Search& search, const ScenarioSpec& spec, const AttackConfig& cfg, std::mt19937_64& rng) {
  const int n = static_cast<int>(spec.initial_plan.size());
  if (search.exhausted()) return;
  search.evaluate(spec.initial_plan.raw(), TapeMode::kNoRecord);
  if (n == 0) return;

  const int lambda = cfg.population > 0 ? cfg.population : 4 + static_cast<int>(std::floor(3.0 * std::log(n)));
  const int mu = lambda / 2;
  Eigen::VectorXd weights(mu);
  for (int i = 0; i < mu; ++i) weights[i] = std::log(mu + 0.5) - std::log(i + 1.0);
  weights /= weights.sum();
  const double mu_eff = 1.0 / weights.squaredNorm();
  const double cs = (mu_eff + 2) / (n + mu_eff + 5);
  const double ds = 1 + 2 * std::max(0.0, std::sqrt((mu_eff - 1) / (n + 1)) - 1) + cs;
  const double cc = (4 + mu_eff / n) / (n + 4 + 2 * mu_eff / n);
  const double c1 = 2 / ((n + 1.3) * (n + 1.3) + mu_eff);
  const double cmu = std::min(1 - c1, 2 * (mu_eff - 2 + 1 / mu_eff) / ((n + 2) * (n + 2) + mu_eff));
  const double chi_n = std::sqrt(static_cast<double>(n)) * (1 - 1.0 / (4 * n) + 1.0 / (21.0 * n * n));

  Eigen::VectorXd mean = Eigen::Map<const Eigen::VectorXd>(spec.initial_plan.raw().data(), n);
  double sigma = cfg.cma_sigma;
  Eigen::MatrixXd C = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd B = Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd D = Eigen::VectorXd::Ones(n);
  Eigen::VectorXd ps = Eigen::VectorXd::Zero(n), pc = Eigen::VectorXd::Zero(n);
  std::normal_distribution<double> gauss(0.0, 1.0);
  long evaluations = 0;
  long eigen_at = 0;
  const double eigen_gap = lambda / ((c1 + cmu) * n * 10.0);

  std::vector<double> raw(n);
  while (!search.exhausted()) {
    std::vector<Eigen::VectorXd> ys;
    std::vector<double> costs;
    for (int k = 0; k < lambda && !search.exhausted(); ++k) {
      Eigen::VectorXd z(n);
      for (int d = 0; d < n; ++d) z[d] = gauss(rng);
      Eigen::VectorXd y = B * D.cwiseProduct(z);
      Eigen::Map<Eigen::VectorXd>(raw.data(), n) = mean + sigma * y;
      costs.push_back(search.evaluate(raw, TapeMode::kNoRecord).cost.total);
      ys.push_back(std::move(y));
      ++evaluations;
    }
    if (static_cast<int>(ys.size()) < lambda) break;
    ++search.outcome().generations;

    std::vector<int> rank(lambda);
    std::iota(rank.begin(), rank.end(), 0);
    std::stable_sort(rank.begin(), rank.end(), [&](int a, int b) { return costs[a] < costs[b]; });
    Eigen::VectorXd y_w = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < mu; ++i) y_w += weights[i] * ys[rank[i]];
    mean += sigma * y_w;

    // C^{-1/2} y_w = B D^{-1} B^T y_w
    const Eigen::VectorXd inv_sqrt_y = B * (B.transpose() * y_w).cwiseQuotient(D);
    ps = (1 - cs) * ps + std::sqrt(cs * (2 - cs) * mu_eff) * inv_sqrt_y;
    const double gen = static_cast<double>(search.outcome().generations);
    const bool hsig = ps.norm() / std::sqrt(1 - std::pow(1 - cs, 2 * gen)) < (1.4 + 2 / (n + 1.0)) * chi_n;
    pc = (1 - cc) * pc + (hsig ? std::sqrt(cc * (2 - cc) * mu_eff) : 0.0) * y_w;
    Eigen::MatrixXd rank_mu = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < mu; ++i) rank_mu.noalias() += weights[i] * ys[rank[i]] * ys[rank[i]].transpose();
    const double delta = hsig ? 0.0 : cc * (2 - cc);
    C = (1 - c1 - cmu) * C + c1 * (pc * pc.transpose() + delta * C) + cmu * rank_mu;
    sigma *= std::exp((cs / ds) * (ps.norm() / chi_n - 1));

    if (evaluations - eigen_at > eigen_gap) {
      eigen_at = evaluations;
      C = 0.5 * (C + C.transpose()).eval();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C);
      B = es.eigenvectors();
      D = es.eigenvalues().cwiseMax(1e-20).cwiseSqrt();
    }
  }
}

}  // namespace

AttackOutcome attack(const ScenarioSpec& spec, const MapModel& map, const EgoAgent& ego, const AttackConfig& cfg) {
  validate(cfg);
  validate(spec);
  if (cfg.method == AttackMethod::kKingFull && !ego.differentiable()) {
    throw Error(ErrorCode::kMethodIncompatible, "king_full needs a differentiable ego, got '" + ego.name() + "'");
  }
  Search search(spec, map, ego, cfg);
  std::mt19937_64 rng(cfg.seed);
  switch (cfg.method) {
    case AttackMethod::kKingDirect: run_king(search, spec, cfg, false); break;
    case AttackMethod::kKingFull: run_king(search, spec, cfg, true); break;
    case AttackMethod::kRandomSearch: run_random_search(search, spec, cfg, rng); break;
    case AttackMethod::kSimba: run_simba(search, spec, cfg, rng); break;
    case AttackMethod::kCmaEs: run_cma_es(search, spec, cfg, rng); break;
  }
  return search.finish();
}

}  // namespace adversim
