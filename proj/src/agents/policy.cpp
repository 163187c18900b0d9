#include "adversim/agents/policy.hpp"

#include "adversim/error.hpp"
#include "../json_util.hpp"

#include <cmath>
#include <random>

namespace adversim {

struct PolicyModel::Views {
  Eigen::Map<const Eigen::MatrixXd> w1, w2, w3;
  Eigen::Map<const Eigen::VectorXd> b1, b2, b3;
};

namespace {

struct Offsets {
  Eigen::Index w1, b1, w2, b2, w3, b3, total;
};

Offsets offsets(int in, int h) {
  Offsets o{};
  o.w1 = 0;
  o.b1 = o.w1 + static_cast<Eigen::Index>(h) * in;
  o.w2 = o.b1 + h;
  o.b2 = o.w2 + static_cast<Eigen::Index>(h) * h;
  o.w3 = o.b2 + h;
  o.b3 = o.w3 + static_cast<Eigen::Index>(PolicyModel::kOutputDim) * h;
  o.total = o.b3 + PolicyModel::kOutputDim;
  return o;
}

}  // namespace

PolicyModel::PolicyModel(int input_dim, int hidden_dim, std::uint64_t seed, double output_scale)
    : input_dim_(input_dim), hidden_dim_(hidden_dim), output_scale_(output_scale) {
  if (input_dim <= 0 || hidden_dim <= 0) throw Error(ErrorCode::kShapeMismatch, "policy dimensions must be positive");
  const Offsets o = offsets(input_dim, hidden_dim);
  params_ = Eigen::VectorXd::Zero(o.total);
  std::mt19937_64 rng(seed);
  auto fill = [&](Eigen::Index start, int rows, int cols) {
    const double a = std::sqrt(6.0 / (rows + cols));
    std::uniform_real_distribution<double> dist(-a, a);
    for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(rows) * cols; ++k) params_[start + k] = dist(rng);
  };
  fill(o.w1, hidden_dim, input_dim);
  fill(o.w2, hidden_dim, hidden_dim);
  fill(o.w3, kOutputDim, hidden_dim);
}

PolicyModel::Views PolicyModel::views() const {
  const Offsets o = offsets(input_dim_, hidden_dim_);
  const double* p = params_.data();
  return Views{Eigen::Map<const Eigen::MatrixXd>(p + o.w1, hidden_dim_, input_dim_),
               Eigen::Map<const Eigen::MatrixXd>(p + o.w2, hidden_dim_, hidden_dim_),
               Eigen::Map<const Eigen::MatrixXd>(p + o.w3, kOutputDim, hidden_dim_),
               Eigen::Map<const Eigen::VectorXd>(p + o.b1, hidden_dim_),
               Eigen::Map<const Eigen::VectorXd>(p + o.b2, hidden_dim_),
               Eigen::Map<const Eigen::VectorXd>(p + o.b3, kOutputDim)};
}

Eigen::VectorXd PolicyModel::forward(const Eigen::VectorXd& x) const {
  if (x.size() != input_dim_) throw Error(ErrorCode::kShapeMismatch, "policy input has the wrong dimension");
  const Views v = views();
  const Eigen::VectorXd h1 = (v.w1 * x + v.b1).array().tanh().matrix();
  const Eigen::VectorXd h2 = (v.w2 * h1 + v.b2).array().tanh().matrix();
  return output_scale_ * (v.w3 * h2 + v.b3);
}

Eigen::MatrixXd PolicyModel::forward_batch(const Eigen::MatrixXd& x) const {
  if (x.rows() != input_dim_) throw Error(ErrorCode::kShapeMismatch, "policy input has the wrong dimension");
  const Views v = views();
  const Eigen::MatrixXd h1 = ((v.w1 * x).colwise() + v.b1).array().tanh().matrix();
  const Eigen::MatrixXd h2 = ((v.w2 * h1).colwise() + v.b2).array().tanh().matrix();
  return output_scale_ * ((v.w3 * h2).colwise() + v.b3);
}

Eigen::MatrixXd PolicyModel::input_jacobian(const Eigen::VectorXd& x) const {
  const Views v = views();
  const Eigen::VectorXd h1 = (v.w1 * x + v.b1).array().tanh().matrix();
  const Eigen::VectorXd h2 = (v.w2 * h1 + v.b2).array().tanh().matrix();
  const Eigen::VectorXd g1 = (1.0 - h1.array().square()).matrix();
  const Eigen::VectorXd g2 = (1.0 - h2.array().square()).matrix();
  return output_scale_ * (v.w3 * g2.asDiagonal() * v.w2 * g1.asDiagonal() * v.w1);
}

double PolicyModel::l1_loss(const Eigen::MatrixXd& x, const Eigen::MatrixXd& targets, Eigen::VectorXd* grad) const {
  if (x.rows() != input_dim_ || targets.rows() != kOutputDim || x.cols() != targets.cols()) {
    throw Error(ErrorCode::kShapeMismatch, "batch shapes do not match the policy");
  }
  const Views v = views();
  const Eigen::MatrixXd h1 = ((v.w1 * x).colwise() + v.b1).array().tanh().matrix();
  const Eigen::MatrixXd h2 = ((v.w2 * h1).colwise() + v.b2).array().tanh().matrix();
  const Eigen::MatrixXd y = output_scale_ * ((v.w3 * h2).colwise() + v.b3);
  const Eigen::MatrixXd residual = y - targets;
  const double count = static_cast<double>(residual.size());
  const double loss = residual.cwiseAbs().sum() / count;
  if (grad == nullptr) return loss;

  const Offsets o = offsets(input_dim_, hidden_dim_);
  grad->setZero(o.total);
  const Eigen::MatrixXd dz3 = output_scale_ * residual.array().sign().matrix() / count;
  Eigen::Map<Eigen::MatrixXd>(grad->data() + o.w3, kOutputDim, hidden_dim_) = dz3 * h2.transpose();
  Eigen::Map<Eigen::VectorXd>(grad->data() + o.b3, kOutputDim) = dz3.rowwise().sum();
  const Eigen::MatrixXd dz2 = ((v.w3.transpose() * dz3).array() * (1.0 - h2.array().square())).matrix();
  Eigen::Map<Eigen::MatrixXd>(grad->data() + o.w2, hidden_dim_, hidden_dim_) = dz2 * h1.transpose();
  Eigen::Map<Eigen::VectorXd>(grad->data() + o.b2, hidden_dim_) = dz2.rowwise().sum();
  const Eigen::MatrixXd dz1 = ((v.w2.transpose() * dz2).array() * (1.0 - h1.array().square())).matrix();
  Eigen::Map<Eigen::MatrixXd>(grad->data() + o.w1, hidden_dim_, input_dim_) = dz1 * x.transpose();
  Eigen::Map<Eigen::VectorXd>(grad->data() + o.b1, hidden_dim_) = dz1.rowwise().sum();
  return loss;
}

namespace {

using json_util::json;

json matrix_rows(const Eigen::Ref<const Eigen::MatrixXd>& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back(m(r, c));
  }
  return out;
}

void read_matrix_rows(const json& j, const std::string& path, Eigen::Ref<Eigen::MatrixXd> m) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != m.size()) {
    json_util::fail(path, "expected " + std::to_string(m.size()) + " numbers");
  }
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      m(r, c) = json_util::number(j[r * m.cols() + c], path);
    }
  }
}

}  // namespace

std::string PolicyModel::to_json() const {
  const Views v = views();
  json layers = json::array();
  layers.push_back({{"rows", hidden_dim_}, {"cols", input_dim_}, {"activation", "tanh"},
                    {"weights", matrix_rows(v.w1)}, {"bias", matrix_rows(v.b1)}});
  layers.push_back({{"rows", hidden_dim_}, {"cols", hidden_dim_}, {"activation", "tanh"},
                    {"weights", matrix_rows(v.w2)}, {"bias", matrix_rows(v.b2)}});
  layers.push_back({{"rows", kOutputDim}, {"cols", hidden_dim_}, {"activation", "linear"},
                    {"weights", matrix_rows(v.w3)}, {"bias", matrix_rows(v.b3)}});
  json j;
  j["version"] = 1;
  j["input_dim"] = input_dim_;
  j["hidden_dim"] = hidden_dim_;
  j["output_scale"] = output_scale_;
  j["layers"] = std::move(layers);
  return j.dump();
}

PolicyModel PolicyModel::from_json(const std::string& bytes) {
  const json j = json_util::parse(bytes);
  json_util::Reader r(j, "");
  PolicyModel m;
  m.input_dim_ = r.get<int>("input_dim");
  m.hidden_dim_ = r.get<int>("hidden_dim");
  m.output_scale_ = r.get<double>("output_scale");
  if (m.input_dim_ <= 0 || m.hidden_dim_ <= 0) json_util::fail("/input_dim", "dimensions must be positive");
  const Offsets o = offsets(m.input_dim_, m.hidden_dim_);
  m.params_ = Eigen::VectorXd::Zero(o.total);
  const json& layers = r.array("layers");
  if (layers.size() != 3) json_util::fail("/layers", "expected 3 layers");
  const std::array<std::pair<int, int>, 3> shapes{{{m.hidden_dim_, m.input_dim_},
                                                   {m.hidden_dim_, m.hidden_dim_},
                                                   {kOutputDim, m.hidden_dim_}}};
  const std::array<Eigen::Index, 3> w_off{o.w1, o.w2, o.w3};
  const std::array<Eigen::Index, 3> b_off{o.b1, o.b2, o.b3};
  for (int l = 0; l < 3; ++l) {
    const std::string path = "/layers/" + std::to_string(l);
    json_util::Reader lr(layers[l], path);
    const auto [rows, cols] = shapes[l];
    if (lr.get<int>("rows") != rows || lr.get<int>("cols") != cols) json_util::fail(path, "layer shape mismatch");
    Eigen::Map<Eigen::MatrixXd> w(m.params_.data() + w_off[l], rows, cols);
    Eigen::Map<Eigen::MatrixXd> b(m.params_.data() + b_off[l], rows, 1);
    read_matrix_rows(lr.at("weights"), path + "/weights", w);
    read_matrix_rows(lr.at("bias"), path + "/bias", b);
  }
  return m;
}

bool PolicyModel::operator==(const PolicyModel& other) const {
  return input_dim_ == other.input_dim_ && hidden_dim_ == other.hidden_dim_ &&
         output_scale_ == other.output_scale_ && params_ == other.params_;
}

GoalPoint route_goal(const RoutePath& path, const RoutePath::Projection& proj, double lookahead) {
  GoalPoint g;
  const double s = proj.s + lookahead;
  g.point = path.point_at(s);
  if (s < path.length()) g.d_point_d_ego = path.tangent_at(s) * proj.ds_dp.transpose();
  return g;
}

PolicyEgo::PolicyEgo(std::shared_ptr<const PolicyModel> model, FeatureConfig features, ControllerGains gains)
    : model_(std::move(model)), features_(features), gains_(gains) {
  if (!model_) throw Error(ErrorCode::kInvalidArgument, "policy ego needs a model");
  if (model_->input_dim() != features_.dimension()) {
    throw Error(ErrorCode::kShapeMismatch, "policy input dimension does not match the feature layout");
  }
}

void PolicyEgo::reset(const EgoContext& ctx) {
  tracker_ = RouteTracker(ctx.spec->ego_route, ctx.spec->initial_state.front().position);
  gains_.dt = ctx.spec->dt;
}

Action PolicyEgo::act(const TrafficState& state, int) {
  const auto proj = tracker_.update(state.front().position);
  const GoalPoint goal = route_goal(tracker_.path(), proj, features_.goal_lookahead);
  const FeatureVector f = extract_features(state, goal.point, features_);
  const Waypoints w = unflatten_waypoints(model_->forward(f));
  return controllers(w, state.front(), gains_);
}

Action PolicyEgo::act_with_jacobian(const TrafficState& state, int, Eigen::MatrixXd& jac) {
  const auto proj = tracker_.update(state.front().position);
  const GoalPoint goal = route_goal(tracker_.path(), proj, features_.goal_lookahead);
  Eigen::MatrixXd d_feat;
  const FeatureVector f = extract_features(state, goal.point, features_, &d_feat, goal.d_point_d_ego);
  const Eigen::VectorXd out = model_->forward(f);
  const Waypoints w = unflatten_waypoints(out);
  ControllerJacobian cj;
  const Action a = controllers_with_jacobian(w, state.front(), gains_, cj);
  jac = cj.d_waypoints * (model_->input_jacobian(f) * d_feat);
  jac.col(3) += cj.d_speed;
  return a;
}

}  // namespace adversim
