#include "adversim/ego_agent.hpp"

#include "adversim/error.hpp"

namespace adversim {

Action EgoAgent::act_with_jacobian(const TrafficState&, int, Eigen::MatrixXd&) {
  throw Error(ErrorCode::kNotDifferentiableEgo, name() + " ego has no Jacobian interface");
}

Action ReplayEgo::act(const TrafficState&, int t) {
  return t >= 0 && t < static_cast<int>(actions_.size()) ? actions_[t] : Action{};
}

Action ReplayEgo::act_with_jacobian(const TrafficState& state, int t, Eigen::MatrixXd& jac) {
  jac.setZero(2, 4 * static_cast<Eigen::Index>(state.size()));
  return act(state, t);
}

}  // namespace adversim
