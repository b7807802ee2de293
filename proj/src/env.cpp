#include "dgmorl/env.hpp"

#include "dgmorl/error.hpp"

namespace dgmorl {

Env::Env(MomdpSpec spec) : spec_(spec) {
    if (spec_.action_count < 2) fail(Errc::invalid_argument, "environment needs at least 2 actions");
    if (spec_.objective_count < 2) fail(Errc::dimension_too_small, "environment needs at least 2 objectives");
    if (spec_.horizon < 1) fail(Errc::invalid_horizon, "horizon must be at least 1");
    if (!(spec_.gamma >= 0.0) || spec_.gamma >= 1.0) fail(Errc::invalid_gamma, "gamma must lie in [0,1)");
}

StateId Env::reset() {
    state_ = initial_state();
    step_index_ = 0;
    done_ = false;
    return state_;
}

Transition Env::step(int action) {
    if (done_) fail(Errc::episode_finished, "step after episode end");
    if (action < 0 || action >= spec_.action_count)
        fail(Errc::invalid_action, "action " + std::to_string(action) + " out of range");

    Outcome o = transition(state_, action);
    Transition t;
    t.state = state_;
    t.action = action;
    t.next_state = o.next;
    t.reward = std::move(o.reward);
    t.step_index = step_index_;
    t.terminal = o.terminal || step_index_ + 1 >= spec_.horizon;

    state_ = t.next_state;
    ++step_index_;
    done_ = t.terminal;
    return t;
}

std::pair<Trajectory, ValueVector> rollout(Env& env, const std::function<int(StateId)>& policy) {
    Trajectory traj;
    StateId s = env.reset();
    std::vector<double> acc(static_cast<std::size_t>(env.spec().objective_count), 0.0);
    double g = 1.0;
    while (!env.done()) {
        Transition t = env.step(policy(s));
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += g * t.reward[i];
        g *= env.spec().gamma;
        s = t.next_state;
        traj.push_back(std::move(t));
    }
    return {std::move(traj), ValueVector(std::move(acc))};
}

std::pair<Trajectory, ValueVector> replay_actions(Env& env, const std::vector<int>& actions) {
    std::size_t k = 0;
    return rollout(env, [&](StateId) {
        if (k >= actions.size()) fail(Errc::invalid_argument, "action sequence ended before the episode");
        return actions[k++];
    });
}

ValueVector discounted_return(const Trajectory& traj, double gamma, std::size_t dim) {
    std::vector<double> acc(dim, 0.0);
    double g = 1.0;
    for (const auto& t : traj) {
        for (std::size_t i = 0; i < dim; ++i) acc[i] += g * t.reward[i];
        g *= gamma;
    }
    return ValueVector(std::move(acc));
}

} // namespace dgmorl
