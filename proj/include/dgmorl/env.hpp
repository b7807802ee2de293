#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "dgmorl/types.hpp"

namespace dgmorl {

using StateId = std::int64_t;

struct MomdpSpec {
    int action_count = 0;
    int objective_count = 0;
    int horizon = 0;
    double gamma = 0.0;
};

struct Transition {
    StateId state = 0;
    int action = 0;
    StateId next_state = 0;
    ValueVector reward;
    bool terminal = false;
    int step_index = 0;
};

using Trajectory = std::vector<Transition>;

/// Deterministic episodic MOMDP. The base class owns the step counter and
/// horizon termination; concrete environments provide the transition function.
class Env {
public:
    virtual ~Env() = default;

    const MomdpSpec& spec() const { return spec_; }
    virtual std::string id() const = 0;

    StateId reset();
    Transition step(int action);

    StateId state() const { return state_; }
    bool done() const { return done_; }

protected:
    explicit Env(MomdpSpec spec);

    struct Outcome {
        StateId next = 0;
        ValueVector reward;
        bool terminal = false;
    };
    virtual StateId initial_state() = 0;
    virtual Outcome transition(StateId state, int action) = 0;

private:
    MomdpSpec spec_;
    StateId state_ = 0;
    int step_index_ = 0;
    bool done_ = true;
};

/// Runs one greedy episode under `policy` and folds the exact discounted
/// return sum_t gamma^t r_t.
std::pair<Trajectory, ValueVector> rollout(Env& env, const std::function<int(StateId)>& policy);

/// Replays a fixed action sequence; the episode may terminate early.
std::pair<Trajectory, ValueVector> replay_actions(Env& env, const std::vector<int>& actions);

/// Discounted fold of a trajectory's rewards.
ValueVector discounted_return(const Trajectory& traj, double gamma, std::size_t dim);

} // namespace dgmorl
