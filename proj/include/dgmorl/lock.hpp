#pragma once

#include <string>

#include "dgmorl/env.hpp"

namespace dgmorl {

/// Multi-objective combination lock. Exactly three action sequences of length
/// H are rewarded, all only on the final transition:
///   - action_o1 repeated H times            -> [1, 0]
///   - action_o2 repeated H times            -> [0, 1]
///   - action_o1 (H-1 times) then action_bal -> [0.5, 0.5]
/// Any other action derails into an absorbing zero-reward chain. The default
/// role assignment keeps the all-zero action sequence off-path, so a
/// zero-initialized greedy policy earns the zero vector.
struct LockSpec {
    int horizon = 8;
    double gamma = 0.99;
    int action_o1 = 1;
    int action_o2 = 2;
    int action_bal = 0;
};

class LockEnv : public Env {
public:
    explicit LockEnv(LockSpec spec);

    std::string id() const override;
    const LockSpec& lock_spec() const { return lock_; }

    // State kinds, encoded as state = depth * 5 + kind.
    static constexpr int kStart = 0;
    static constexpr int kOnO1 = 1;
    static constexpr int kOnO2 = 2;
    static constexpr int kDead = 3;
    static constexpr int kBalanced = 4;

protected:
    StateId initial_state() override;
    Outcome transition(StateId state, int action) override;

private:
    LockSpec lock_;
    std::string id_;
};

} // namespace dgmorl
