#include "dgmorl/lock.hpp"

#include "dgmorl/error.hpp"
#include "dgmorl/text.hpp"

namespace dgmorl {

LockEnv::LockEnv(LockSpec spec) : Env({3, 2, spec.horizon, spec.gamma}), lock_(spec) {
    if (spec.horizon < 2) fail(Errc::invalid_horizon, "lock horizon must be at least 2");
    auto in_range = [](int a) { return a >= 0 && a < 3; };
    if (!in_range(spec.action_o1) || !in_range(spec.action_o2) || !in_range(spec.action_bal) ||
        spec.action_o1 == spec.action_o2 || spec.action_o1 == spec.action_bal ||
        spec.action_o2 == spec.action_bal)
        fail(Errc::invalid_argument, "lock needs three distinct action roles in [0,3)");
    id_ = "lock[h=" + std::to_string(spec.horizon) + ",g=" + format_double(spec.gamma) +
          ",a=" + std::to_string(spec.action_o1) + std::to_string(spec.action_o2) +
          std::to_string(spec.action_bal) + "]";
}

std::string LockEnv::id() const { return id_; }

StateId LockEnv::initial_state() { return kStart; }

Env::Outcome LockEnv::transition(StateId state, int action) {
    const int depth = static_cast<int>(state / 5);
    const int kind = static_cast<int>(state % 5);
    const int next_depth = depth + 1;
    const bool last = next_depth == lock_.horizon;

    int next_kind = kDead;
    if (kind == kStart) {
        if (action == lock_.action_o1)
            next_kind = kOnO1;
        else if (action == lock_.action_o2)
            next_kind = kOnO2;
    } else if (kind == kOnO1) {
        if (action == lock_.action_o1)
            next_kind = kOnO1;
        else if (action == lock_.action_bal && depth == lock_.horizon - 1)
            next_kind = kBalanced;
    } else if (kind == kOnO2) {
        if (action == lock_.action_o2) next_kind = kOnO2;
    }

    Outcome o;
    o.next = static_cast<StateId>(next_depth) * 5 + next_kind;
    o.terminal = last;
    double r0 = 0.0, r1 = 0.0;
    if (last) {
        if (next_kind == kOnO1) r0 = 1.0;
        else if (next_kind == kOnO2) r1 = 1.0;
        else if (next_kind == kBalanced) r0 = r1 = 0.5;
    }
    o.reward = ValueVector({r0, r1});
    return o;
}

} // namespace dgmorl
