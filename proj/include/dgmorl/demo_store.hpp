#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dgmorl/env.hpp"
#include "dgmorl/mo_core.hpp"

namespace dgmorl {

enum class DemoOrigin { prior, self_evolved };

/// One demonstrated action sequence with its exact discounted value. The id
/// is a content digest of (env_id, actions), stable across runs.
struct Demonstration {
    std::string env_id;
    std::vector<int> actions;
    ValueVector value;
    DemoOrigin origin = DemoOrigin::prior;
    int created_round = 0;
    std::uint64_t id = 0;
    bool active = true;
};

std::uint64_t demo_id(const std::string& env_id, const std::vector<int>& actions);

/// Replays the actions and returns the exact discounted return. The sequence
/// must finish the episode exactly: no missing and no trailing actions.
ValueVector evaluate_demo(Env& env, const std::vector<int>& actions);

/// Demonstrations plus the convex-coverage set over their values. Pruned
/// demos stay stored but inactive; nothing is ever deleted. A demo is active
/// exactly when its value survives ccs_prune over all stored values.
struct DemoRepository {
    std::string env_id;
    double gamma = 0.0;
    std::size_t dim = 0;
    std::vector<Demonstration> demos;
    CcsSet ccs; // handles index into demos (earliest demo per distinct value)

    std::size_t active_count() const;
    std::vector<ValueVector> active_values() const;
    std::vector<ValueVector> ccs_values() const;
};

/// Evaluates all action lists, collapses duplicates by id, and prunes.
DemoRepository init_repository(Env& env, const std::vector<std::vector<int>>& action_lists);

/// Active demo maximizing utility(value, w) - u_e; ties resolve to the lowest
/// insertion index. Returns an index into repo.demos.
std::size_t select_guide(const DemoRepository& repo, const WeightVector& w, double u_e);

/// Inserts a self-evolved demo unless its (env_id, actions) digest already
/// exists, then re-prunes. Returns true iff the demo is active afterwards.
bool absorb(DemoRepository& repo, const std::vector<int>& actions, const ValueVector& value,
            int round);

/// Re-runs the membership test; returns how many demos were newly deactivated.
std::size_t prune_repo(DemoRepository& repo);

void save_repo(const DemoRepository& repo, const std::string& path);

/// Loads a repository file. When env is non-null the load is validated:
/// env ids must match and every stored value must reproduce bit-exactly.
DemoRepository load_repo(const std::string& path, Env* env);

} // namespace dgmorl
