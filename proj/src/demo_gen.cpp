#include "dgmorl/demo_gen.hpp"

#include <utility>

#include "dgmorl/error.hpp"
#include "dgmorl/oracle.hpp"

namespace dgmorl {

namespace {

/// Evenly spread `count` indices over [0, available); count == 1 picks the
/// last (highest-valued) outcome.
std::vector<std::size_t> spread_indices(std::size_t available, std::size_t count) {
    if (count == 0) fail(Errc::invalid_count, "demo count must be positive");
    if (count > available)
        fail(Errc::count_exceeds_available, "requested more demos than distinct outcomes");
    std::vector<std::size_t> idx;
    idx.reserve(count);
    if (count == 1) {
        idx.push_back(available - 1);
        return idx;
    }
    for (std::size_t i = 0; i < count; ++i)
        idx.push_back(i * (available - 1) / (count - 1));
    return idx;
}

/// An action that keeps the agent on the start cell: a move off the grid or
/// into a wall. Entering a treasure is not a stall, it ends the episode.
int stall_action(const DstMap& map) {
    static constexpr int kDr[4] = {-1, 1, 0, 0};
    static constexpr int kDc[4] = {0, 0, -1, 1};
    for (int a = 0; a < 4; ++a) {
        int nr = map.start_row + kDr[a];
        int nc = map.start_col + kDc[a];
        if (nr < 0 || nr >= map.rows || nc < 0 || nc >= map.cols) return a;
        if (map.is_blocked(nr, nc)) return a;
    }
    fail(Errc::invalid_argument, "map has no stalling action at the start cell");
}

std::vector<std::vector<int>> dst_demos(DstEnv& env, DemoQuality quality, std::size_t count) {
    auto paths = dst_shortest_treasure_paths(env);
    if (paths.empty()) fail(Errc::invalid_map, "no treasure is reachable within the horizon");

    std::size_t waste = quality == DemoQuality::optimal ? 0 : quality == DemoQuality::medium ? 2 : 6;
    int stall = waste > 0 ? stall_action(env.map()) : 0;

    std::vector<std::vector<int>> demos;
    for (std::size_t i : spread_indices(paths.size(), count)) {
        std::vector<int> actions(waste, stall);
        actions.insert(actions.end(), paths[i].actions.begin(), paths[i].actions.end());
        if (actions.size() > static_cast<std::size_t>(env.spec().horizon))
            fail(Errc::invalid_argument, "demo does not fit within the horizon");
        demos.push_back(std::move(actions));
    }
    return demos;
}

std::vector<std::vector<int>> lock_demos(LockEnv& env, DemoQuality quality, std::size_t count) {
    if (quality != DemoQuality::optimal)
        fail(Errc::invalid_argument,
             "the lock environment has no graded tiers: any deviation earns zero");
    const LockSpec& lock = env.lock_spec();
    const std::size_t h = static_cast<std::size_t>(lock.horizon);

    std::vector<std::vector<int>> all;
    all.emplace_back(h, lock.action_o1);
    all.emplace_back(h, lock.action_o2);
    std::vector<int> balanced(h - 1, lock.action_o1);
    balanced.push_back(lock.action_bal);
    all.push_back(std::move(balanced));

    std::vector<std::vector<int>> demos;
    for (std::size_t i : spread_indices(all.size(), count)) demos.push_back(all[i]);
    return demos;
}

} // namespace

DemoQuality parse_demo_quality(const std::string& name) {
    if (name == "optimal") return DemoQuality::optimal;
    if (name == "medium") return DemoQuality::medium;
    if (name == "low") return DemoQuality::low;
    fail(Errc::invalid_argument, "unknown demo quality: " + name);
}

std::string demo_quality_name(DemoQuality q) {
    switch (q) {
    case DemoQuality::optimal: return "optimal";
    case DemoQuality::medium: return "medium";
    case DemoQuality::low: return "low";
    }
    fail(Errc::invalid_argument, "unknown demo quality");
}

std::vector<std::vector<int>> generate_demos(Env& env, DemoQuality quality, std::size_t count) {
    if (auto* dst = dynamic_cast<DstEnv*>(&env)) return dst_demos(*dst, quality, count);
    if (auto* lock = dynamic_cast<LockEnv*>(&env)) return lock_demos(*lock, quality, count);
    fail(Errc::invalid_argument, "no built-in demos for this environment type");
}

std::size_t available_demo_count(Env& env) {
    if (auto* dst = dynamic_cast<DstEnv*>(&env)) return dst_shortest_treasure_paths(*dst).size();
    if (dynamic_cast<LockEnv*>(&env)) return 3;
    fail(Errc::invalid_argument, "no built-in demos for this environment type");
}

} // namespace dgmorl
