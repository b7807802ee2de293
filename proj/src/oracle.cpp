#include "dgmorl/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>
#include <unordered_set>
#include <utility>

#include "dgmorl/error.hpp"

namespace dgmorl {

namespace {

bool lex_greater(const ValueVector& a, const ValueVector& b) {
    auto ac = a.components();
    auto bc = b.components();
    return std::lexicographical_compare(bc.begin(), bc.end(), ac.begin(), ac.end());
}

/// Prunes the attainable returns to the nondominated front and derives the
/// CCS, corner weights and grid expected utility from it.
OracleResult finalize(std::vector<ValueVector> attainable, std::size_t dim,
                      std::size_t eval_weight_count) {
    if (attainable.empty()) fail(Errc::empty_input, "oracle produced no attainable returns");
    std::vector<CcsEntry> entries;
    entries.reserve(attainable.size());
    for (std::size_t i = 0; i < attainable.size(); ++i)
        entries.push_back({attainable[i], static_cast<Handle>(i)});
    std::vector<CcsEntry> front = pareto_prune(std::move(entries));

    OracleResult r;
    r.values.reserve(front.size());
    for (auto& e : front) r.values.push_back(std::move(e.value));
    std::sort(r.values.begin(), r.values.end(), lex_greater);

    std::vector<CcsEntry> sorted;
    sorted.reserve(r.values.size());
    for (std::size_t i = 0; i < r.values.size(); ++i)
        sorted.push_back({r.values[i], static_cast<Handle>(i)});
    r.ccs = ccs_prune(std::move(sorted));

    std::vector<ValueVector> ccs_values;
    ccs_values.reserve(r.ccs.entries.size());
    for (const auto& e : r.ccs.entries) ccs_values.push_back(e.value);
    r.corners = corner_weights(ccs_values);
    r.eval_weight_count = eval_weight_count;
    r.eu = expected_utility(r.values, equidistant_weights(dim, eval_weight_count));
    return r;
}

/// Same fold as discounted_return: running gamma power, accumulate in step
/// order. Bit-exact agreement with environment rollouts depends on it.
ValueVector fold_rewards(const std::vector<ValueVector>& rewards, double gamma, std::size_t dim) {
    std::vector<double> acc(dim, 0.0);
    double g = 1.0;
    for (const auto& r : rewards) {
        for (std::size_t i = 0; i < dim; ++i) acc[i] += g * r[i];
        g *= gamma;
    }
    return ValueVector(std::move(acc));
}

ValueVector replay_exact(Env& env, const std::vector<int>& actions, bool require_terminal) {
    std::vector<ValueVector> rewards;
    rewards.reserve(actions.size());
    env.reset();
    bool terminal = false;
    for (int a : actions) {
        if (terminal) fail(Errc::value_mismatch, "oracle path replay ended early");
        Transition t = env.step(a);
        rewards.push_back(t.reward);
        terminal = t.terminal;
    }
    if (require_terminal && !terminal)
        fail(Errc::value_mismatch, "oracle path replay did not finish the episode");
    return fold_rewards(rewards, env.spec().gamma,
                        static_cast<std::size_t>(env.spec().objective_count));
}

} // namespace

std::vector<TreasurePath> dst_shortest_treasure_paths(DstEnv& env) {
    const DstMap& m = env.map();
    const int rows = m.rows;
    const int cols = m.cols;
    const int cells = rows * cols;
    const int start = m.start_row * cols + m.start_col;

    std::vector<int> dist(static_cast<std::size_t>(cells), -1);
    std::vector<int> parent_cell(static_cast<std::size_t>(cells), -1);
    std::vector<int> parent_act(static_cast<std::size_t>(cells), -1);
    std::vector<int> tdist(m.treasures.size(), -1);
    std::vector<int> tparent_cell(m.treasures.size(), -1);
    std::vector<int> tparent_act(m.treasures.size(), -1);

    static constexpr int kDr[4] = {-1, 1, 0, 0}; // up, down, left, right
    static constexpr int kDc[4] = {0, 0, -1, 1};

    std::queue<int> queue;
    dist[static_cast<std::size_t>(start)] = 0;
    queue.push(start);
    while (!queue.empty()) {
        int u = queue.front();
        queue.pop();
        int r = u / cols;
        int c = u % cols;
        for (int a = 0; a < 4; ++a) {
            int nr = r + kDr[a];
            int nc = c + kDc[a];
            if (nr < 0 || nr >= rows || nc < 0 || nc >= cols) continue;
            if (m.is_blocked(nr, nc)) continue;
            int v = nr * cols + nc;
            int ti = m.treasure_at(nr, nc);
            if (ti >= 0) {
                if (tdist[static_cast<std::size_t>(ti)] < 0) {
                    tdist[static_cast<std::size_t>(ti)] = dist[static_cast<std::size_t>(u)] + 1;
                    tparent_cell[static_cast<std::size_t>(ti)] = u;
                    tparent_act[static_cast<std::size_t>(ti)] = a;
                }
                continue; // absorbing: never expanded
            }
            if (dist[static_cast<std::size_t>(v)] < 0) {
                dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
                parent_cell[static_cast<std::size_t>(v)] = u;
                parent_act[static_cast<std::size_t>(v)] = a;
                queue.push(v);
            }
        }
    }

    const double gamma = env.spec().gamma;
    std::vector<TreasurePath> paths;
    for (std::size_t ti = 0; ti < m.treasures.size(); ++ti) {
        int d = tdist[ti];
        if (d < 0 || d > env.spec().horizon) continue;
        std::vector<int> actions{tparent_act[ti]};
        for (int cur = tparent_cell[ti]; cur != start; cur = parent_cell[static_cast<std::size_t>(cur)])
            actions.push_back(parent_act[static_cast<std::size_t>(cur)]);
        std::reverse(actions.begin(), actions.end());

        TreasurePath p;
        p.row = m.treasures[ti].row;
        p.col = m.treasures[ti].col;
        p.treasure = m.treasures[ti].value;
        p.actions = std::move(actions);
        p.value = replay_exact(env, p.actions, true);

        // Closed-form cross-check: T * gamma^(n-1) treasure, -sum gamma^k cost.
        double g = 1.0;
        double cost = 0.0;
        for (int k = 0; k + 1 < d; ++k) {
            cost -= g;
            g *= gamma;
        }
        double expect0 = p.treasure * g;
        double expect1 = cost - g;
        if (std::abs(p.value[0] - expect0) > 1e-9 || std::abs(p.value[1] - expect1) > 1e-9)
            fail(Errc::value_mismatch, "treasure path value disagrees with the closed form");
        paths.push_back(std::move(p));
    }
    return paths;
}

OracleResult solve_dst(DstEnv& env, std::size_t eval_weight_count) {
    const DstMap& m = env.map();
    if (m.rows > 15 || m.cols > 15)
        fail(Errc::too_large_for_oracle, "exhaustive solver supports grids up to 15x15");

    std::vector<ValueVector> attainable;
    for (auto& p : dst_shortest_treasure_paths(env)) attainable.push_back(std::move(p.value));

    // Wandering without ever collecting: zero treasure, full penalty stream,
    // folded with the same running gamma power the environment uses.
    double g = 1.0;
    double penalty = 0.0;
    for (int k = 0; k < env.spec().horizon; ++k) {
        penalty -= g;
        g *= env.spec().gamma;
    }
    attainable.push_back(ValueVector({0.0, penalty}));
    return finalize(std::move(attainable), 2, eval_weight_count);
}

OracleResult solve_lock(LockEnv& env, std::size_t eval_weight_count) {
    const LockSpec& lock = env.lock_spec();
    if (lock.horizon > 12)
        fail(Errc::too_large_for_oracle, "exhaustive solver supports lock horizons up to 12");

    const int h = lock.horizon;
    const int actions = env.spec().action_count;

    std::vector<ValueVector> attainable;
    std::unordered_set<std::string> seen;
    std::size_t rewarded = 0;
    std::vector<int> seq(static_cast<std::size_t>(h), 0);
    bool more = true;
    while (more) {
        ValueVector value = replay_exact(env, seq, true);
        bool nonzero = false;
        for (double x : value.components())
            if (x != 0.0) nonzero = true;
        if (nonzero) ++rewarded;
        if (seen.insert(value.to_string()).second) attainable.push_back(value);

        more = false;
        for (std::size_t i = seq.size(); i-- > 0;) {
            if (++seq[i] < actions) {
                more = true;
                break;
            }
            seq[i] = 0;
        }
    }

    if (rewarded != 3)
        fail(Errc::value_mismatch, "lock enumeration expected exactly three rewarded sequences");

    // Closed-form cross-check: gamma^(h-1) * {[1,0], [0,1], [0.5,0.5]}.
    double g = 1.0;
    for (int k = 0; k + 1 < h; ++k) g *= lock.gamma;
    std::vector<std::vector<double>> expected = {{g, 0.0}, {0.0, g}, {0.5 * g, 0.5 * g}};
    for (const auto& e : expected) {
        bool found = false;
        for (const auto& v : attainable)
            if (std::abs(v[0] - e[0]) <= 1e-9 && std::abs(v[1] - e[1]) <= 1e-9) found = true;
        if (!found) fail(Errc::value_mismatch, "lock enumeration disagrees with the closed form");
    }
    return finalize(std::move(attainable), 2, eval_weight_count);
}

OracleResult solve_oracle(Env& env, std::size_t eval_weight_count) {
    if (auto* dst = dynamic_cast<DstEnv*>(&env)) return solve_dst(*dst, eval_weight_count);
    if (auto* lock = dynamic_cast<LockEnv*>(&env)) return solve_lock(*lock, eval_weight_count);
    fail(Errc::invalid_argument, "no exhaustive solver for this environment type");
}

} // namespace dgmorl
