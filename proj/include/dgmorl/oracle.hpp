#pragma once

#include <cstddef>
#include <vector>

#include "dgmorl/dst.hpp"
#include "dgmorl/lock.hpp"
#include "dgmorl/mo_core.hpp"

namespace dgmorl {

/// Ground truth for a small instance, computed by exhaustive search instead
/// of learning: the nondominated attainable returns, their convex coverage
/// set and corner weights, and the expected utility over the standard
/// evaluation grid.
struct OracleResult {
    std::vector<ValueVector> values; // nondominated, sorted lexicographically descending
    CcsSet ccs;                      // handles index into values
    CornerWeightSet corners;
    double eu = 0.0;
    std::size_t eval_weight_count = 0;
};

/// Shortest path from the start to one treasure, ending on the treasure cell.
struct TreasurePath {
    int row = 0;
    int col = 0;
    double treasure = 0.0;
    std::vector<int> actions;
    ValueVector value; // exact discounted return of replaying the path
};

/// Breadth-first shortest paths to every treasure reachable within the
/// horizon. Treasure cells absorb: a path may end on one but never crosses
/// one. Neighbor expansion follows the action order, so the reconstructed
/// paths are deterministic. Each path is replayed through the environment and
/// cross-checked against the closed-form discount sum.
std::vector<TreasurePath> dst_shortest_treasure_paths(DstEnv& env);

/// Exact solution for grids up to 15x15; larger grids raise TooLargeForOracle.
OracleResult solve_dst(DstEnv& env, std::size_t eval_weight_count);

/// Exact solution by enumerating every action sequence, for horizons up to 12
/// (TooLargeForOracle beyond). Verifies that exactly three sequences are
/// rewarded and that their values match the closed-form discount sums.
OracleResult solve_lock(LockEnv& env, std::size_t eval_weight_count);

/// Dispatches on the concrete environment type.
OracleResult solve_oracle(Env& env, std::size_t eval_weight_count);

} // namespace dgmorl
