#pragma once

#include <string>
#include <vector>

#include "dgmorl/env.hpp"

namespace dgmorl {

/// Grid description of a deep-sea-treasure world: free/blocked cells, one
/// start cell, and a table of treasure cells. Treasure values must strictly
/// increase in (row, col) order, the convex layout property of the bundled
/// default map.
struct DstMap {
    struct Treasure {
        int row = 0;
        int col = 0;
        double value = 0.0;
    };

    int rows = 0;
    int cols = 0;
    int start_row = 0;
    int start_col = 0;
    std::vector<bool> blocked;      // rows * cols, row-major
    std::vector<Treasure> treasures; // sorted by (row, col)

    bool is_blocked(int r, int c) const { return blocked[static_cast<std::size_t>(r) * cols + c]; }
    int treasure_at(int r, int c) const; // index into treasures, or -1
};

/// Parses the line-oriented map format: `rows N`, `cols N`, one `grid ...`
/// line per row ('.' free, '#' blocked, 'S' start), and `treasure R C VALUE`
/// entries. '#' comments and blank lines are ignored.
DstMap parse_dst_map(const std::string& text);
DstMap load_dst_map(const std::string& path);
std::string serialize_dst_map(const DstMap& map);

/// The convex treasure layout shipped with the project (externally sourced
/// from the published benchmark map, see data/dst_convex.map).
const DstMap& bundled_convex_map();

/// Deep-sea-treasure episodes: actions up/down/left/right, reward
/// [treasure, -1] per step, moves into walls or off the grid keep the agent
/// in place, entering a treasure cell ends the episode.
class DstEnv : public Env {
public:
    DstEnv(DstMap map, int horizon, double gamma);

    std::string id() const override;
    const DstMap& map() const { return map_; }

    StateId state_of(int row, int col) const { return static_cast<StateId>(row) * map_.cols + col; }
    int row_of(StateId s) const { return static_cast<int>(s) / map_.cols; }
    int col_of(StateId s) const { return static_cast<int>(s) % map_.cols; }

    static constexpr int kUp = 0;
    static constexpr int kDown = 1;
    static constexpr int kLeft = 2;
    static constexpr int kRight = 3;

protected:
    StateId initial_state() override;
    Outcome transition(StateId state, int action) override;

private:
    DstMap map_;
    std::string id_;
};

} // namespace dgmorl
