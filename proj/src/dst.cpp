#include "dgmorl/dst.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "dgmorl/text.hpp"

namespace dgmorl {

namespace {

const char* kBundledConvexMap = R"(# Deep-sea-treasure grid, convex treasure layout.
# Externally sourced: values and depths follow the convex variant of the
# published benchmark map, not original to this project.
rows 11
cols 11
grid S..........
grid ...........
grid #..........
grid ##.........
grid ###........
grid ######.....
grid ######.....
grid ######.....
grid ########...
grid ########...
grid #########..
treasure 1 0 0.7
treasure 2 1 8.2
treasure 3 2 11.5
treasure 4 3 14.0
treasure 4 4 15.1
treasure 4 5 16.1
treasure 7 6 19.6
treasure 7 7 20.3
treasure 9 8 22.4
treasure 10 9 23.7
)";

void validate(const DstMap& m) {
    if (m.rows < 1 || m.cols < 1) fail(Errc::invalid_map, "map needs at least one row and column");
    if (m.blocked.size() != static_cast<std::size_t>(m.rows) * m.cols)
        fail(Errc::invalid_map, "grid size does not match rows x cols");
    if (m.start_row < 0 || m.start_row >= m.rows || m.start_col < 0 || m.start_col >= m.cols)
        fail(Errc::invalid_map, "start cell out of bounds");
    if (m.is_blocked(m.start_row, m.start_col)) fail(Errc::invalid_map, "start cell is blocked");
    if (m.treasures.empty()) fail(Errc::invalid_map, "map has no treasures");

    double prev = -HUGE_VAL;
    int prev_r = -1, prev_c = -1;
    for (const auto& t : m.treasures) {
        if (t.row < 0 || t.row >= m.rows || t.col < 0 || t.col >= m.cols)
            fail(Errc::invalid_map, "treasure out of bounds");
        if (m.is_blocked(t.row, t.col)) fail(Errc::invalid_map, "treasure on a blocked cell");
        if (t.row == m.start_row && t.col == m.start_col)
            fail(Errc::invalid_map, "treasure on the start cell");
        if (!std::isfinite(t.value)) fail(Errc::invalid_map, "treasure value is not finite");
        if (std::pair(t.row, t.col) <= std::pair(prev_r, prev_c))
            fail(Errc::invalid_map, "duplicate or unordered treasure cell");
        if (t.value <= prev)
            fail(Errc::invalid_map, "treasure values must strictly increase with depth");
        prev = t.value;
        prev_r = t.row;
        prev_c = t.col;
    }
}

} // namespace

int DstMap::treasure_at(int r, int c) const {
    for (std::size_t i = 0; i < treasures.size(); ++i)
        if (treasures[i].row == r && treasures[i].col == c) return static_cast<int>(i);
    return -1;
}

DstMap parse_dst_map(const std::string& text) {
    DstMap m;
    m.rows = m.cols = -1;
    int start_count = 0;
    int grid_row = 0;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view sv = trim(line);
        if (sv.empty() || sv.front() == '#') continue;
        const std::string ctx = "map line " + std::to_string(lineno);
        auto tokens = split_ws(sv);
        const std::string& head = tokens[0];
        if (head == "rows" && tokens.size() == 2) {
            m.rows = static_cast<int>(parse_int(tokens[1], ctx));
        } else if (head == "cols" && tokens.size() == 2) {
            m.cols = static_cast<int>(parse_int(tokens[1], ctx));
        } else if (head == "grid" && tokens.size() == 2) {
            if (m.rows < 0 || m.cols < 0) fail(Errc::invalid_map, ctx + ": grid before rows/cols");
            if (grid_row >= m.rows) fail(Errc::invalid_map, ctx + ": more grid lines than rows");
            const std::string& cells = tokens[1];
            if (static_cast<int>(cells.size()) != m.cols)
                fail(Errc::invalid_map, ctx + ": grid line length differs from cols");
            if (m.blocked.empty()) m.blocked.assign(static_cast<std::size_t>(m.rows) * m.cols, false);
            for (int c = 0; c < m.cols; ++c) {
                char ch = cells[static_cast<std::size_t>(c)];
                if (ch == '#') {
                    m.blocked[static_cast<std::size_t>(grid_row) * m.cols + c] = true;
                } else if (ch == 'S') {
                    m.start_row = grid_row;
                    m.start_col = c;
                    ++start_count;
                } else if (ch != '.') {
                    fail(Errc::invalid_map, ctx + ": unknown cell symbol '" + std::string(1, ch) + "'");
                }
            }
            ++grid_row;
        } else if (head == "treasure" && tokens.size() == 4) {
            DstMap::Treasure t;
            t.row = static_cast<int>(parse_int(tokens[1], ctx));
            t.col = static_cast<int>(parse_int(tokens[2], ctx));
            t.value = parse_double(tokens[3], ctx);
            m.treasures.push_back(t);
        } else {
            fail(Errc::invalid_map, ctx + ": unrecognized directive '" + head + "'");
        }
    }
    if (m.rows < 0 || m.cols < 0) fail(Errc::invalid_map, "map is missing rows/cols");
    if (grid_row != m.rows) fail(Errc::invalid_map, "map has fewer grid lines than rows");
    if (start_count != 1) fail(Errc::invalid_map, "map must contain exactly one start cell");
    validate(m);
    return m;
}

DstMap load_dst_map(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(Errc::io_error, "cannot open map file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_dst_map(buf.str());
}

std::string serialize_dst_map(const DstMap& map) {
    std::string out;
    out += "rows " + std::to_string(map.rows) + "\n";
    out += "cols " + std::to_string(map.cols) + "\n";
    for (int r = 0; r < map.rows; ++r) {
        out += "grid ";
        for (int c = 0; c < map.cols; ++c) {
            char ch = '.';
            if (map.is_blocked(r, c)) ch = '#';
            if (r == map.start_row && c == map.start_col) ch = 'S';
            out += ch;
        }
        out += '\n';
    }
    for (const auto& t : map.treasures)
        out += "treasure " + std::to_string(t.row) + " " + std::to_string(t.col) + " " +
               format_double(t.value) + "\n";
    return out;
}

const DstMap& bundled_convex_map() {
    static const DstMap map = parse_dst_map(kBundledConvexMap);
    return map;
}

DstEnv::DstEnv(DstMap map, int horizon, double gamma)
    : Env({4, 2, horizon, gamma}), map_(std::move(map)) {
    validate(map_);
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx",
                  static_cast<unsigned long long>(fnv1a(serialize_dst_map(map_))));
    id_ = "dst[h=" + std::to_string(horizon) + ",g=" + format_double(gamma) + ",map=" + hex + "]";
}

std::string DstEnv::id() const { return id_; }

StateId DstEnv::initial_state() { return state_of(map_.start_row, map_.start_col); }

Env::Outcome DstEnv::transition(StateId state, int action) {
    int r = row_of(state);
    int c = col_of(state);
    int nr = r, nc = c;
    switch (action) {
        case kUp: --nr; break;
        case kDown: ++nr; break;
        case kLeft: --nc; break;
        case kRight: ++nc; break;
    }
    if (nr < 0 || nr >= map_.rows || nc < 0 || nc >= map_.cols || map_.is_blocked(nr, nc)) {
        nr = r;
        nc = c;
    }
    Outcome o;
    o.next = state_of(nr, nc);
    int t = map_.treasure_at(nr, nc);
    double treasure = t >= 0 ? map_.treasures[static_cast<std::size_t>(t)].value : 0.0;
    o.reward = ValueVector({treasure, -1.0});
    o.terminal = t >= 0;
    return o;
}

} // namespace dgmorl
