#include "dgmorl/demo_store.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "dgmorl/text.hpp"

namespace dgmorl {

namespace {

// Activity always mirrors ccs_prune over all stored values; duplicates of a
// surviving value stay active alongside the earliest holder.
void rebuild(DemoRepository& repo) {
    std::vector<CcsEntry> entries;
    entries.reserve(repo.demos.size());
    for (std::size_t i = 0; i < repo.demos.size(); ++i)
        entries.push_back({repo.demos[i].value, static_cast<Handle>(i)});
    repo.ccs = ccs_prune(std::move(entries));
    for (auto& d : repo.demos) {
        d.active = false;
        for (const auto& e : repo.ccs.entries)
            if (e.value == d.value) {
                d.active = true;
                break;
            }
    }
}

std::string origin_name(DemoOrigin o) {
    return o == DemoOrigin::prior ? "prior" : "self_evolved";
}

DemoOrigin origin_from(const std::string& s, const std::string& ctx) {
    if (s == "prior") return DemoOrigin::prior;
    if (s == "self_evolved") return DemoOrigin::self_evolved;
    fail(Errc::format_error, ctx + ": unknown origin '" + s + "'");
}

// key=value tokens; values may themselves contain '='.
std::string field(const std::vector<std::string>& tokens, const std::string& key,
                  const std::string& ctx) {
    for (std::size_t i = 1; i < tokens.size(); ++i) {
        auto pos = tokens[i].find('=');
        if (pos != std::string::npos && tokens[i].substr(0, pos) == key)
            return tokens[i].substr(pos + 1);
    }
    fail(Errc::format_error, ctx + ": missing field '" + key + "'");
}

} // namespace

std::uint64_t demo_id(const std::string& env_id, const std::vector<int>& actions) {
    std::uint64_t h = fnv1a(env_id);
    h = fnv1a("\0", 1, h);
    for (int a : actions) {
        std::int32_t v = a;
        h = fnv1a(&v, sizeof v, h);
    }
    return h;
}

ValueVector evaluate_demo(Env& env, const std::vector<int>& actions) {
    if (actions.empty()) fail(Errc::invalid_argument, "demo has no actions");
    if (actions.size() > static_cast<std::size_t>(env.spec().horizon))
        fail(Errc::invalid_argument, "demo is longer than the horizon");
    std::size_t k = 0;
    auto [traj, value] = rollout(env, [&](StateId) {
        if (k >= actions.size()) fail(Errc::invalid_argument, "demo ends before the episode");
        return actions[k++];
    });
    if (k != actions.size()) fail(Errc::invalid_argument, "demo continues past the episode end");
    return value;
}

std::size_t DemoRepository::active_count() const {
    std::size_t n = 0;
    for (const auto& d : demos) n += d.active ? 1 : 0;
    return n;
}

std::vector<ValueVector> DemoRepository::active_values() const {
    std::vector<ValueVector> out;
    for (const auto& d : demos)
        if (d.active) out.push_back(d.value);
    return out;
}

std::vector<ValueVector> DemoRepository::ccs_values() const {
    std::vector<ValueVector> out;
    out.reserve(ccs.entries.size());
    for (const auto& e : ccs.entries) out.push_back(e.value);
    return out;
}

DemoRepository init_repository(Env& env, const std::vector<std::vector<int>>& action_lists) {
    if (action_lists.empty()) fail(Errc::too_few_demos, "need at least one demonstration");
    DemoRepository repo;
    repo.env_id = env.id();
    repo.gamma = env.spec().gamma;
    repo.dim = static_cast<std::size_t>(env.spec().objective_count);
    for (const auto& actions : action_lists) {
        std::uint64_t id = demo_id(repo.env_id, actions);
        bool dup = std::any_of(repo.demos.begin(), repo.demos.end(),
                               [&](const Demonstration& d) { return d.id == id; });
        if (dup) continue;
        Demonstration d;
        d.env_id = repo.env_id;
        d.actions = actions;
        d.value = evaluate_demo(env, actions);
        d.origin = DemoOrigin::prior;
        d.created_round = 0;
        d.id = id;
        repo.demos.push_back(std::move(d));
    }
    rebuild(repo);
    return repo;
}

std::size_t select_guide(const DemoRepository& repo, const WeightVector& w, double u_e) {
    std::size_t best = repo.demos.size();
    double best_gain = 0.0;
    for (std::size_t i = 0; i < repo.demos.size(); ++i) {
        if (!repo.demos[i].active) continue;
        double gain = utility(repo.demos[i].value, w) - u_e;
        if (best == repo.demos.size() || gain > best_gain) {
            best = i;
            best_gain = gain;
        }
    }
    if (best == repo.demos.size()) fail(Errc::empty_repository, "no active demonstrations");
    return best;
}

bool absorb(DemoRepository& repo, const std::vector<int>& actions, const ValueVector& value,
            int round) {
    std::uint64_t id = demo_id(repo.env_id, actions);
    for (const auto& d : repo.demos)
        if (d.id == id) return false;
    Demonstration d;
    d.env_id = repo.env_id;
    d.actions = actions;
    d.value = value;
    d.origin = DemoOrigin::self_evolved;
    d.created_round = round;
    d.id = id;
    repo.demos.push_back(std::move(d));
    rebuild(repo);
    return repo.demos.back().active;
}

std::size_t prune_repo(DemoRepository& repo) {
    std::vector<bool> before;
    before.reserve(repo.demos.size());
    for (const auto& d : repo.demos) before.push_back(d.active);
    rebuild(repo);
    std::size_t flipped = 0;
    for (std::size_t i = 0; i < repo.demos.size(); ++i)
        if (before[i] && !repo.demos[i].active) ++flipped;
    return flipped;
}

void save_repo(const DemoRepository& repo, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(Errc::io_error, "cannot write " + path);
    out << "repo env=" << repo.env_id << " gamma=" << format_double(repo.gamma)
        << " d=" << repo.dim << " demos=" << repo.demos.size() << "\n";
    for (const auto& d : repo.demos) {
        out << "demo env=" << d.env_id << " gamma=" << format_double(repo.gamma)
            << " d=" << d.value.dim() << " origin=" << origin_name(d.origin)
            << " round=" << d.created_round << "\n";
        out << "actions";
        for (int a : d.actions) out << ' ' << a;
        out << "\nvalue";
        for (double x : d.value.components()) out << ' ' << format_double(x);
        out << "\n";
    }
    if (!out) fail(Errc::io_error, "failed writing " + path);
}

DemoRepository load_repo(const std::string& path, Env* env) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(Errc::io_error, "cannot open " + path);

    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        auto t = trim(line);
        if (!t.empty()) lines.emplace_back(t);
    }
    if (lines.empty()) fail(Errc::format_error, path + ": empty repository file");

    auto head = split_ws(lines[0]);
    if (head.empty() || head[0] != "repo") fail(Errc::format_error, path + ": missing repo header");
    DemoRepository repo;
    repo.env_id = field(head, "env", path);
    repo.gamma = parse_double(field(head, "gamma", path), path);
    repo.dim = static_cast<std::size_t>(parse_int(field(head, "d", path), path));
    std::size_t count = static_cast<std::size_t>(parse_int(field(head, "demos", path), path));

    std::size_t pos = 1;
    for (std::size_t n = 0; n < count; ++n) {
        if (pos + 3 > lines.size()) fail(Errc::format_error, path + ": truncated demo block");
        const std::string ctx = path + ", demo " + std::to_string(n);
        auto dh = split_ws(lines[pos]);
        if (dh.empty() || dh[0] != "demo") fail(Errc::format_error, ctx + ": missing demo header");
        Demonstration d;
        d.env_id = field(dh, "env", ctx);
        d.origin = origin_from(field(dh, "origin", ctx), ctx);
        d.created_round = static_cast<int>(parse_int(field(dh, "round", ctx), ctx));
        double g = parse_double(field(dh, "gamma", ctx), ctx);
        if (g != repo.gamma) fail(Errc::format_error, ctx + ": gamma differs from the repo header");

        auto at = split_ws(lines[pos + 1]);
        if (at.empty() || at[0] != "actions") fail(Errc::format_error, ctx + ": missing actions line");
        for (std::size_t i = 1; i < at.size(); ++i)
            d.actions.push_back(static_cast<int>(parse_int(at[i], ctx)));

        auto vt = split_ws(lines[pos + 2]);
        if (vt.empty() || vt[0] != "value") fail(Errc::format_error, ctx + ": missing value line");
        std::vector<double> comps;
        for (std::size_t i = 1; i < vt.size(); ++i) comps.push_back(parse_double(vt[i], ctx));
        if (comps.size() != repo.dim) fail(Errc::format_error, ctx + ": value dimension mismatch");
        d.value = ValueVector(std::move(comps));
        d.id = demo_id(d.env_id, d.actions);

        if (env) {
            if (d.env_id != env->id())
                fail(Errc::invalid_argument, ctx + ": demo env '" + d.env_id +
                                                 "' does not match '" + env->id() + "'");
            ValueVector fresh = evaluate_demo(*env, d.actions);
            if (!(fresh == d.value))
                fail(Errc::value_mismatch, ctx + ": stored value " + d.value.to_string() +
                                               " != replayed " + fresh.to_string());
        }
        repo.demos.push_back(std::move(d));
        pos += 3;
    }
    if (pos != lines.size()) fail(Errc::format_error, path + ": trailing content after demos");
    if (repo.demos.empty()) fail(Errc::too_few_demos, path + ": repository has no demos");
    rebuild(repo);
    return repo;
}

} // namespace dgmorl
