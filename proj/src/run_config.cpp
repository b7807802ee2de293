#include "dgmorl/run_config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dgmorl/error.hpp"
#include "dgmorl/text.hpp"

namespace dgmorl {

namespace {

[[noreturn]] void bad(const std::string& where, const std::string& msg) {
    fail(Errc::config_error, where + ": " + msg);
}

bool parse_bool(const std::string& v) {
    if (v == "true") return true;
    if (v == "false") return false;
    fail(Errc::format_error, "expected true or false, got '" + v + "'");
}

std::string bool_string(bool b) { return b ? "true" : "false"; }

std::uint64_t parse_u64(const std::string& v) {
    long long x = parse_int(v, "config value");
    if (x < 0) fail(Errc::format_error, "expected a nonnegative integer, got '" + v + "'");
    return static_cast<std::uint64_t>(x);
}

int parse_i32(const std::string& v) {
    long long x = parse_int(v, "config value");
    if (x < -(1LL << 31) || x >= (1LL << 31))
        fail(Errc::format_error, "integer out of range: '" + v + "'");
    return static_cast<int>(x);
}

std::string env_kind_string(EnvKind k) { return k == EnvKind::dst ? "dst" : "lock"; }

EnvKind parse_env_kind(const std::string& v) {
    if (v == "dst") return EnvKind::dst;
    if (v == "lock") return EnvKind::lock;
    fail(Errc::format_error, "unknown environment kind '" + v + "'");
}

std::string baseline_string(BaselineKind b) {
    return b == BaselineKind::dg_morl ? "dg_morl" : "epsilon_greedy_0init";
}

BaselineKind parse_baseline(const std::string& v) {
    if (v == "dg_morl") return BaselineKind::dg_morl;
    if (v == "epsilon_greedy_0init") return BaselineKind::epsilon_greedy_0init;
    fail(Errc::format_error, "unknown baseline '" + v + "'");
}

std::vector<std::uint64_t> parse_seeds(const std::string& v) {
    std::vector<std::uint64_t> seeds;
    for (const auto& tok : split_ws(v)) seeds.push_back(parse_u64(tok));
    if (seeds.empty()) fail(Errc::format_error, "seeds list is empty");
    auto sorted = seeds;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        fail(Errc::format_error, "seeds list contains duplicates");
    return seeds;
}

std::string seeds_string(const std::vector<std::uint64_t>& seeds) {
    std::string out;
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        if (i) out += ' ';
        out += std::to_string(seeds[i]);
    }
    return out;
}

/// Sets one key. Value errors propagate as Error and are rewrapped with the
/// source location by the caller.
void apply_key(RunConfig& cfg, const std::string& section, const std::string& key,
               const std::string& value) {
    if (section == "env") {
        if (key == "kind") cfg.env.kind = parse_env_kind(value);
        else if (key == "map") cfg.env.map = value;
        else if (key == "horizon") cfg.env.horizon = parse_i32(value);
        else if (key == "gamma") cfg.env.gamma = parse_double(value, key);
        else if (key == "action_o1") cfg.env.action_o1 = parse_i32(value);
        else if (key == "action_o2") cfg.env.action_o2 = parse_i32(value);
        else if (key == "action_bal") cfg.env.action_bal = parse_i32(value);
        else fail(Errc::invalid_argument, "unknown key '" + key + "' in [env]");
        return;
    }
    if (section == "curriculum") {
        auto& c = cfg.curriculum;
        if (key == "max_steps") c.max_steps = parse_u64(value);
        else if (key == "delta_h") c.delta_h = parse_i32(value);
        else if (key == "beta_start") c.beta.start = parse_double(value, key);
        else if (key == "beta_end") c.beta.end = parse_double(value, key);
        else if (key == "beta_ramp_rounds") c.beta.ramp_rounds = parse_i32(value);
        else if (key == "eval_period") c.eval_period = parse_u64(value);
        else if (key == "rollouts_per_h") c.rollouts_per_h = parse_i32(value);
        else if (key == "max_attempts_per_h") c.max_attempts_per_h = parse_i32(value);
        else if (key == "eval_weight_count") c.eval_weight_count = parse_u64(value);
        else fail(Errc::invalid_argument, "unknown key '" + key + "' in [curriculum]");
        return;
    }
    if (section == "learner") {
        auto& l = cfg.curriculum.learner;
        if (key == "alpha") l.alpha = parse_double(value, key);
        else if (key == "batch_size") l.batch_size = parse_u64(value);
        else if (key == "buffer_capacity") l.buffer_capacity = parse_u64(value);
        else if (key == "epsilon_start") l.epsilon.start = parse_double(value, key);
        else if (key == "epsilon_end") l.epsilon.end = parse_double(value, key);
        else if (key == "epsilon_anneal_steps") l.epsilon.anneal_steps = parse_u64(value);
        else if (key == "train_batches_per_step") l.train_batches_per_step = parse_i32(value);
        else fail(Errc::invalid_argument, "unknown key '" + key + "' in [learner]");
        return;
    }
    if (section == "run") {
        if (key == "seeds") cfg.seeds = parse_seeds(value);
        else if (key == "demos") cfg.demos = parse_demo_source(value);
        else if (key == "baseline") cfg.baseline = parse_baseline(value);
        else if (key == "output") cfg.output = value;
        else if (key == "self_evolving") cfg.curriculum.self_evolving = parse_bool(value);
        else fail(Errc::invalid_argument, "unknown key '" + key + "' in [run]");
        return;
    }
    fail(Errc::invalid_argument, "unknown section [" + section + "]");
}

struct KeyRef {
    const char* section;
    const char* key;
};

// Every key, in snapshot order. Drives both override lookup and serialization.
constexpr KeyRef kKeys[] = {
    {"env", "kind"},
    {"env", "map"},
    {"env", "horizon"},
    {"env", "gamma"},
    {"env", "action_o1"},
    {"env", "action_o2"},
    {"env", "action_bal"},
    {"curriculum", "max_steps"},
    {"curriculum", "delta_h"},
    {"curriculum", "beta_start"},
    {"curriculum", "beta_end"},
    {"curriculum", "beta_ramp_rounds"},
    {"curriculum", "eval_period"},
    {"curriculum", "rollouts_per_h"},
    {"curriculum", "max_attempts_per_h"},
    {"curriculum", "eval_weight_count"},
    {"learner", "alpha"},
    {"learner", "batch_size"},
    {"learner", "buffer_capacity"},
    {"learner", "epsilon_start"},
    {"learner", "epsilon_end"},
    {"learner", "epsilon_anneal_steps"},
    {"learner", "train_batches_per_step"},
    {"run", "seeds"},
    {"run", "demos"},
    {"run", "baseline"},
    {"run", "output"},
    {"run", "self_evolving"},
};

std::string override_name(const KeyRef& ref) {
    std::string name = "DGMORL_";
    for (const char* p = ref.section; *p; ++p)
        name += static_cast<char>(std::toupper(static_cast<unsigned char>(*p)));
    name += '_';
    for (const char* p = ref.key; *p; ++p)
        name += static_cast<char>(std::toupper(static_cast<unsigned char>(*p)));
    return name;
}

void apply_overrides(RunConfig& cfg) {
    for (const auto& ref : kKeys) {
        std::string name = override_name(ref);
        const char* value = std::getenv(name.c_str());
        if (!value) continue;
        try {
            apply_key(cfg, ref.section, ref.key, value);
        } catch (const Error& e) {
            bad("override " + name, e.what());
        }
        cfg.overrides.push_back(name + "=" + value);
    }
}

void validate_config(const RunConfig& cfg) {
    try {
        cfg.curriculum.validate();
    } catch (const Error& e) {
        bad("config", e.what());
    }
    if (cfg.env.horizon < 1) bad("config", "[env] horizon must be positive");
    if (!(cfg.env.gamma >= 0.0 && cfg.env.gamma < 1.0))
        bad("config", "[env] gamma must be in [0, 1)");
    if (cfg.env.kind == EnvKind::lock) {
        int a = cfg.env.action_o1, b = cfg.env.action_o2, c = cfg.env.action_bal;
        bool in_range = a >= 0 && a < 3 && b >= 0 && b < 3 && c >= 0 && c < 3;
        if (!in_range || a == b || a == c || b == c)
            bad("config", "[env] lock action roles must be distinct and in [0, 3)");
    }
    if (cfg.output.empty()) bad("config", "[run] output must not be empty");
}

} // namespace

DemoSource parse_demo_source(const std::string& text) {
    DemoSource src;
    if (text.rfind("file:", 0) == 0) {
        src.kind = DemoSource::Kind::file;
        src.path = text.substr(5);
        if (src.path.empty()) fail(Errc::format_error, "demo file path is empty");
        return src;
    }
    if (text.rfind("builtin:", 0) == 0) {
        auto parts = split_char(text.substr(8), ':');
        if (parts.size() != 2)
            fail(Errc::format_error, "expected builtin:<quality>:<count>, got '" + text + "'");
        src.kind = DemoSource::Kind::builtin;
        src.quality = parse_demo_quality(parts[0]);
        if (parts[1] == "all") {
            src.count = 0;
        } else {
            src.count = parse_u64(parts[1]);
            if (src.count == 0) fail(Errc::format_error, "demo count must be positive or 'all'");
        }
        return src;
    }
    fail(Errc::format_error, "unknown demo source '" + text + "'");
}

std::string demo_source_string(const DemoSource& src) {
    if (src.kind == DemoSource::Kind::file) return "file:" + src.path;
    std::string count = src.count == 0 ? "all" : std::to_string(src.count);
    return "builtin:" + demo_quality_name(src.quality) + ":" + count;
}

RunConfig parse_run_config(const std::string& text) {
    RunConfig cfg;
    std::string section;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line{trim(raw)};
        if (line.empty() || line[0] == '#') continue;
        std::string where = "line " + std::to_string(line_no);
        if (line.front() == '[') {
            if (line.back() != ']') bad(where, "unterminated section header");
            section = trim(std::string_view(line).substr(1, line.size() - 2));
            if (section != "env" && section != "curriculum" && section != "learner" &&
                section != "run")
                bad(where, "unknown section [" + section + "]");
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) bad(where, "expected key = value");
        std::string key{trim(std::string_view(line).substr(0, eq))};
        std::string value{trim(std::string_view(line).substr(eq + 1))};
        if (key.empty()) bad(where, "empty key");
        if (section.empty()) bad(where, "key outside of any section");
        try {
            apply_key(cfg, section, key, value);
        } catch (const Error& e) {
            bad(where, e.what());
        }
    }
    apply_overrides(cfg);
    validate_config(cfg);
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(Errc::io_error, "cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    RunConfig cfg = parse_run_config(buf.str());
    if (cfg.env.kind == EnvKind::dst && cfg.env.map != "builtin") {
        std::filesystem::path map(cfg.env.map);
        if (map.is_relative())
            cfg.env.map = (std::filesystem::path(path).parent_path() / map).string();
    }
    return cfg;
}

std::string serialize_run_config(const RunConfig& cfg) {
    auto value_of = [&](const KeyRef& ref) -> std::string {
        std::string section = ref.section;
        std::string key = ref.key;
        if (section == "env") {
            if (key == "kind") return env_kind_string(cfg.env.kind);
            if (key == "map") return cfg.env.map;
            if (key == "horizon") return std::to_string(cfg.env.horizon);
            if (key == "gamma") return format_double(cfg.env.gamma);
            if (key == "action_o1") return std::to_string(cfg.env.action_o1);
            if (key == "action_o2") return std::to_string(cfg.env.action_o2);
            if (key == "action_bal") return std::to_string(cfg.env.action_bal);
        }
        if (section == "curriculum") {
            const auto& c = cfg.curriculum;
            if (key == "max_steps") return std::to_string(c.max_steps);
            if (key == "delta_h") return std::to_string(c.delta_h);
            if (key == "beta_start") return format_double(c.beta.start);
            if (key == "beta_end") return format_double(c.beta.end);
            if (key == "beta_ramp_rounds") return std::to_string(c.beta.ramp_rounds);
            if (key == "eval_period") return std::to_string(c.eval_period);
            if (key == "rollouts_per_h") return std::to_string(c.rollouts_per_h);
            if (key == "max_attempts_per_h") return std::to_string(c.max_attempts_per_h);
            if (key == "eval_weight_count") return std::to_string(c.eval_weight_count);
        }
        if (section == "learner") {
            const auto& l = cfg.curriculum.learner;
            if (key == "alpha") return format_double(l.alpha);
            if (key == "batch_size") return std::to_string(l.batch_size);
            if (key == "buffer_capacity") return std::to_string(l.buffer_capacity);
            if (key == "epsilon_start") return format_double(l.epsilon.start);
            if (key == "epsilon_end") return format_double(l.epsilon.end);
            if (key == "epsilon_anneal_steps") return std::to_string(l.epsilon.anneal_steps);
            if (key == "train_batches_per_step") return std::to_string(l.train_batches_per_step);
        }
        if (section == "run") {
            if (key == "seeds") return seeds_string(cfg.seeds);
            if (key == "demos") return demo_source_string(cfg.demos);
            if (key == "baseline") return baseline_string(cfg.baseline);
            if (key == "output") return cfg.output;
            if (key == "self_evolving") return bool_string(cfg.curriculum.self_evolving);
        }
        fail(Errc::invalid_argument, "unmapped config key");
    };

    std::string out = "# dgmorl configuration snapshot\n";
    for (const auto& ov : cfg.overrides) out += "# override " + ov + "\n";
    std::string section;
    for (const auto& ref : kKeys) {
        if (section != ref.section) {
            section = ref.section;
            out += "[" + section + "]\n";
        }
        out += std::string(ref.key) + " = " + value_of(ref) + "\n";
    }
    return out;
}

} // namespace dgmorl
