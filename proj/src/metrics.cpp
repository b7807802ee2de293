#include "dgmorl/metrics.hpp"

#include <fstream>
#include <sstream>

#include "dgmorl/error.hpp"
#include "dgmorl/text.hpp"

namespace dgmorl {

namespace {

std::string kv(const std::vector<std::string>& tokens, const std::string& key,
               const std::string& ctx) {
    for (std::size_t i = 1; i < tokens.size(); ++i) {
        auto pos = tokens[i].find('=');
        if (pos != std::string::npos && tokens[i].substr(0, pos) == key)
            return tokens[i].substr(pos + 1);
    }
    fail(Errc::format_error, ctx + ": missing field '" + key + "'");
}

} // namespace

void MetricsLog::header(const std::string& env_id, std::uint64_t seed) {
    lines_.push_back("run env=" + env_id + " seed=" + std::to_string(seed));
}

void MetricsLog::eval(const EvalRecord& r) {
    lines_.push_back("eval global_step=" + std::to_string(r.global_step) +
                     " eval_step=" + std::to_string(r.eval_step) + " eu=" + format_double(r.eu) +
                     " ccs_size=" + std::to_string(r.ccs_size) +
                     " active_demos=" + std::to_string(r.active_demos) + " w_c=" + r.w_c +
                     " h_final=" + std::to_string(r.h_final) + " beta=" + format_double(r.beta) +
                     " round=" + std::to_string(r.round));
}

void MetricsLog::corner(const CornerRecord& r) {
    lines_.push_back("corner round=" + std::to_string(r.round) + " w=" + r.w +
                     " umax=" + format_double(r.max_demo_utility));
}

void MetricsLog::round_start(int round, const std::string& w_c, std::uint64_t guide_id,
                             double u_theta, double beta) {
    char idhex[17];
    std::snprintf(idhex, sizeof idhex, "%016llx", static_cast<unsigned long long>(guide_id));
    lines_.push_back("round idx=" + std::to_string(round) + " w_c=" + w_c + " guide=" + idhex +
                     " u_theta=" + format_double(u_theta) + " beta=" + format_double(beta));
}

void MetricsLog::rollback(int round, int h_from, int h_to, double u, double u_theta, double beta) {
    lines_.push_back("rollback round=" + std::to_string(round) + " h_from=" + std::to_string(h_from) +
                     " h_to=" + std::to_string(h_to) + " u=" + format_double(u) +
                     " u_theta=" + format_double(u_theta) + " beta=" + format_double(beta));
}

void MetricsLog::absorbed(int round, std::uint64_t demo_id, bool active) {
    char idhex[17];
    std::snprintf(idhex, sizeof idhex, "%016llx", static_cast<unsigned long long>(demo_id));
    lines_.push_back("absorb round=" + std::to_string(round) + " demo=" + idhex +
                     " active=" + (active ? std::string("1") : std::string("0")));
}

void MetricsLog::summary(std::uint64_t global_step, std::uint64_t eval_step, double final_eu,
                         int rounds, std::size_t ccs_size, std::size_t active_demos) {
    lines_.push_back("summary global_step=" + std::to_string(global_step) +
                     " eval_step=" + std::to_string(eval_step) +
                     " final_eu=" + format_double(final_eu) + " rounds=" + std::to_string(rounds) +
                     " ccs_size=" + std::to_string(ccs_size) +
                     " active_demos=" + std::to_string(active_demos));
}

std::string MetricsLog::text() const {
    std::string out;
    for (const auto& l : lines_) {
        out += l;
        out += '\n';
    }
    return out;
}

void MetricsLog::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(Errc::io_error, "cannot write " + path);
    out << text();
    if (!out) fail(Errc::io_error, "failed writing " + path);
}

std::vector<MetricsLog::EvalRecord> MetricsLog::parse_evals(const std::string& text) {
    std::vector<EvalRecord> out;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto tokens = split_ws(line);
        if (tokens.empty() || tokens[0] != "eval") continue;
        const std::string ctx = "metrics line " + std::to_string(lineno);
        EvalRecord r;
        r.global_step = static_cast<std::uint64_t>(parse_int(kv(tokens, "global_step", ctx), ctx));
        r.eval_step = static_cast<std::uint64_t>(parse_int(kv(tokens, "eval_step", ctx), ctx));
        r.eu = parse_double(kv(tokens, "eu", ctx), ctx);
        r.ccs_size = static_cast<std::size_t>(parse_int(kv(tokens, "ccs_size", ctx), ctx));
        r.active_demos = static_cast<std::size_t>(parse_int(kv(tokens, "active_demos", ctx), ctx));
        r.w_c = kv(tokens, "w_c", ctx);
        r.h_final = static_cast<int>(parse_int(kv(tokens, "h_final", ctx), ctx));
        r.beta = parse_double(kv(tokens, "beta", ctx), ctx);
        r.round = static_cast<int>(parse_int(kv(tokens, "round", ctx), ctx));
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<MetricsLog::CornerRecord> MetricsLog::parse_corners(const std::string& text) {
    std::vector<CornerRecord> out;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto tokens = split_ws(line);
        if (tokens.empty() || tokens[0] != "corner") continue;
        const std::string ctx = "metrics line " + std::to_string(lineno);
        CornerRecord r;
        r.round = static_cast<int>(parse_int(kv(tokens, "round", ctx), ctx));
        r.w = kv(tokens, "w", ctx);
        r.max_demo_utility = parse_double(kv(tokens, "umax", ctx), ctx);
        out.push_back(std::move(r));
    }
    return out;
}

} // namespace dgmorl
