#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "dgmorl/demo_store.hpp"
#include "dgmorl/error.hpp"
#include "dgmorl/experiment.hpp"
#include "dgmorl/oracle.hpp"
#include "dgmorl/text.hpp"

namespace {

struct EnvOptions {
    std::string kind = "dst";
    std::string map = "builtin";
    int horizon = -1; // -1: kind default (dst 100, lock 8)
    double gamma = 0.99;
    int action_o1 = 1;
    int action_o2 = 2;
    int action_bal = 0;
};

void add_env_options(CLI::App& cmd, EnvOptions& opt) {
    cmd.add_option("--env", opt.kind, "Environment kind: dst or lock")
        ->check(CLI::IsMember({"dst", "lock"}));
    cmd.add_option("--map", opt.map, "DST map: 'builtin' or a map file path");
    cmd.add_option("--horizon", opt.horizon, "Episode horizon (default: dst 100, lock 8)");
    cmd.add_option("--gamma", opt.gamma, "Discount factor");
    cmd.add_option("--action-o1", opt.action_o1, "Lock action committing to objective 1");
    cmd.add_option("--action-o2", opt.action_o2, "Lock action committing to objective 2");
    cmd.add_option("--action-bal", opt.action_bal, "Lock final balanced action");
}

std::unique_ptr<dgmorl::Env> build_env(const EnvOptions& opt) {
    dgmorl::EnvConfig cfg;
    cfg.kind = opt.kind == "dst" ? dgmorl::EnvKind::dst : dgmorl::EnvKind::lock;
    cfg.map = opt.map;
    cfg.horizon = opt.horizon >= 0 ? opt.horizon : (cfg.kind == dgmorl::EnvKind::dst ? 100 : 8);
    cfg.gamma = opt.gamma;
    cfg.action_o1 = opt.action_o1;
    cfg.action_o2 = opt.action_o2;
    cfg.action_bal = opt.action_bal;
    return dgmorl::make_env(cfg);
}

int cmd_run(const std::string& config_path) {
    dgmorl::RunConfig cfg = dgmorl::load_run_config(config_path);
    dgmorl::ExperimentResult result = dgmorl::run_experiment(cfg);
    for (std::size_t i = 0; i < result.seeds.size(); ++i) {
        auto evals = dgmorl::MetricsLog::parse_evals(result.logs[i].text());
        std::printf("seed %llu: final_eu %s (%zu eval records)\n",
                    static_cast<unsigned long long>(result.seeds[i]),
                    dgmorl::format_double(evals.back().eu).c_str(), evals.size());
    }
    std::printf("wrote %s/seed<seed>/metrics.log, report.csv, report.txt\n", cfg.output.c_str());
    return 0;
}

int cmd_oracle(const EnvOptions& opt, std::size_t eval_weights) {
    auto env = build_env(opt);
    dgmorl::OracleResult r = dgmorl::solve_oracle(*env, eval_weights);
    std::printf("env %s\n", env->id().c_str());
    std::printf("values %zu\n", r.values.size());
    for (const auto& v : r.values) std::printf("value %s\n", v.to_string().c_str());
    std::printf("ccs %zu\n", r.ccs.entries.size());
    for (const auto& e : r.ccs.entries)
        std::printf("ccs_value %s handle %llu\n", e.value.to_string().c_str(),
                    static_cast<unsigned long long>(e.handle));
    std::printf("corners %zu\n", r.corners.weights.size());
    for (const auto& w : r.corners.weights) std::printf("corner %s\n", w.to_string().c_str());
    std::printf("eu %s over %zu weights\n", dgmorl::format_double(r.eu).c_str(),
                r.eval_weight_count);
    return 0;
}

int cmd_gen_demos(const EnvOptions& opt, const std::string& quality, std::size_t count,
                  const std::string& out_path) {
    auto env = build_env(opt);
    std::size_t n = count == 0 ? dgmorl::available_demo_count(*env) : count;
    auto actions = dgmorl::generate_demos(*env, dgmorl::parse_demo_quality(quality), n);
    dgmorl::DemoRepository repo = dgmorl::init_repository(*env, actions);
    dgmorl::save_repo(repo, out_path);
    for (const auto& d : repo.demos)
        std::printf("demo %016llx len=%zu value=%s%s\n", static_cast<unsigned long long>(d.id),
                    d.actions.size(), d.value.to_string().c_str(), d.active ? "" : " (inactive)");
    std::printf("wrote %zu demos to %s\n", repo.demos.size(), out_path.c_str());
    return 0;
}

int cmd_report(const std::vector<std::string>& log_paths, const std::string& csv_path,
               const std::string& table_path) {
    std::vector<std::string> texts;
    texts.reserve(log_paths.size());
    for (const auto& p : log_paths) {
        std::ifstream in(p, std::ios::binary);
        if (!in) dgmorl::fail(dgmorl::Errc::io_error, "cannot open log: " + p);
        std::ostringstream buf;
        buf << in.rdbuf();
        texts.push_back(buf.str());
    }
    std::string csv = dgmorl::report_csv(texts);
    if (csv_path.empty())
        std::fputs(csv.c_str(), stdout);
    else
        dgmorl::write_file(csv_path, csv);
    if (!table_path.empty()) dgmorl::write_file(table_path, dgmorl::report_table(texts));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Demonstration-guided multi-objective tabular RL workbench"};
    app.require_subcommand(1);

    std::string config_path;
    CLI::App* run = app.add_subcommand("run", "Run the configured experiment over all seeds");
    run->add_option("--config", config_path, "Run configuration file")->required();

    EnvOptions oracle_env;
    std::size_t oracle_weights = 100;
    CLI::App* oracle = app.add_subcommand("oracle", "Exhaustively solve a small instance");
    add_env_options(*oracle, oracle_env);
    oracle->add_option("--eval-weights", oracle_weights, "Evaluation grid size");

    EnvOptions gen_env;
    std::string gen_quality = "optimal";
    std::size_t gen_count = 0;
    std::string gen_out = "demos.repo";
    CLI::App* gen = app.add_subcommand("gen-demos", "Generate built-in demonstrations");
    add_env_options(*gen, gen_env);
    gen->add_option("--quality", gen_quality, "Demo tier: optimal, medium or low")
        ->check(CLI::IsMember({"optimal", "medium", "low"}));
    gen->add_option("--count", gen_count, "How many demos (0 = all available)");
    gen->add_option("--out", gen_out, "Repository file to write");

    std::vector<std::string> report_logs;
    std::string report_csv_path;
    std::string report_table_path;
    CLI::App* report = app.add_subcommand("report", "Aggregate metrics logs across runs");
    report->add_option("logs", report_logs, "metrics.log files")->required()->expected(-1);
    report->add_option("--csv", report_csv_path, "CSV output path (default: stdout)");
    report->add_option("--table", report_table_path, "Fixed-width table output path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(config_path);
        if (oracle->parsed()) return cmd_oracle(oracle_env, oracle_weights);
        if (gen->parsed()) return cmd_gen_demos(gen_env, gen_quality, gen_count, gen_out);
        if (report->parsed()) return cmd_report(report_logs, report_csv_path, report_table_path);
    } catch (const dgmorl::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return e.code() == dgmorl::Errc::config_error ? 2 : 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
