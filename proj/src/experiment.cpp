#include "dgmorl/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <utility>

#include "dgmorl/curriculum.hpp"
#include "dgmorl/demo_store.hpp"
#include "dgmorl/dst.hpp"
#include "dgmorl/error.hpp"
#include "dgmorl/lock.hpp"
#include "dgmorl/text.hpp"

namespace dgmorl {

namespace fs = std::filesystem;

std::unique_ptr<Env> make_env(const EnvConfig& cfg) {
    if (cfg.kind == EnvKind::dst) {
        DstMap map = cfg.map == "builtin" ? bundled_convex_map() : load_dst_map(cfg.map);
        return std::make_unique<DstEnv>(std::move(map), cfg.horizon, cfg.gamma);
    }
    LockSpec spec;
    spec.horizon = cfg.horizon;
    spec.gamma = cfg.gamma;
    spec.action_o1 = cfg.action_o1;
    spec.action_o2 = cfg.action_o2;
    spec.action_bal = cfg.action_bal;
    return std::make_unique<LockEnv>(spec);
}

std::vector<std::vector<int>> resolve_demos(Env& env, const DemoSource& src) {
    if (src.kind == DemoSource::Kind::file) {
        DemoRepository repo = load_repo(src.path, &env);
        std::vector<std::vector<int>> out;
        out.reserve(repo.demos.size());
        for (auto& d : repo.demos) out.push_back(std::move(d.actions));
        return out;
    }
    std::size_t count = src.count == 0 ? available_demo_count(env) : src.count;
    return generate_demos(env, src.quality, count);
}

MetricsLog baseline_train(Env& env, const CurriculumConfig& cfg) {
    cfg.validate();
    MetricsLog log;
    log.header(env.id(), cfg.seed);

    QTable q(env.spec().action_count, env.spec().objective_count);
    ReplayBuffer buffer(cfg.learner.buffer_capacity);
    Rng rng(cfg.seed);
    auto grid = equidistant_weights(static_cast<std::size_t>(env.spec().objective_count),
                                    cfg.eval_weight_count);

    std::uint64_t global_step = 0;
    std::uint64_t eval_step = 0;
    PolicyEvaluator evaluator(q, env, &eval_step);
    std::uint64_t next_eval = cfg.eval_period;
    std::uint64_t last_nominal = 0;
    bool any_eval = false;
    double last_eu = 0.0;
    int episodes = 0;

    auto eu_now = [&]() {
        const auto& trained = q.trained_weights();
        std::vector<ValueVector> values;
        if (trained.empty())
            values.push_back(evaluator.value(grid.front()));
        else
            values = evaluator.values(trained);
        return expected_utility(values, grid);
    };
    auto emit = [&](std::uint64_t nominal, const WeightVector* w) {
        MetricsLog::EvalRecord r;
        r.global_step = nominal;
        r.eval_step = eval_step;
        r.eu = eu_now();
        r.ccs_size = 0;
        r.active_demos = 0;
        r.w_c = w ? w->to_string() : "-";
        r.h_final = 0;
        r.beta = 0.0;
        r.round = episodes;
        log.eval(r);
        last_nominal = nominal;
        any_eval = true;
        last_eu = r.eu;
    };

    if (cfg.max_steps == 0) {
        emit(0, nullptr);
        log.summary(0, eval_step, last_eu, 0, 0, 0);
        return log;
    }

    while (global_step < cfg.max_steps) {
        const WeightVector& w = grid[static_cast<std::size_t>(rng() % grid.size())];
        StateId s = env.reset();
        bool done = false;
        while (!done) {
            int a = act_epsilon(q, s, w, cfg.learner.epsilon, global_step, rng);
            Transition t = env.step(a);
            buffer.push(t, w);
            done = t.terminal;
            s = t.next_state;
            ++global_step;
            for (int b = 0; b < cfg.learner.train_batches_per_step; ++b)
                train_batch(q, buffer, w, cfg.learner.alpha, env.spec().gamma,
                            cfg.learner.batch_size, rng);
        }
        ++episodes;
        // Evals run whole greedy episodes, so only between training episodes.
        while (next_eval <= global_step) {
            emit(next_eval, &w);
            next_eval += cfg.eval_period;
        }
    }
    if (!any_eval || last_nominal < cfg.max_steps) emit(global_step, nullptr);
    log.summary(global_step, eval_step, last_eu, episodes, 0, 0);
    return log;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(Errc::io_error, "cannot open for writing: " + path);
    out << content;
    if (!out) fail(Errc::io_error, "write failed: " + path);
}

MetricsLog run_one_seed(const RunConfig& cfg, std::uint64_t seed, const std::string& out_dir) {
    std::unique_ptr<Env> env = make_env(cfg.env);
    CurriculumConfig ccfg = cfg.curriculum;
    ccfg.seed = seed;

    MetricsLog log;
    if (cfg.baseline == BaselineKind::epsilon_greedy_0init) {
        log = baseline_train(*env, ccfg);
    } else {
        DemoRepository repo = init_repository(*env, resolve_demos(*env, cfg.demos));
        CurriculumDriver driver(*env, std::move(repo), ccfg);
        driver.run();
        if (!out_dir.empty()) save_repo(driver.repository(), out_dir + "/repository.txt");
        log = std::move(driver.log());
    }
    if (!out_dir.empty()) {
        log.save(out_dir + "/metrics.log");
        write_file(out_dir + "/config.snapshot", serialize_run_config(cfg));
    }
    return log;
}

ExperimentResult run_experiment(const RunConfig& cfg) {
    fs::create_directories(cfg.output);

    std::vector<std::future<MetricsLog>> futures;
    futures.reserve(cfg.seeds.size());
    for (std::uint64_t seed : cfg.seeds) {
        std::string dir = cfg.output + "/seed" + std::to_string(seed);
        fs::create_directories(dir);
        futures.push_back(std::async(std::launch::async,
                                     [cfg, seed, dir]() { return run_one_seed(cfg, seed, dir); }));
    }

    ExperimentResult result;
    result.seeds = cfg.seeds;
    result.logs.reserve(futures.size());
    for (auto& f : futures) result.logs.push_back(f.get());

    std::vector<std::string> texts;
    texts.reserve(result.logs.size());
    for (const auto& log : result.logs) texts.push_back(log.text());
    write_file(cfg.output + "/report.csv", report_csv(texts));
    write_file(cfg.output + "/report.txt", report_table(texts));
    return result;
}

namespace {

std::vector<std::vector<MetricsLog::EvalRecord>> aligned_evals(
    const std::vector<std::string>& log_texts) {
    if (log_texts.empty()) fail(Errc::missing_runs, "report needs at least one run");
    std::vector<std::vector<MetricsLog::EvalRecord>> evals;
    evals.reserve(log_texts.size());
    for (const auto& text : log_texts) {
        evals.push_back(MetricsLog::parse_evals(text));
        if (evals.back().empty()) fail(Errc::missing_runs, "a run produced no eval records");
    }
    const auto& first = evals.front();
    for (std::size_t r = 1; r < evals.size(); ++r) {
        if (evals[r].size() != first.size())
            fail(Errc::step_misalignment, "runs produced different numbers of eval records");
        for (std::size_t i = 0; i < first.size(); ++i)
            if (evals[r][i].global_step != first[i].global_step)
                fail(Errc::step_misalignment,
                     "eval steps differ across runs: " + std::to_string(first[i].global_step) +
                         " vs " + std::to_string(evals[r][i].global_step));
    }
    return evals;
}

} // namespace

std::string report_csv(const std::vector<std::string>& log_texts) {
    auto evals = aligned_evals(log_texts);
    std::string out = "global_step,eu_mean,eu_min,eu_max\n";
    for (std::size_t i = 0; i < evals.front().size(); ++i) {
        double sum = 0.0, lo = evals.front()[i].eu, hi = lo;
        for (const auto& run : evals) {
            double eu = run[i].eu;
            sum += eu;
            lo = std::min(lo, eu);
            hi = std::max(hi, eu);
        }
        double mean = sum / static_cast<double>(evals.size());
        out += std::to_string(evals.front()[i].global_step) + "," + format_double(mean) + "," +
               format_double(lo) + "," + format_double(hi) + "\n";
    }
    return out;
}

std::string report_table(const std::vector<std::string>& log_texts) {
    auto evals = aligned_evals(log_texts);
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%12s  %14s  %12s  %12s   (%zu runs)\n", "global_step",
                  "eu_mean", "+above", "-below", evals.size());
    std::string out = buf;
    for (std::size_t i = 0; i < evals.front().size(); ++i) {
        double sum = 0.0, lo = evals.front()[i].eu, hi = lo;
        for (const auto& run : evals) {
            double eu = run[i].eu;
            sum += eu;
            lo = std::min(lo, eu);
            hi = std::max(hi, eu);
        }
        double mean = sum / static_cast<double>(evals.size());
        std::snprintf(buf, sizeof(buf), "%12llu  %14.8f  +%.8f  -%.8f\n",
                      static_cast<unsigned long long>(evals.front()[i].global_step), mean,
                      hi - mean, mean - lo);
        out += buf;
    }
    return out;
}

} // namespace dgmorl
