#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "doctest.h"

#include "dgmorl/curriculum.hpp"
#include "dgmorl/demo_gen.hpp"
#include "dgmorl/lock.hpp"
#include "dgmorl/text.hpp"
#include "test_support.hpp"

using namespace dgmorl;
using testsup::vv;
using testsup::ww;

namespace {

bool has_code(const std::function<void()>& fn, Errc code) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code() == code;
    }
    return false;
}

CcsSet ccs_of(const std::vector<ValueVector>& values) {
    std::vector<CcsEntry> entries;
    for (std::size_t i = 0; i < values.size(); ++i) entries.push_back({values[i], i});
    return ccs_prune(std::move(entries));
}

LockSpec lock3() {
    LockSpec s;
    s.horizon = 3;
    return s;
}

CurriculumConfig base_cfg() {
    CurriculumConfig cfg;
    cfg.max_steps = 6000;
    cfg.delta_h = 2;
    cfg.beta = {1.0, 1.0, 9};
    cfg.eval_period = 1500;
    cfg.rollouts_per_h = 1;
    cfg.max_attempts_per_h = 50;
    cfg.eval_weight_count = 100;
    cfg.seed = 7;
    cfg.learner.epsilon = {1.0, 0.0, 3000};
    return cfg;
}

struct RollbackLine {
    int round = 0;
    int h_from = 0;
    int h_to = 0;
    double u = 0.0;
    double u_theta = 0.0;
    double beta = 0.0;
};

std::string kv(const std::vector<std::string>& tokens, const std::string& key) {
    for (std::size_t i = 1; i < tokens.size(); ++i) {
        auto pos = tokens[i].find('=');
        if (pos != std::string::npos && tokens[i].substr(0, pos) == key)
            return tokens[i].substr(pos + 1);
    }
    return {};
}

std::vector<RollbackLine> parse_rollbacks(const std::string& text) {
    std::vector<RollbackLine> out;
    for (const auto& line : split_char(text, '\n')) {
        auto tokens = split_ws(line);
        if (tokens.empty() || tokens[0] != "rollback") continue;
        RollbackLine r;
        r.round = std::stoi(kv(tokens, "round"));
        r.h_from = std::stoi(kv(tokens, "h_from"));
        r.h_to = std::stoi(kv(tokens, "h_to"));
        r.u = std::stod(kv(tokens, "u"));
        r.u_theta = std::stod(kv(tokens, "u_theta"));
        r.beta = std::stod(kv(tokens, "beta"));
        out.push_back(r);
    }
    return out;
}

double parse_summary_final_eu(const std::string& text) {
    for (const auto& line : split_char(text, '\n')) {
        auto tokens = split_ws(line);
        if (!tokens.empty() && tokens[0] == "summary") return std::stod(kv(tokens, "final_eu"));
    }
    return -1.0;
}

} // namespace

TEST_CASE("update_beta ramps linearly and clamps at the endpoint") {
    BetaSchedule flat{1.0, 1.0, 9};
    CHECK(update_beta(flat, 0) == 1.0);
    CHECK(update_beta(flat, 50) == 1.0);

    BetaSchedule ramp{0.8, 0.98, 9};
    CHECK(update_beta(ramp, 0) == 0.8);
    CHECK(update_beta(ramp, 3) == doctest::Approx(0.86).epsilon(1e-12));
    CHECK(update_beta(ramp, 9) == doctest::Approx(0.98).epsilon(1e-12));
    CHECK(update_beta(ramp, 100) == 0.98);

    CHECK(has_code([&] { update_beta(ramp, -1); }, Errc::invalid_argument));
    CHECK(has_code([] { update_beta({0.0, 1.0, 9}, 0); }, Errc::invalid_schedule));
    CHECK(has_code([] { update_beta({0.9, 0.5, 9}, 0); }, Errc::invalid_schedule));
    CHECK(has_code([] { update_beta({0.5, 1.2, 9}, 0); }, Errc::invalid_schedule));
    CHECK(has_code([] { update_beta({0.5, 1.0, 0}, 0); }, Errc::invalid_schedule));
}

TEST_CASE("candidate_weight maximizes the coverage shortfall") {
    CcsSet two = ccs_of({vv({1, 0}), vv({0, 1})});

    // No agent values: every corner gap is the full CCS utility.
    CHECK(candidate_weight(two, {}) == ww({1, 0}));

    // Agent already optimal at (1,0): the largest gap moves to (0,1).
    CHECK(candidate_weight(two, {vv({1, 0})}) == ww({0, 1}));

    // Singleton CCS: corners collapse to the extrema, tie goes to the first.
    CcsSet one = ccs_of({vv({0.5, 0.5})});
    CHECK(candidate_weight(one, {}) == ww({1, 0}));

    CHECK(has_code([] { candidate_weight(CcsSet{}, {}); }, Errc::empty_input));
}

TEST_CASE("config validation rejects out-of-range fields") {
    CurriculumConfig cfg = base_cfg();
    CHECK_NOTHROW(cfg.validate());

    auto broken = [&](auto&& mutate, Errc code) {
        CurriculumConfig c = base_cfg();
        mutate(c);
        return has_code([&] { c.validate(); }, code);
    };
    CHECK(broken([](auto& c) { c.delta_h = 0; }, Errc::invalid_argument));
    CHECK(broken([](auto& c) { c.eval_period = 0; }, Errc::invalid_argument));
    CHECK(broken([](auto& c) { c.rollouts_per_h = 0; }, Errc::invalid_argument));
    CHECK(broken([](auto& c) { c.max_attempts_per_h = 0; }, Errc::invalid_argument));
    CHECK(broken([](auto& c) { c.eval_weight_count = 1; }, Errc::invalid_argument));
    CHECK(broken([](auto& c) { c.beta = {0.9, 0.5, 9}; }, Errc::invalid_schedule));
    CHECK(broken([](auto& c) { c.learner.alpha = 0.0; }, Errc::invalid_argument));
    CHECK(broken([](auto& c) { c.learner.batch_size = 0; }, Errc::invalid_argument));
    CHECK(broken([](auto& c) { c.learner.buffer_capacity = 0; }, Errc::invalid_argument));
    CHECK(broken([](auto& c) { c.learner.train_batches_per_step = -1; }, Errc::invalid_argument));
    CHECK(broken([](auto& c) { c.learner.epsilon = {0.2, 0.8, 10}; }, Errc::invalid_schedule));
}

TEST_CASE("driver construction validates repository and environment") {
    LockEnv env(lock3());
    DemoRepository repo = init_repository(env, generate_demos(env, DemoQuality::optimal, 3));

    DemoRepository hollow;
    hollow.env_id = env.id();
    CHECK(has_code([&] { CurriculumDriver(env, hollow, base_cfg()); }, Errc::too_few_demos));

    LockSpec other = lock3();
    other.horizon = 4;
    LockEnv wrong(other);
    CHECK(has_code([&] { CurriculumDriver(wrong, repo, base_cfg()); }, Errc::invalid_argument));

    CurriculumConfig bad = base_cfg();
    bad.delta_h = 0;
    CHECK(has_code([&] { CurriculumDriver(env, repo, bad); }, Errc::invalid_argument));
}

TEST_CASE("mixed rollouts replay the guide prefix and meter the budget") {
    LockEnv env(lock3());
    DemoRepository repo = init_repository(env, generate_demos(env, DemoQuality::optimal, 3));
    CurriculumDriver driver(env, repo, base_cfg());
    const Demonstration& guide = driver.repository().demos[0]; // o1 path
    WeightVector w10 = ww({1, 0});

    // h = H: pure replay reproduces the guide value bit-exactly.
    auto full = driver.mixed_rollout(guide, 3, w10);
    CHECK(full.value == guide.value);
    CHECK(full.steps == 3);
    CHECK(full.actions == guide.actions);
    CHECK(driver.state().global_step == 3); // every training step is metered

    // Greedy evaluation consumes no training budget.
    auto eval_full = driver.evaluate_mixed(guide, 3, w10);
    CHECK(eval_full.value == guide.value);
    CHECK(eval_full.utility_wc == utility(guide.value, w10)); // the u_theta fixpoint
    CHECK(driver.state().global_step == 3);
    CHECK(driver.state().eval_step >= 3);

    // h = 0 on an untrained table: the all-a0 greedy tail derails to zero.
    auto eval_zero = driver.evaluate_mixed(guide, 0, w10);
    CHECK(eval_zero.value == ValueVector::zeros(2));
    CHECK(eval_zero.utility_wc == 0.0);

    // h = H - delta_h with an untrained tail also derails.
    auto eval_partial = driver.evaluate_mixed(guide, 1, w10);
    CHECK(eval_partial.value == ValueVector::zeros(2));
}

TEST_CASE("evaluate_eu scores the exploration policy set alone") {
    LockEnv env(lock3());
    auto grid = equidistant_weights(2, 100);

    QTable untouched(3, 2);
    CHECK(evaluate_eu(untouched, env, grid) == 0.0); // zero-init all-a0 policy

    // Train one extreme policy by a backward pass over the o1 path.
    auto backfill = [&](QTable& q, const std::vector<int>& actions, const WeightVector& w) {
        LockEnv replay(lock3());
        replay.reset();
        std::vector<Transition> path;
        for (int a : actions) path.push_back(replay.step(a));
        for (auto it = path.rbegin(); it != path.rend(); ++it) update(q, *it, w, 1.0, 0.99);
    };
    LockSpec spec = lock3();
    QTable q1(3, 2);
    backfill(q1, {spec.action_o1, spec.action_o1, spec.action_o1}, ww({1, 0}));
    CHECK(evaluate_eu(q1, env, grid) == doctest::Approx(0.9801 * 0.5).epsilon(1e-12));

    // All three optimal policies: EU equals the closed-form grid mean.
    QTable q3(3, 2);
    backfill(q3, {spec.action_o1, spec.action_o1, spec.action_o1}, ww({1, 0}));
    backfill(q3, {spec.action_o2, spec.action_o2, spec.action_o2}, ww({0, 1}));
    backfill(q3, {spec.action_o1, spec.action_o1, spec.action_bal}, ww({0.5, 0.5}));
    CHECK(evaluate_eu(q3, env, grid) ==
          doctest::Approx(0.99 * 0.99 * 7450.0 / 9900.0).epsilon(1e-12));

    CHECK(has_code([&] { evaluate_eu(q3, env, {}); }, Errc::empty_input));
}

TEST_CASE("a curriculum round rolls h back to the floor on the small lock") {
    LockEnv env(lock3());
    DemoRepository repo = init_repository(env, generate_demos(env, DemoQuality::optimal, 3));
    CurriculumDriver driver(env, repo, base_cfg());

    driver.run_round();
    CHECK(driver.state().round == 1);
    CHECK(driver.state().beta == 1.0);
    CHECK(driver.state().global_step > 0);
    CHECK(driver.state().global_step % 3 == 0); // lock episodes are exactly H steps

    auto rollbacks = parse_rollbacks(driver.log().text());
    REQUIRE_FALSE(rollbacks.empty());
    // h starts at H and steps down by delta_h without ever rising.
    CHECK(rollbacks.front().h_from == 3);
    for (std::size_t i = 0; i < rollbacks.size(); ++i) {
        CHECK(rollbacks[i].h_to == rollbacks[i].h_from - 2);
        CHECK(rollbacks[i].u >= rollbacks[i].u_theta * rollbacks[i].beta);
        if (i > 0) CHECK(rollbacks[i].h_from == rollbacks[i - 1].h_to);
    }
    CHECK(rollbacks.back().h_to < 0); // the guide handed over completely
}

TEST_CASE("training on the small lock reaches the demo coverage exactly") {
    LockEnv env(lock3());
    DemoRepository repo = init_repository(env, generate_demos(env, DemoQuality::optimal, 3));
    std::vector<ValueVector> demo_values = repo.ccs_values();

    CurriculumDriver driver(env, repo, base_cfg());
    driver.run();

    const std::string text = driver.log().text();
    auto evals = MetricsLog::parse_evals(text);
    REQUIRE(evals.size() == 4); // 6000 steps, one record each 1500
    for (std::size_t i = 0; i < evals.size(); ++i) {
        CHECK(evals[i].global_step == 1500 * (i + 1));
        CHECK(evals[i].beta == 1.0);
        CHECK(evals[i].ccs_size == 3); // the three outcomes are the whole coverage set
        CHECK(evals[i].active_demos >= 3);
        if (i > 0) {
            CHECK(evals[i].eval_step >= evals[i - 1].eval_step);
            CHECK(evals[i].round >= evals[i - 1].round);
        }
    }

    // The exploration policy alone ends up covering the demo set: EU matches.
    double expected = expected_utility(demo_values, driver.eval_grid());
    double final_eu = parse_summary_final_eu(text);
    CHECK(std::abs(final_eu - expected) <= 1e-9);
    CHECK(evals.back().eu == final_eu);

    // A fully trained table completes the episode from a bare start.
    const Demonstration& o1 = driver.repository().demos[0];
    auto tail = driver.evaluate_mixed(o1, 0, ww({1, 0}));
    CHECK(tail.value[0] == doctest::Approx(0.9801).epsilon(1e-12));

    // Per-corner demo coverage never regressed across rounds.
    auto corners = MetricsLog::parse_corners(text);
    REQUIRE_FALSE(corners.empty());
    std::map<std::string, double> best;
    for (const auto& c : corners) {
        auto it = best.find(c.w);
        if (it != best.end()) CHECK(c.max_demo_utility >= it->second);
        best[c.w] = std::max(it == best.end() ? -HUGE_VAL : it->second, c.max_demo_utility);
    }
}

TEST_CASE("identical configurations produce byte-identical logs") {
    CurriculumConfig cfg = base_cfg();
    cfg.max_steps = 1500;
    cfg.eval_period = 500;

    LockEnv env_a(lock3());
    auto demos = generate_demos(env_a, DemoQuality::optimal, 3);
    MetricsLog log_a = train(env_a, demos, cfg);
    LockEnv env_b(lock3());
    MetricsLog log_b = train(env_b, demos, cfg);
    CHECK(log_a.text() == log_b.text());
    CHECK(log_a.lines().front().rfind("run env=lock", 0) == 0);
    CHECK(log_a.lines().back().rfind("summary ", 0) == 0);
}

TEST_CASE("a zero budget emits one baseline record and no training") {
    LockEnv env(lock3());
    CurriculumConfig cfg = base_cfg();
    cfg.max_steps = 0;

    MetricsLog log = train(env, generate_demos(env, DemoQuality::optimal, 3), cfg);
    auto evals = MetricsLog::parse_evals(log.text());
    REQUIRE(evals.size() == 1);
    CHECK(evals[0].global_step == 0);
    CHECK(evals[0].eu == 0.0); // untrained agent on the lock
    CHECK(evals[0].round == 0);
    auto tokens = split_ws(log.lines().back());
    CHECK(tokens[0] == "summary");
    CHECK(kv(tokens, "global_step") == "0");
    CHECK(kv(tokens, "rounds") == "0");
}

TEST_CASE("an exhausted budget ends the round cleanly mid-flight") {
    LockEnv env(lock3());
    DemoRepository repo = init_repository(env, generate_demos(env, DemoQuality::optimal, 3));
    CurriculumConfig cfg = base_cfg();
    cfg.max_steps = 30;
    cfg.eval_period = 7;
    cfg.learner.train_batches_per_step = 0; // greedy tail never improves

    CurriculumDriver driver(env, repo, cfg);
    driver.run();
    CHECK(driver.state().budget_exhausted);
    CHECK(driver.state().round == 0); // the truncated round does not count
    CHECK(driver.state().global_step >= 30);

    auto evals = MetricsLog::parse_evals(driver.log().text());
    REQUIRE(evals.size() == 5);
    for (std::size_t i = 0; i + 1 < evals.size(); ++i)
        CHECK(evals[i].global_step == 7 * (i + 1)); // nominal grid points
    CHECK(evals.back().global_step == driver.state().global_step);
}
