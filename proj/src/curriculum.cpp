#include "dgmorl/curriculum.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <utility>

#include "dgmorl/error.hpp"

namespace dgmorl {

void BetaSchedule::validate() const {
    if (!(0.0 < start && start <= end && end <= 1.0))
        fail(Errc::invalid_schedule, "beta schedule needs 0 < start <= end <= 1");
    if (ramp_rounds < 1) fail(Errc::invalid_schedule, "beta ramp needs at least one round");
}

double update_beta(const BetaSchedule& schedule, int round) {
    schedule.validate();
    if (round < 0) fail(Errc::invalid_argument, "beta round must be nonnegative");
    double frac = static_cast<double>(round) / static_cast<double>(schedule.ramp_rounds);
    return std::min(schedule.end, schedule.start + (schedule.end - schedule.start) * frac);
}

void LearnerConfig::validate() const {
    if (!(alpha > 0.0 && alpha <= 1.0)) fail(Errc::invalid_argument, "alpha must be in (0, 1]");
    if (batch_size == 0) fail(Errc::invalid_argument, "batch_size must be positive");
    if (buffer_capacity == 0) fail(Errc::invalid_argument, "buffer_capacity must be positive");
    if (train_batches_per_step < 0)
        fail(Errc::invalid_argument, "train_batches_per_step must be nonnegative");
    epsilon.validate();
}

void CurriculumConfig::validate() const {
    if (delta_h < 1) fail(Errc::invalid_argument, "delta_h must be positive");
    if (eval_period == 0) fail(Errc::invalid_argument, "eval_period must be positive");
    if (rollouts_per_h < 1) fail(Errc::invalid_argument, "rollouts_per_h must be positive");
    if (max_attempts_per_h < 1) fail(Errc::invalid_argument, "max_attempts_per_h must be positive");
    if (eval_weight_count < 2) fail(Errc::invalid_argument, "eval_weight_count must be at least 2");
    beta.validate();
    learner.validate();
}

WeightVector candidate_weight(const CcsSet& ccs, const std::vector<ValueVector>& agent_values) {
    if (ccs.entries.empty()) fail(Errc::empty_input, "candidate weight needs a non-empty CCS");
    std::vector<ValueVector> ccs_values;
    ccs_values.reserve(ccs.entries.size());
    for (const auto& e : ccs.entries) ccs_values.push_back(e.value);

    CornerWeightSet corners = corner_weights(ccs_values);
    const WeightVector* best = nullptr;
    double best_gap = -HUGE_VAL;
    for (const auto& w : corners.weights) {
        double u_ccs = max_utility_over_set(ccs_values, w).first;
        double u_agent = agent_values.empty() ? 0.0 : max_utility_over_set(agent_values, w).first;
        double gap = u_ccs - u_agent;
        if (gap > best_gap) {
            best_gap = gap;
            best = &w;
        }
    }
    return *best;
}

CurriculumDriver::CurriculumDriver(Env& env, DemoRepository repo, const CurriculumConfig& cfg)
    : env_(env),
      repo_(std::move(repo)),
      cfg_(cfg),
      q_(env.spec().action_count, env.spec().objective_count),
      buffer_(cfg.learner.buffer_capacity),
      rng_(cfg.seed),
      eval_grid_(equidistant_weights(static_cast<std::size_t>(env.spec().objective_count),
                                     cfg.eval_weight_count)),
      evaluator_(q_, env_, &state_.eval_step) {
    cfg_.validate();
    if (repo_.env_id != env_.id())
        fail(Errc::invalid_argument, "repository was built for a different environment");
    if (repo_.demos.empty()) fail(Errc::too_few_demos, "curriculum needs at least one demonstration");
    state_.beta = update_beta(cfg_.beta, 0);
    next_eval_ = cfg_.eval_period;
}

MixedRolloutResult CurriculumDriver::mixed_rollout(const Demonstration& guide, int h,
                                                   const WeightVector& w_c) {
    MixedRolloutResult res;
    Trajectory traj;
    StateId s = env_.reset();
    std::size_t t = 0;
    bool done = false;
    while (!done) {
        int a;
        if (static_cast<int>(t) < h && t < guide.actions.size())
            a = guide.actions[t];
        else
            a = act_epsilon(q_, s, w_c, cfg_.learner.epsilon, state_.global_step, rng_);
        Transition tr = env_.step(a);
        buffer_.push(tr, w_c);
        res.actions.push_back(a);
        done = tr.terminal;
        s = tr.next_state;
        traj.push_back(std::move(tr));
        ++state_.global_step;
        ++t;
    }
    res.value = discounted_return(traj, env_.spec().gamma,
                                  static_cast<std::size_t>(env_.spec().objective_count));
    res.steps = t;
    res.utility_wc = utility(res.value, w_c);
    return res;
}

MixedRolloutResult CurriculumDriver::evaluate_mixed(const Demonstration& guide, int h,
                                                    const WeightVector& w_c) {
    MixedRolloutResult res;
    Trajectory traj;
    StateId s = env_.reset();
    std::size_t t = 0;
    bool done = false;
    while (!done) {
        int a;
        if (static_cast<int>(t) < h && t < guide.actions.size())
            a = guide.actions[t];
        else
            a = greedy_action(q_, s, w_c);
        Transition tr = env_.step(a);
        res.actions.push_back(a);
        done = tr.terminal;
        s = tr.next_state;
        traj.push_back(std::move(tr));
        ++t;
    }
    state_.eval_step += t;
    res.value = discounted_return(traj, env_.spec().gamma,
                                  static_cast<std::size_t>(env_.spec().objective_count));
    res.steps = t;
    res.utility_wc = utility(res.value, w_c);
    return res;
}

double CurriculumDriver::evaluate_eu() {
    const auto& trained = q_.trained_weights();
    std::vector<ValueVector> values;
    if (trained.empty())
        values.push_back(evaluator_.value(eval_grid_.front()));
    else
        values = evaluator_.values(trained);
    return expected_utility(values, eval_grid_);
}

void CurriculumDriver::train_on_steps(std::size_t steps, const WeightVector& w_c) {
    const auto& lc = cfg_.learner;
    for (std::size_t i = 0; i < steps; ++i)
        for (int b = 0; b < lc.train_batches_per_step; ++b)
            train_batch(q_, buffer_, w_c, lc.alpha, env_.spec().gamma, lc.batch_size, rng_);
}

void CurriculumDriver::emit_eval(std::uint64_t nominal_step) {
    MetricsLog::EvalRecord r;
    r.global_step = nominal_step;
    r.eval_step = state_.eval_step;
    r.eu = evaluate_eu();
    r.ccs_size = repo_.ccs.entries.size();
    r.active_demos = repo_.active_count();
    r.w_c = state_.w_c.dim() == 0 ? "-" : state_.w_c.to_string();
    r.h_final = state_.h;
    r.beta = state_.beta;
    r.round = state_.round;
    log_.eval(r);
    last_nominal_ = nominal_step;
    any_eval_ = true;
    last_eu_ = r.eu;
}

void CurriculumDriver::emit_eval_crossings() {
    while (next_eval_ <= state_.global_step) {
        emit_eval(next_eval_);
        next_eval_ += cfg_.eval_period;
    }
}

void CurriculumDriver::log_round_corners() {
    const std::vector<ValueVector> demo_values = repo_.active_values();
    CornerWeightSet corners = corner_weights(repo_.ccs_values());
    for (const auto& w : corners.weights) {
        double best = max_utility_over_set(demo_values, w).first;
        MetricsLog::CornerRecord rec;
        rec.round = state_.round;
        rec.w = w.to_string();
        rec.max_demo_utility = best;
        log_.corner(rec);
        auto it = corner_max_.find(rec.w);
        // Absorbing or pruning demos never lowers the envelope at a corner.
        assert(it == corner_max_.end() || best >= it->second);
        if (it == corner_max_.end())
            corner_max_.emplace(rec.w, best);
        else
            it->second = std::max(it->second, best);
    }
}

void CurriculumDriver::run_round() {
    if (state_.global_step >= cfg_.max_steps) {
        state_.budget_exhausted = true;
        return;
    }

    log_round_corners();

    std::vector<ValueVector> agent_values;
    if (!q_.trained_weights().empty()) agent_values = evaluator_.values(q_.trained_weights());
    const WeightVector w_c = candidate_weight(repo_.ccs, agent_values);
    const double u_e =
        agent_values.empty() ? 0.0 : max_utility_over_set(agent_values, w_c).first;
    const Demonstration guide = repo_.demos[select_guide(repo_, w_c, u_e)];
    const double u_theta = utility(guide.value, w_c);

    state_.w_c = w_c;
    state_.u_theta = u_theta;
    state_.h = env_.spec().horizon;
    log_.round_start(state_.round, w_c.to_string(), guide.id, u_theta, state_.beta);

    int h = env_.spec().horizon;
    while (h >= 0) {
        bool advanced = false;
        for (int attempt = 0; attempt < cfg_.max_attempts_per_h; ++attempt) {
            if (state_.global_step >= cfg_.max_steps) {
                state_.budget_exhausted = true;
                return;
            }
            for (int r = 0; r < cfg_.rollouts_per_h; ++r) {
                auto roll = mixed_rollout(guide, h, w_c);
                train_on_steps(roll.steps, w_c);
                emit_eval_crossings();
            }
            auto eval = evaluate_mixed(guide, h, w_c);
            // Matching the threshold passes: with beta=1 and an optimal guide
            // the agent can at best tie, and the tie is what hands control over.
            if (eval.utility_wc >= u_theta * state_.beta) {
                int next_h = h - cfg_.delta_h;
                log_.rollback(state_.round, h, next_h, eval.utility_wc, u_theta, state_.beta);
                if (cfg_.self_evolving) {
                    bool active = absorb(repo_, eval.actions, eval.value, state_.round);
                    log_.absorbed(state_.round, demo_id(repo_.env_id, eval.actions), active);
                }
                h = next_h;
                state_.h = h;
                advanced = true;
                break;
            }
        }
        if (!advanced) break;
    }

    prune_repo(repo_);
    ++state_.round;
    state_.beta = update_beta(cfg_.beta, state_.round);
}

void CurriculumDriver::run() {
    log_.header(env_.id(), cfg_.seed);
    if (cfg_.max_steps == 0) {
        emit_eval(0);
    } else {
        while (!state_.budget_exhausted && state_.global_step < cfg_.max_steps) run_round();
        if (!any_eval_ || last_nominal_ < cfg_.max_steps) emit_eval(state_.global_step);
    }
    log_.summary(state_.global_step, state_.eval_step, last_eu_, state_.round,
                 repo_.ccs.entries.size(), repo_.active_count());
}

MetricsLog train(Env& env, const std::vector<std::vector<int>>& demo_actions,
                 const CurriculumConfig& cfg) {
    DemoRepository repo = init_repository(env, demo_actions);
    CurriculumDriver driver(env, std::move(repo), cfg);
    driver.run();
    return std::move(driver.log());
}

double evaluate_eu(QTable& q, Env& env, const std::vector<WeightVector>& eval_weights) {
    if (eval_weights.empty()) fail(Errc::empty_input, "expected utility needs eval weights");
    PolicyEvaluator evaluator(q, env, nullptr);
    const auto& trained = q.trained_weights();
    std::vector<ValueVector> values;
    if (trained.empty())
        values.push_back(evaluator.value(eval_weights.front()));
    else
        values = evaluator.values(trained);
    return expected_utility(values, eval_weights);
}

} // namespace dgmorl
