#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dgmorl/demo_store.hpp"
#include "dgmorl/env.hpp"
#include "dgmorl/learner.hpp"
#include "dgmorl/metrics.hpp"
#include "dgmorl/mo_core.hpp"

namespace dgmorl {

/// Per-round passing percentage: beta(round) = min(end, start + (end-start) * round / ramp).
struct BetaSchedule {
    double start = 1.0;
    double end = 1.0;
    int ramp_rounds = 9;

    void validate() const;
};

double update_beta(const BetaSchedule& schedule, int round);

struct LearnerConfig {
    double alpha = 0.1;
    std::size_t batch_size = 128;
    std::size_t buffer_capacity = 100000;
    EpsilonSchedule epsilon{1.0, 0.0, 50000};
    int train_batches_per_step = 1;

    void validate() const;
};

struct CurriculumConfig {
    std::uint64_t max_steps = 40000;
    int delta_h = 2; // rollback span
    BetaSchedule beta;
    std::uint64_t eval_period = 4000;
    int rollouts_per_h = 1;
    int max_attempts_per_h = 50;
    std::size_t eval_weight_count = 100;
    std::uint64_t seed = 42;
    bool self_evolving = true;
    LearnerConfig learner;

    void validate() const;
};

struct CurriculumState {
    int round = 0;
    double beta = 1.0;
    int h = 0;
    WeightVector w_c;
    double u_theta = 0.0;
    std::uint64_t global_step = 0;
    std::uint64_t eval_step = 0;
    bool budget_exhausted = false;
};

/// Corner weight maximizing the utility shortfall between the demo CCS and
/// the agent's own value set. An empty agent set counts as utility 0
/// (zero-initialized tables). Ties resolve to the first corner in the
/// deterministic corner order.
WeightVector candidate_weight(const CcsSet& ccs, const std::vector<ValueVector>& agent_values);

struct MixedRolloutResult {
    std::vector<int> actions;
    ValueVector value;
    std::size_t steps = 0;
    double utility_wc = 0.0;
};

/// Outer/inner loop driver: pick a corner weight, follow the guide for the
/// first h steps and explore after, roll h back on evaluated improvement,
/// absorb self-evolved demonstrations, prune, advance beta.
class CurriculumDriver {
public:
    CurriculumDriver(Env& env, DemoRepository repo, const CurriculumConfig& cfg);

    /// Training rollout: guide actions for the first h steps (all of the
    /// guide if it is shorter), epsilon-greedy exploration after. Every
    /// transition is pushed to the replay buffer tagged with w_c.
    MixedRolloutResult mixed_rollout(const Demonstration& guide, int h, const WeightVector& w_c);

    /// Greedy variant without buffer writes or step-budget consumption.
    MixedRolloutResult evaluate_mixed(const Demonstration& guide, int h, const WeightVector& w_c);

    /// Expected utility of the exploration policy alone over the eval grid.
    double evaluate_eu();

    void run_round();
    void run();

    const CurriculumState& state() const { return state_; }
    const DemoRepository& repository() const { return repo_; }
    const std::vector<WeightVector>& eval_grid() const { return eval_grid_; }
    QTable& qtable() { return q_; }
    MetricsLog& log() { return log_; }
    Rng& rng() { return rng_; }

private:
    void train_on_steps(std::size_t steps, const WeightVector& w_c);
    void emit_eval_crossings();
    void emit_eval(std::uint64_t nominal_step);
    void log_round_corners();

    Env& env_;
    DemoRepository repo_;
    CurriculumConfig cfg_;
    QTable q_;
    ReplayBuffer buffer_;
    Rng rng_;
    std::vector<WeightVector> eval_grid_;
    CurriculumState state_;
    PolicyEvaluator evaluator_; // counts its rollouts into state_.eval_step
    MetricsLog log_;
    std::uint64_t next_eval_ = 0;
    std::uint64_t last_nominal_ = 0;
    bool any_eval_ = false;
    double last_eu_ = 0.0;
    std::map<std::string, double> corner_max_; // printed corner -> best demo utility seen
};

/// End-to-end training entry point.
MetricsLog train(Env& env, const std::vector<std::vector<int>>& demo_actions,
                 const CurriculumConfig& cfg);

/// Expected utility of the greedy policies for every trained weight of q,
/// mean-maxed over the eval grid. An untrained table evaluates the single
/// zero-initialized policy.
double evaluate_eu(QTable& q, Env& env, const std::vector<WeightVector>& eval_weights);

} // namespace dgmorl
