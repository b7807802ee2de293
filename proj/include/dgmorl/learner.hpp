#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <unordered_map>
#include <vector>

#include "dgmorl/env.hpp"
#include "dgmorl/types.hpp"

namespace dgmorl {

using Rng = std::mt19937_64;

/// Uniform double in [0,1) drawn deterministically from the generator.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Weight vector quantized to a 1e-6 grid; used to condition Q-tables so a
/// corner weight reached twice trains the same table.
struct WeightKey {
    std::vector<std::int64_t> q;

    static WeightKey of(const WeightVector& w);
    bool operator==(const WeightKey&) const = default;
    bool operator<(const WeightKey& o) const { return q < o.q; }
};

struct WeightKeyHash {
    std::size_t operator()(const WeightKey& k) const;
};

/// Linear anneal: eps(step) = max(end, start - (start-end) * step / anneal).
struct EpsilonSchedule {
    double start = 1.0;
    double end = 0.0;
    std::uint64_t anneal_steps = 50000;

    double at(std::uint64_t step) const;
    void validate() const;
};

/// Zero-initialized tabular vector value estimates, one independent table per
/// conditioning weight key. Rows are flat [action][objective] arrays.
class QTable {
public:
    QTable(int action_count, int objective_count);

    int action_count() const { return actions_; }
    int objective_count() const { return dim_; }

    /// Estimated value row for (key, state, action); zeros when untouched.
    std::span<const double> row(const WeightKey& key, StateId s, int action) const;

    /// Monotone counter bumped on every update; cache invalidation token.
    std::uint64_t version() const { return version_; }

    /// Weight keys that received at least one update, in first-update order.
    const std::vector<WeightKey>& trained_keys() const { return trained_; }

    /// Exact conditioning weights behind trained_keys(), same order. Kept so
    /// policies can be re-evaluated under the identical floats they were
    /// trained with (quantized keys alone are lossy).
    const std::vector<WeightVector>& trained_weights() const { return trained_weights_; }

    /// Sorted deterministic dump, one line per non-zero row.
    std::string dump() const;

    friend double update_keyed(QTable& q, const Transition& t, const WeightKey& key,
                               const WeightVector& w, double alpha, double gamma);

private:
    std::span<double> ensure_row(const WeightKey& key, StateId s, int action);

    int actions_;
    int dim_;
    std::uint64_t version_ = 0;
    std::unordered_map<WeightKey, std::unordered_map<StateId, std::vector<double>>, WeightKeyHash>
        tables_;
    std::vector<WeightKey> trained_;
    std::vector<WeightVector> trained_weights_;
    static const std::vector<double> zero_row_;
};

/// Argmax of utility(Q(s,a), w); ties resolve to the lowest action index.
int greedy_action(const QTable& q, StateId s, const WeightVector& w);

/// Epsilon-greedy action under the schedule at `step`.
int act_epsilon(const QTable& q, StateId s, const WeightVector& w, const EpsilonSchedule& sched,
                std::uint64_t step, Rng& rng);

/// Vector TD update with greedy bootstrap under the same weight; terminal
/// transitions bootstrap zero. Returns the max-norm of the TD error.
double update(QTable& q, const Transition& t, const WeightVector& w, double alpha, double gamma);

/// Same update with the quantized key precomputed (hot-loop variant).
double update_keyed(QTable& q, const Transition& t, const WeightKey& key, const WeightVector& w,
                    double alpha, double gamma);

/// Uniform FIFO replay of (transition, conditioning weight) pairs.
class ReplayBuffer {
public:
    struct Item {
        Transition transition;
        WeightVector weight;
        WeightKey key;
    };

    explicit ReplayBuffer(std::size_t capacity);

    void push(Transition t, const WeightVector& w);
    const Item& sample(Rng& rng) const;
    std::size_t size() const { return items_.size(); }
    std::size_t capacity() const { return capacity_; }

private:
    std::size_t capacity_;
    std::size_t next_ = 0; // FIFO eviction cursor once full
    std::vector<Item> items_;
};

/// Samples `batch` transitions uniformly with replacement and updates each
/// under its stored conditioning weight, plus once under w when the keys
/// differ. Returns the mean TD magnitude over all updates applied.
double train_batch(QTable& q, const ReplayBuffer& buffer, const WeightVector& w, double alpha,
                   double gamma, std::size_t batch, Rng& rng);

/// Exact value of the greedy policy conditioned on w (deterministic rollout).
ValueVector policy_value(QTable& q, Env& env, const WeightVector& w);

/// Greedy-policy values with caching per (table version, weight key).
/// Environment steps spent on cache misses accumulate into *eval_steps.
class PolicyEvaluator {
public:
    PolicyEvaluator(QTable& q, Env& env, std::uint64_t* eval_steps);

    ValueVector value(const WeightVector& w);
    std::vector<ValueVector> values(const std::vector<WeightVector>& weights);

private:
    QTable& q_;
    Env& env_;
    std::uint64_t* eval_steps_;
    std::uint64_t cached_version_ = 0;
    std::map<WeightKey, ValueVector> cache_;
};

} // namespace dgmorl
