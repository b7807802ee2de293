#include "dgmorl/learner.hpp"

#include <algorithm>
#include <cmath>

#include "dgmorl/error.hpp"
#include "dgmorl/text.hpp"

namespace dgmorl {

const std::vector<double> QTable::zero_row_(8, 0.0);

WeightKey WeightKey::of(const WeightVector& w) {
    WeightKey k;
    k.q.reserve(w.dim());
    for (double x : w.components()) k.q.push_back(std::llround(x * 1e6));
    return k;
}

std::size_t WeightKeyHash::operator()(const WeightKey& k) const {
    return static_cast<std::size_t>(fnv1a(k.q.data(), k.q.size() * sizeof(std::int64_t)));
}

double EpsilonSchedule::at(std::uint64_t step) const {
    if (anneal_steps == 0) return end;
    double frac = static_cast<double>(step) / static_cast<double>(anneal_steps);
    return std::max(end, start - (start - end) * frac);
}

void EpsilonSchedule::validate() const {
    if (!(0.0 <= end && end <= start && start <= 1.0))
        fail(Errc::invalid_schedule, "epsilon schedule needs 0 <= end <= start <= 1");
}

QTable::QTable(int action_count, int objective_count)
    : actions_(action_count), dim_(objective_count) {
    if (action_count < 1 || objective_count < 2 || objective_count > 8)
        fail(Errc::invalid_argument, "QTable needs actions >= 1 and 2 <= objectives <= 8");
}

std::span<const double> QTable::row(const WeightKey& key, StateId s, int action) const {
    auto t = tables_.find(key);
    if (t != tables_.end()) {
        auto r = t->second.find(s);
        if (r != t->second.end())
            return {r->second.data() + static_cast<std::size_t>(action) * dim_,
                    static_cast<std::size_t>(dim_)};
    }
    return {zero_row_.data(), static_cast<std::size_t>(dim_)};
}

std::span<double> QTable::ensure_row(const WeightKey& key, StateId s, int action) {
    auto& sub = tables_[key];
    auto it = sub.find(s);
    if (it == sub.end())
        it = sub.emplace(s, std::vector<double>(static_cast<std::size_t>(actions_) * dim_, 0.0)).first;
    return {it->second.data() + static_cast<std::size_t>(action) * dim_,
            static_cast<std::size_t>(dim_)};
}

std::string QTable::dump() const {
    std::vector<std::string> lines;
    for (const auto& [key, sub] : tables_) {
        std::string kstr;
        for (auto v : key.q) kstr += std::to_string(v) + ",";
        for (const auto& [s, rows] : sub)
            for (int a = 0; a < actions_; ++a) {
                bool all_zero = true;
                for (int i = 0; i < dim_; ++i)
                    if (rows[static_cast<std::size_t>(a) * dim_ + i] != 0.0) all_zero = false;
                if (all_zero) continue;
                std::string line = kstr + " s=" + std::to_string(s) + " a=" + std::to_string(a) + " q=";
                for (int i = 0; i < dim_; ++i)
                    line += format_double(rows[static_cast<std::size_t>(a) * dim_ + i]) + " ";
                lines.push_back(std::move(line));
            }
    }
    std::sort(lines.begin(), lines.end());
    std::string out;
    for (auto& l : lines) {
        out += l;
        out += '\n';
    }
    return out;
}

namespace {

int greedy_with_key(const QTable& q, StateId s, const WeightKey& key, const WeightVector& w) {
    int best = 0;
    double best_u = -HUGE_VAL;
    for (int a = 0; a < q.action_count(); ++a) {
        auto r = q.row(key, s, a);
        double u = 0.0;
        for (std::size_t i = 0; i < r.size(); ++i) u += r[i] * w[i];
        if (u > best_u) {
            best_u = u;
            best = a;
        }
    }
    return best;
}

} // namespace

int greedy_action(const QTable& q, StateId s, const WeightVector& w) {
    return greedy_with_key(q, s, WeightKey::of(w), w);
}

int act_epsilon(const QTable& q, StateId s, const WeightVector& w, const EpsilonSchedule& sched,
                std::uint64_t step, Rng& rng) {
    sched.validate();
    double eps = sched.at(step);
    if (uniform01(rng) < eps)
        return static_cast<int>(rng() % static_cast<std::uint64_t>(q.action_count()));
    return greedy_action(q, s, w);
}

double update_keyed(QTable& q, const Transition& t, const WeightKey& key, const WeightVector& w,
                    double alpha, double gamma) {
    const std::size_t d = static_cast<std::size_t>(q.dim_);
    if (!(alpha > 0.0 && alpha <= 1.0)) fail(Errc::invalid_argument, "update: alpha must be in (0, 1]");
    if (t.reward.dim() != d) fail(Errc::dimension_mismatch, "update: reward dimension mismatch");

    double target[8];
    for (std::size_t i = 0; i < d; ++i) target[i] = t.reward[i];
    if (!t.terminal) {
        int a_next = greedy_with_key(q, t.next_state, key, w);
        auto next = q.row(key, t.next_state, a_next);
        for (std::size_t i = 0; i < d; ++i) target[i] += gamma * next[i];
    }

    bool first_touch = q.tables_.find(key) == q.tables_.end();
    auto row = q.ensure_row(key, t.state, t.action);
    double max_abs = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        double td = target[i] - row[i];
        row[i] += alpha * td;
        max_abs = std::max(max_abs, std::abs(td));
    }
    if (first_touch) {
        q.trained_.push_back(key);
        q.trained_weights_.push_back(w);
    }
    ++q.version_;
    return max_abs;
}

double update(QTable& q, const Transition& t, const WeightVector& w, double alpha, double gamma) {
    return update_keyed(q, t, WeightKey::of(w), w, alpha, gamma);
}

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
    if (capacity == 0) fail(Errc::invalid_argument, "replay buffer capacity must be positive");
    items_.reserve(std::min<std::size_t>(capacity, 1 << 16));
}

void ReplayBuffer::push(Transition t, const WeightVector& w) {
    Item item{std::move(t), w, WeightKey::of(w)};
    if (items_.size() < capacity_) {
        items_.push_back(std::move(item));
    } else {
        items_[next_] = std::move(item);
        next_ = (next_ + 1) % capacity_;
    }
}

const ReplayBuffer::Item& ReplayBuffer::sample(Rng& rng) const {
    if (items_.empty()) fail(Errc::empty_buffer, "sampling from an empty replay buffer");
    return items_[static_cast<std::size_t>(rng() % items_.size())];
}

double train_batch(QTable& q, const ReplayBuffer& buffer, const WeightVector& w, double alpha,
                   double gamma, std::size_t batch, Rng& rng) {
    if (batch == 0) return 0.0;
    if (buffer.size() == 0) fail(Errc::empty_buffer, "train_batch on an empty buffer");
    WeightKey wkey = WeightKey::of(w);
    double total = 0.0;
    std::size_t updates = 0;
    for (std::size_t i = 0; i < batch; ++i) {
        const auto& item = buffer.sample(rng);
        total += update_keyed(q, item.transition, item.key, item.weight, alpha, gamma);
        ++updates;
        if (!(item.key == wkey)) {
            total += update_keyed(q, item.transition, wkey, w, alpha, gamma);
            ++updates;
        }
    }
    return total / static_cast<double>(updates);
}

ValueVector policy_value(QTable& q, Env& env, const WeightVector& w) {
    auto [traj, value] = rollout(env, [&](StateId s) { return greedy_action(q, s, w); });
    return value;
}

PolicyEvaluator::PolicyEvaluator(QTable& q, Env& env, std::uint64_t* eval_steps)
    : q_(q), env_(env), eval_steps_(eval_steps) {}

ValueVector PolicyEvaluator::value(const WeightVector& w) {
    if (q_.version() != cached_version_) {
        cache_.clear();
        cached_version_ = q_.version();
    }
    WeightKey key = WeightKey::of(w);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    auto [traj, value] = rollout(env_, [&](StateId s) { return greedy_action(q_, s, w); });
    if (eval_steps_) *eval_steps_ += traj.size();
    cache_.emplace(std::move(key), value);
    return value;
}

std::vector<ValueVector> PolicyEvaluator::values(const std::vector<WeightVector>& weights) {
    std::vector<ValueVector> out;
    out.reserve(weights.size());
    for (const auto& w : weights) out.push_back(value(w));
    return out;
}

} // namespace dgmorl
