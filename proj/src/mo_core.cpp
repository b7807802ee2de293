#include "dgmorl/mo_core.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "dgmorl/text.hpp"

namespace dgmorl {

namespace {

constexpr double kCornerTol = 1e-9;

std::size_t checked_dim(const std::vector<ValueVector>& values) {
    if (values.empty()) fail(Errc::empty_input, "empty value set");
    std::size_t d = values[0].dim();
    for (const auto& v : values)
        if (v.dim() != d) fail(Errc::dimension_mismatch, "mixed dimensions in value set");
    return d;
}

std::uint64_t hash_values(const std::vector<ValueVector>& values) {
    std::uint64_t h = fnv1a("corner-source");
    for (const auto& v : values)
        for (double x : v.components()) {
            std::uint64_t bits;
            std::memcpy(&bits, &x, sizeof bits);
            h = fnv1a(&bits, sizeof bits, h);
        }
    return h;
}

double max_utility_at(const std::vector<ValueVector>& values, std::span<const double> w) {
    double best = -HUGE_VAL;
    for (const auto& v : values) {
        double u = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) u += v[i] * w[i];
        best = std::max(best, u);
    }
    return best;
}

double utility_at(const ValueVector& v, std::span<const double> w) {
    double u = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) u += v[i] * w[i];
    return u;
}

// Clamps rounding-level negatives, renormalizes, rejects genuinely infeasible
// points (components below -kCornerTol).
bool to_simplex_point(std::vector<double>& w) {
    double sum = 0.0;
    for (double& x : w) {
        if (x < -kCornerTol) return false;
        if (x < 0.0) x = 0.0;
        sum += x;
    }
    if (sum <= 0.0) return false;
    for (double& x : w) x /= sum;
    return true;
}

struct CandidateSink {
    std::vector<std::vector<double>> points;

    void add(std::vector<double> w) {
        for (const auto& p : points) {
            double diff = 0.0;
            for (std::size_t i = 0; i < w.size(); ++i) diff = std::max(diff, std::abs(p[i] - w[i]));
            if (diff < kCornerTol) return;
        }
        points.push_back(std::move(w));
    }
};

void corners_2d(const std::vector<ValueVector>& values, CandidateSink& sink) {
    sink.add({1.0, 0.0});
    sink.add({0.0, 1.0});
    const std::size_t n = values.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            // v . (t, 1-t) is linear in t; equal utility at t = num / den.
            double si = values[i][0] - values[i][1];
            double sj = values[j][0] - values[j][1];
            double den = si - sj;
            double num = values[j][1] - values[i][1];
            double scale = std::max({1.0, std::abs(si), std::abs(sj)});
            if (std::abs(den) < 1e-12 * scale) continue;
            double t = num / den;
            if (t < -kCornerTol || t > 1.0 + kCornerTol) continue;
            std::vector<double> w{t, 1.0 - t};
            if (!to_simplex_point(w)) continue;
            double best = max_utility_at(values, w);
            if (utility_at(values[i], w) < best - kCornerTol) continue;
            if (utility_at(values[j], w) < best - kCornerTol) continue;
            sink.add(std::move(w));
        }
    }
}

// A linear functional f . w = 0 over the simplex plane, plus the indices of
// the value vectors it ties (empty for boundary faces w_k = 0).
struct Constraint {
    double f[3];
    int tied_a = -1;
    int tied_b = -1;
};

bool solve3(const Constraint& c1, const Constraint& c2, std::vector<double>& w) {
    // Rows: c1, c2, and the simplex plane sum(w) = 1.
    double m[3][3] = {
        {c1.f[0], c1.f[1], c1.f[2]},
        {c2.f[0], c2.f[1], c2.f[2]},
        {1.0, 1.0, 1.0},
    };
    double rhs[3] = {0.0, 0.0, 1.0};
    double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                 m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                 m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    double scale = 0.0;
    for (auto& row : m)
        for (double x : row) scale = std::max(scale, std::abs(x));
    if (std::abs(det) < 1e-12 * std::max(1.0, scale * scale * scale)) return false;
    for (int k = 0; k < 3; ++k) {
        double mk[3][3];
        std::memcpy(mk, m, sizeof m);
        for (int r = 0; r < 3; ++r) mk[r][k] = rhs[r];
        double dk = mk[0][0] * (mk[1][1] * mk[2][2] - mk[1][2] * mk[2][1]) -
                    mk[0][1] * (mk[1][0] * mk[2][2] - mk[1][2] * mk[2][0]) +
                    mk[0][2] * (mk[1][0] * mk[2][1] - mk[1][1] * mk[2][0]);
        w[k] = dk / det;
    }
    return true;
}

void corners_3d(const std::vector<ValueVector>& values, CandidateSink& sink) {
    sink.add({1.0, 0.0, 0.0});
    sink.add({0.0, 1.0, 0.0});
    sink.add({0.0, 0.0, 1.0});

    std::vector<Constraint> cons;
    const std::size_t n = values.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            Constraint c;
            for (int k = 0; k < 3; ++k) c.f[k] = values[i][k] - values[j][k];
            c.tied_a = static_cast<int>(i);
            c.tied_b = static_cast<int>(j);
            cons.push_back(c);
        }
    for (int k = 0; k < 3; ++k) {
        Constraint c{{0.0, 0.0, 0.0}, -1, -1};
        c.f[k] = 1.0;
        cons.push_back(c);
    }

    std::vector<double> w(3);
    for (std::size_t a = 0; a < cons.size(); ++a) {
        for (std::size_t b = a + 1; b < cons.size(); ++b) {
            if (!solve3(cons[a], cons[b], w)) continue;
            std::vector<double> p = w;
            if (!to_simplex_point(p)) continue;
            double best = max_utility_at(values, p);
            bool feasible = true;
            for (const Constraint* c : {&cons[a], &cons[b]}) {
                if (c->tied_a < 0) continue;
                if (utility_at(values[static_cast<std::size_t>(c->tied_a)], p) < best - kCornerTol ||
                    utility_at(values[static_cast<std::size_t>(c->tied_b)], p) < best - kCornerTol) {
                    feasible = false;
                    break;
                }
            }
            if (feasible) sink.add(std::move(p));
        }
    }
}

} // namespace

bool pareto_dominates(const ValueVector& a, const ValueVector& b) {
    if (a.dim() != b.dim()) fail(Errc::dimension_mismatch, "pareto_dominates: dimension mismatch");
    bool strict = false;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        if (a[i] < b[i]) return false;
        if (a[i] > b[i]) strict = true;
    }
    return strict;
}

std::vector<CcsEntry> pareto_prune(std::vector<CcsEntry> entries) {
    const std::size_t n = entries.size();
    if (n == 0) return entries;
    std::size_t d = entries[0].value.dim();
    for (const auto& e : entries)
        if (e.value.dim() != d) fail(Errc::dimension_mismatch, "pareto_prune: mixed dimensions");

    std::vector<bool> keep(n, true);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n && keep[i]; ++j) {
            if (i == j || !keep[j]) continue;
            if (entries[j].value == entries[i].value) {
                if (j < i) keep[i] = false; // duplicate collapses to the earliest handle
            } else if (pareto_dominates(entries[j].value, entries[i].value)) {
                keep[i] = false;
            }
        }
    }
    std::vector<CcsEntry> out;
    for (std::size_t i = 0; i < n; ++i)
        if (keep[i]) out.push_back(std::move(entries[i]));
    return out;
}

CornerWeightSet corner_weights(const std::vector<ValueVector>& values) {
    std::size_t d = checked_dim(values);
    if (d != 2 && d != 3)
        fail(Errc::unsupported_dimension, "corner_weights supports d in {2,3}, got d=" + std::to_string(d));

    CandidateSink sink;
    if (d == 2)
        corners_2d(values, sink);
    else
        corners_3d(values, sink);

    std::sort(sink.points.begin(), sink.points.end(),
              [](const auto& a, const auto& b) { return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end()); });

    CornerWeightSet out;
    out.source_hash = hash_values(values);
    out.weights.reserve(sink.points.size());
    for (auto& p : sink.points) out.weights.push_back(make_weight(std::move(p)));
    return out;
}

CcsSet ccs_prune(std::vector<CcsEntry> entries) {
    if (entries.empty()) fail(Errc::empty_input, "ccs_prune: empty input");
    std::vector<CcsEntry> survivors = pareto_prune(std::move(entries));

    for (;;) {
        std::vector<ValueVector> values;
        values.reserve(survivors.size());
        for (const auto& e : survivors) values.push_back(e.value);
        CornerWeightSet corners = corner_weights(values);

        std::vector<CcsEntry> kept;
        kept.reserve(survivors.size());
        for (const auto& e : survivors) {
            bool attains = false;
            for (const auto& w : corners.weights) {
                double best = max_utility_at(values, w.components());
                if (utility(e.value, w) >= best - kCornerTol) {
                    attains = true;
                    break;
                }
            }
            if (attains) kept.push_back(e);
        }
        if (kept.size() == survivors.size()) break;
        survivors = std::move(kept);
    }
    return CcsSet{std::move(survivors)};
}

std::pair<double, std::size_t> max_utility_over_set(const std::vector<ValueVector>& values,
                                                    const WeightVector& w) {
    if (values.empty()) fail(Errc::empty_input, "max_utility_over_set: empty value set");
    double best = utility(values[0], w);
    std::size_t arg = 0;
    for (std::size_t i = 1; i < values.size(); ++i) {
        double u = utility(values[i], w);
        if (u > best) {
            best = u;
            arg = i;
        }
    }
    return {best, arg};
}

std::vector<WeightVector> equidistant_weights(std::size_t dim, std::size_t n) {
    std::vector<WeightVector> out;
    if (dim == 2) {
        if (n < 2) fail(Errc::invalid_count, "equidistant_weights: d=2 needs n >= 2");
        out.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            double t = static_cast<double>(i) / static_cast<double>(n - 1);
            out.push_back(make_weight({t, 1.0 - t}));
        }
    } else if (dim == 3) {
        if (n < 1) fail(Errc::invalid_count, "equidistant_weights: n >= 1 required");
        std::size_t m = 1;
        while ((m + 1) * (m + 2) / 2 < n) ++m;
        double dm = static_cast<double>(m);
        for (std::size_t i = 0; i <= m; ++i)
            for (std::size_t j = 0; j + i <= m; ++j) {
                std::size_t k = m - i - j;
                out.push_back(make_weight({static_cast<double>(i) / dm,
                                           static_cast<double>(j) / dm,
                                           static_cast<double>(k) / dm}));
            }
    } else {
        fail(Errc::unsupported_dimension, "equidistant_weights supports d in {2,3}");
    }
    return out;
}

double expected_utility(const std::vector<ValueVector>& values,
                        const std::vector<WeightVector>& eval_weights) {
    checked_dim(values);
    if (eval_weights.empty()) fail(Errc::empty_input, "expected_utility: empty weight grid");
    double sum = 0.0;
    for (const auto& w : eval_weights) sum += max_utility_over_set(values, w).first;
    return sum / static_cast<double>(eval_weights.size());
}

} // namespace dgmorl
