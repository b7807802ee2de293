#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <set>
#include <vector>

#include "doctest.h"

#include "dgmorl/mo_core.hpp"
#include "dgmorl/types.hpp"
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

std::vector<CcsEntry> entries(const std::vector<ValueVector>& values) {
    std::vector<CcsEntry> out;
    for (std::size_t i = 0; i < values.size(); ++i) out.push_back({values[i], i});
    return out;
}

std::set<Handle> handles(const CcsSet& ccs) {
    std::set<Handle> out;
    for (const auto& e : ccs.entries) out.insert(e.handle);
    return out;
}

} // namespace

TEST_CASE("make_weight validates the simplex constraints") {
    WeightVector w = ww({0.5, 0.5});
    CHECK(w.dim() == 2);
    CHECK(w[0] == 0.5);

    WeightVector extreme = ww({1.0, 0.0});
    CHECK(extreme[0] == 1.0);
    CHECK(extreme[1] == 0.0);

    CHECK(has_code([] { make_weight({0.5, 0.6}); }, Errc::sum_not_one));
    CHECK(has_code([] { make_weight({1.2, -0.2}); }, Errc::negative_component));
    CHECK(has_code([] { make_weight({1.0}); }, Errc::dimension_too_small));

    // A sub-1e-9 drift is accepted and renormalized to an exact unit sum.
    WeightVector near = make_weight({1.0 / 3.0, 2.0 / 3.0});
    CHECK(near[0] + near[1] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("utility is the exact dot product") {
    CHECK(utility(vv({1, 0}), ww({1, 0})) == 1.0);
    CHECK(utility(vv({0.5, 0.5}), ww({1, 0})) == 0.5);
    CHECK(utility(vv({0.5, 0.5}), ww({0.25, 0.75})) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(utility(vv({4, 0}), ww({1.0 / 3.0, 2.0 / 3.0})) ==
          doctest::Approx(4.0 / 3.0).epsilon(1e-12));
    CHECK(has_code([] { utility(vv({1, 0, 0}), ww({0.5, 0.5})); }, Errc::dimension_mismatch));
}

TEST_CASE("pareto_dominates requires componentwise >= with one strict") {
    CHECK(pareto_dominates(vv({1, 1}), vv({0, 0})));
    CHECK_FALSE(pareto_dominates(vv({1, 0}), vv({0, 1})));
    CHECK_FALSE(pareto_dominates(vv({1, 1}), vv({1, 1})));
    CHECK(pareto_dominates(vv({1, 1}), vv({1, 0})));
    CHECK(has_code([] { pareto_dominates(vv({1, 1, 1}), vv({1, 1})); }, Errc::dimension_mismatch));
}

TEST_CASE("pareto_dominates is a strict partial order on random vectors") {
    std::mt19937_64 rng(11);
    for (int iter = 0; iter < 500; ++iter) {
        std::size_t d = 2 + (rng() % 2);
        auto rand_vec = [&] {
            std::vector<double> c(d);
            for (auto& x : c) x = testsup::urand(rng, -10, 10);
            return vv(std::move(c));
        };
        ValueVector a = rand_vec(), b = rand_vec(), c = rand_vec();
        CHECK_FALSE(pareto_dominates(a, a)); // irreflexive
        if (pareto_dominates(a, b)) CHECK_FALSE(pareto_dominates(b, a)); // antisymmetric
        if (pareto_dominates(a, b) && pareto_dominates(b, c))
            CHECK(pareto_dominates(a, c)); // transitive
    }
}

TEST_CASE("pareto_prune keeps exactly the nondominated entries in order") {
    auto survivors = pareto_prune(entries({vv({1, 0}), vv({0, 1}), vv({0.2, 0.2})}));
    REQUIRE(survivors.size() == 3); // [0.2,0.2] is incomparable to both extremes
    CHECK(survivors[0].value == vv({1, 0}));
    CHECK(survivors[1].value == vv({0, 1}));
    CHECK(survivors[2].value == vv({0.2, 0.2}));

    auto dominated = pareto_prune(entries({vv({2, 2}), vv({1, 1})}));
    REQUIRE(dominated.size() == 1);
    CHECK(dominated[0].value == vv({2, 2}));

    auto single = pareto_prune(entries({vv({1, 0})}));
    REQUIRE(single.size() == 1);

    // Duplicate values collapse to the earliest handle; order is preserved.
    auto dup = pareto_prune({{vv({0, 1}), 7}, {vv({1, 0}), 8}, {vv({0, 1}), 9}});
    REQUIRE(dup.size() == 2);
    CHECK(dup[0].handle == 7);
    CHECK(dup[1].handle == 8);

    CHECK(has_code([&] { pareto_prune(entries({vv({1, 0}), vv({1, 0, 0})})); },
                   Errc::dimension_mismatch));
}

TEST_CASE("corner_weights solves the d=2 envelope vertices") {
    auto two = corner_weights({vv({1, 0}), vv({0, 1})});
    REQUIRE(two.weights.size() == 3);
    CHECK(two.weights[0] == ww({1, 0})); // descending lexicographic order
    CHECK(two.weights[1][0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(two.weights[2] == ww({0, 1}));

    auto scaled = corner_weights({vv({4, 0}), vv({0, 2})});
    REQUIRE(scaled.weights.size() == 3);
    CHECK(scaled.weights[1][0] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

    auto single = corner_weights({vv({1, 1})});
    REQUIRE(single.weights.size() == 2); // only the simplex extrema

    CHECK(has_code([] { corner_weights({}); }, Errc::empty_input));
    CHECK(has_code([] { corner_weights({vv({1, 0, 0, 0})}); }, Errc::unsupported_dimension));
}

TEST_CASE("corner_weights solves the d=3 envelope vertices") {
    auto units = corner_weights({vv({1, 0, 0}), vv({0, 1, 0}), vv({0, 0, 1})});
    // Envelope max(w1,w2,w3): three extrema, three edge midpoints, one center.
    REQUIRE(units.weights.size() == 7);
    auto contains = [&](std::vector<double> p) {
        return std::any_of(units.weights.begin(), units.weights.end(), [&](const WeightVector& w) {
            for (std::size_t i = 0; i < 3; ++i)
                if (std::abs(w[i] - p[i]) > 1e-9) return false;
            return true;
        });
    };
    CHECK(contains({1, 0, 0}));
    CHECK(contains({0, 1, 0}));
    CHECK(contains({0, 0, 1}));
    CHECK(contains({0.5, 0.5, 0}));
    CHECK(contains({0.5, 0, 0.5}));
    CHECK(contains({0, 0.5, 0.5}));
    CHECK(contains({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}));

    auto lone = corner_weights({vv({1, 1, 1})});
    CHECK(lone.weights.size() == 3);
}

TEST_CASE("ccs_prune matches the closed convex-coverage definition") {
    auto dropped = ccs_prune(entries({vv({1, 0}), vv({0, 1}), vv({0.4, 0.4})}));
    CHECK(handles(dropped) == std::set<Handle>{0, 1});

    auto tied = ccs_prune(entries({vv({1, 0}), vv({0, 1}), vv({0.5, 0.5})}));
    CHECK(handles(tied) == std::set<Handle>{0, 1, 2}); // tie at (0.5,0.5) is kept

    auto dominated = ccs_prune(entries({vv({2, 2}), vv({1, 1})}));
    CHECK(handles(dominated) == std::set<Handle>{0});

    // d=3: a uniform vector beats the extremes near the simplex center.
    auto mid3 = ccs_prune(entries({vv({1, 0, 0}), vv({0, 1, 0}), vv({0, 0, 1}), vv({0.4, 0.4, 0.4})}));
    CHECK(handles(mid3) == std::set<Handle>{0, 1, 2, 3});
    auto low3 = ccs_prune(entries({vv({1, 0, 0}), vv({0, 1, 0}), vv({0, 0, 1}), vv({0.3, 0.3, 0.3})}));
    CHECK(handles(low3) == std::set<Handle>{0, 1, 2});

    CHECK(has_code([] { ccs_prune({}); }, Errc::empty_input));
}

TEST_CASE("ccs_prune is idempotent on random sets") {
    for (const auto& c : testsup::random_value_sets(60, 17)) {
        auto once = ccs_prune(entries(c.values));
        std::vector<CcsEntry> again_in;
        for (const auto& e : once.entries) again_in.push_back(e);
        auto twice = ccs_prune(again_in);
        REQUIRE(twice.entries.size() == once.entries.size());
        for (std::size_t i = 0; i < once.entries.size(); ++i)
            CHECK(twice.entries[i].value == once.entries[i].value);
    }
}

TEST_CASE("max_utility_over_set breaks ties toward the lowest index") {
    auto [u1, i1] = max_utility_over_set({vv({1, 0}), vv({0, 1})}, ww({1, 0}));
    CHECK(u1 == 1.0);
    CHECK(i1 == 0);

    auto [u2, i2] = max_utility_over_set({vv({1, 0}), vv({0, 1})}, ww({0.5, 0.5}));
    CHECK(u2 == 0.5);
    CHECK(i2 == 0);

    auto [u3, i3] = max_utility_over_set({vv({4, 0}), vv({0, 2})}, ww({1.0 / 3.0, 2.0 / 3.0}));
    CHECK(u3 == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
    CHECK(i3 == 0);

    CHECK(has_code([] { max_utility_over_set({}, ww({1, 0})); }, Errc::empty_input));
}

TEST_CASE("equidistant_weights builds the documented grids") {
    auto three = equidistant_weights(2, 3);
    REQUIRE(three.size() == 3);
    CHECK(three[0] == ww({0, 1}));
    CHECK(three[1][0] == 0.5);
    CHECK(three[2] == ww({1, 0}));

    auto grid = equidistant_weights(2, 100);
    REQUIRE(grid.size() == 100);
    CHECK(grid.front()[0] == 0.0);
    CHECK(grid.back()[0] == 1.0);
    CHECK(grid[1][0] == doctest::Approx(1.0 / 99.0).epsilon(1e-15));

    auto lattice = equidistant_weights(3, 100);
    CHECK(lattice.size() == 105); // smallest lattice with >= 100 points has density 13

    CHECK(has_code([] { equidistant_weights(4, 10); }, Errc::unsupported_dimension));
    CHECK(has_code([] { equidistant_weights(2, 1); }, Errc::invalid_count));
}

TEST_CASE("expected_utility averages the per-weight best response") {
    auto grid = equidistant_weights(2, 100);
    CHECK(expected_utility({vv({0.5, 0.5})}, grid) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(expected_utility({vv({1, 0})}, grid) == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(expected_utility({vv({1, 0}), vv({0, 1})}, grid) ==
          doctest::Approx(7450.0 / 9900.0).epsilon(1e-13));
    CHECK(has_code([&] { expected_utility({}, grid); }, Errc::empty_input));
    CHECK(has_code([] { expected_utility({vv({1, 0})}, {}); }, Errc::empty_input));
}

TEST_CASE("expected_utility never decreases when the policy set grows") {
    std::mt19937_64 rng(23);
    auto grid2 = equidistant_weights(2, 50);
    auto grid3 = equidistant_weights(3, 50);
    for (const auto& c : testsup::random_value_sets(40, 29)) {
        if (c.values.size() < 2) continue;
        const auto& grid = c.dim == 2 ? grid2 : grid3;
        std::vector<ValueVector> base(c.values.begin(), c.values.end() - 1);
        double before = expected_utility(base, grid);
        double after = expected_utility(c.values, grid);
        CHECK(after >= before - 1e-12);
    }
    (void)rng;
}

TEST_CASE("scalarization is linear in the value argument") {
    std::mt19937_64 rng(13);
    for (int iter = 0; iter < 200; ++iter) {
        std::size_t d = 2 + (rng() % 2);
        std::vector<double> ac(d), bc(d), wc(d);
        for (auto& x : ac) x = testsup::urand(rng, -10, 10);
        for (auto& x : bc) x = testsup::urand(rng, -10, 10);
        double sum = 0;
        for (auto& x : wc) {
            x = testsup::urand(rng, 0.01, 1.0);
            sum += x;
        }
        for (auto& x : wc) x /= sum;
        double alpha = testsup::urand(rng, -10, 10), beta = testsup::urand(rng, -10, 10);
        WeightVector w = make_weight(wc);
        std::vector<double> mix(d);
        for (std::size_t i = 0; i < d; ++i) mix[i] = alpha * ac[i] + beta * bc[i];
        double lhs = utility(vv(mix), w);
        double rhs = alpha * utility(vv(ac), w) + beta * utility(vv(bc), w);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
}

TEST_CASE("corner and grid outputs stay on the simplex") {
    for (const auto& c : testsup::random_value_sets(50, 31)) {
        auto corners = corner_weights(c.values);
        for (const auto& w : corners.weights) {
            double sum = 0.0;
            for (std::size_t i = 0; i < w.dim(); ++i) {
                CHECK(w[i] >= 0.0);
                sum += w[i];
            }
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
    for (std::size_t n : {2u, 7u, 100u}) {
        for (std::size_t d : {2u, 3u}) {
            for (const auto& w : equidistant_weights(d, n)) {
                double sum = 0.0;
                for (std::size_t i = 0; i < w.dim(); ++i) sum += w[i];
                CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("maximizers are constant between adjacent d=2 corners") {
    // Light version of the dense-grid acceptance check: the argmax index set
    // cannot change strictly inside a corner interval.
    std::mt19937_64 rng(37);
    for (const auto& c : testsup::random_value_sets(40, 41)) {
        if (c.dim != 2) continue;
        auto corners = corner_weights(c.values);
        for (std::size_t k = 0; k + 1 < corners.weights.size(); ++k) {
            double hi = corners.weights[k][0];
            double lo = corners.weights[k + 1][0]; // descending order
            if (hi - lo < 1e-7) continue;
            std::size_t expected = testsup::argmax_d2(c.values, 0.5 * (lo + hi));
            for (int s = 0; s < 25; ++s) {
                double t = testsup::urand(rng, 0.01, 0.99);
                CHECK(testsup::argmax_d2(c.values, lo + (hi - lo) * t) == expected);
            }
        }
    }
}

TEST_CASE("ccs membership agrees with a coarse grid oracle") {
    // Light version of the acceptance equivalence run (which uses 10^4 probes
    // on a 200-set corpus).
    for (const auto& c : testsup::random_value_sets(30, 43)) {
        auto pruned = ccs_prune(entries(c.values));
        auto probes = testsup::probe_grid(c.dim, c.dim == 2 ? 2001 : 1300);
        auto oracle = testsup::grid_ccs_members(c.values, probes, 1e-9);
        CHECK(handles(pruned) == oracle);
    }
}
