#include <cmath>
#include <random>

#include "doctest.h"

#include "acmdp/examples.hpp"
#include "support.hpp"

using namespace acmdp;
using acmdp::testing::make_mdp;
using acmdp::testing::random_kernel;
using acmdp::testing::random_mdp;
using R = Rational;

namespace {

// Four states, two actions, rows with denominator 12 so they sum to 1 exactly.
ExactMdp random_exact_mdp(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> pick(0, 3);
    std::vector<std::vector<ActionData<R>>> states(4);
    for (auto& acts : states)
        for (int a = 0; a < 2; ++a) {
            std::vector<R> row(4, R(0));
            for (int unit = 0; unit < 12; ++unit) row[pick(rng)] += R(1, 12);
            acts.push_back({std::to_string(a), row, R(pick(rng))});
        }
    return ExactMdp(std::move(states));
}

}  // namespace

TEST_CASE("survival probabilities of the absorbing chain") {
    CHECK(survival_closed_form(1, 0) == R(1));
    CHECK(survival_closed_form(3, 7) == R(3, 10));

    // One-step products of 1 - 1/(j+1), multiplied out independently.
    for (std::size_t k = 1; k <= 12; ++k) {
        R running(1);
        for (std::size_t n = 0; n <= 40; ++n) {
            CHECK(survival_closed_form(k, n) == running);
            running *= R(1) - R(1, static_cast<long>(k + n + 1));
        }
    }
    for (std::size_t k = 1; k <= 1000; k += 37)
        for (std::size_t n = 0; n <= 1000; n += 41) CHECK(survival_closed_form(k, n) * R(static_cast<long>(k + n)) == R(static_cast<long>(k)));
}

TEST_CASE("expected cost stays at the starting level") {
    const auto linear = harmonic_chain(AbsorbingCost::Linear);
    const auto trace = expected_cost_trace(linear, 5, 100);
    REQUIRE(trace.size() == 101);
    for (const R& v : trace) CHECK(v == R(5));

    const auto bounded = expected_cost_trace(harmonic_chain(AbsorbingCost::Bounded), 4, 30);
    for (std::size_t n = 0; n <= 30; ++n) CHECK(bounded[n] == survival_closed_form(4, n));

    // State 0 absorbs with zero cost.
    for (const R& v : expected_cost_trace(linear, 0, 10)) CHECK(v == R(0));
}

TEST_CASE("absorbing chain report") {
    SUBCASE("linear cost") {
        const auto report = absorbing_chain_report(AbsorbingCost::Linear, 30, 50);
        CHECK(report.expected_cost_identity);
        REQUIRE(report.rows.size() == 31);
        for (const auto& row : report.rows) {
            CHECK(row.g_closed_form == static_cast<double>(row.k));
            CHECK(row.expected_cost_at_horizon == static_cast<double>(row.k));
            CHECK(row.hitting_prob == doctest::Approx(1.0));
            if (row.k >= 1) CHECK(row.survival_partial == doctest::Approx(survival_partial_sum(row.k, 50)));
        }
    }
    SUBCASE("bounded cost gains vanish with the truncation") {
        for (std::size_t K : {10, 50, 200}) {
            const auto report = absorbing_chain_report(AbsorbingCost::Bounded, K, 20);
            CHECK(report.expected_cost_identity);
            CHECK(report.truncated_gain_within_bound);
            CHECK(report.max_abs_truncated_gain <= 1.0 / static_cast<double>(K));
            for (const auto& row : report.rows) CHECK(row.g_closed_form == 0.0);
        }
    }
    CHECK_THROWS_AS(absorbing_chain_report(AbsorbingCost::Linear, 1, 10), InvalidArgument);
}

TEST_CASE("partial survival sums exceed the logarithmic bound") {
    // Direct summation oracle for moderate N.
    for (std::size_t N : {10, 100, 1000}) {
        double s = 0.0;
        for (std::size_t n = 0; n < N; ++n) s += 5.0 / (5.0 + static_cast<double>(n));
        CHECK(survival_partial_sum(5, N) == doctest::Approx(s).epsilon(1e-12));
        CHECK(survival_partial_sum(5, N) >= 5.0 * std::log(static_cast<double>(N) / 5.0));
    }
    const double big = survival_partial_sum(5, 1000000);
    CHECK(big > 5.0 * std::log(1e6 / 5.0));
}

TEST_CASE("inventory walk probe") {
    InventoryWalk zero;
    SUBCASE("starting inside the interval counts as an immediate hit") {
        const auto probe = walk_recurrence_probe(zero, -1.0, 1.0, 0.5, 20, 100, 3);
        CHECK(probe.hits == 20);
        CHECK(probe.estimate == 1.0);
        for (std::size_t t : probe.hit_times) CHECK(t == 0);
    }
    SUBCASE("samples respect the declared supports") {
        SplitMix64 rng(9);
        for (int i = 0; i < 10000; ++i) {
            const double xi = zero.sample_demand(rng);
            CHECK((xi == 0.0 || xi == 2.0));
            const double a = zero.sample_action(rng);
            CHECK(a >= 0.5);
            CHECK(a <= 1.5);
        }
        InventoryWalk uniform;
        uniform.demand = DemandKind::Uniform;
        for (int i = 0; i < 1000; ++i) {
            const double xi = uniform.sample_demand(rng);
            CHECK(xi >= 0.0);
            CHECK(xi <= 2.0);
            CHECK(uniform.sample_action(rng) == 1.0);
        }
    }
    SUBCASE("zero drift returns far more often than positive drift") {
        InventoryWalk drift = zero;
        drift.action_shift = 1.0;
        const auto a = walk_recurrence_probe(zero, -1.0, 1.0, 8.0, 100, 20000, 1);
        const auto b = walk_recurrence_probe(drift, -1.0, 1.0, 8.0, 100, 20000, 1);
        CHECK(a.estimate >= 0.8);
        CHECK(b.estimate < a.estimate - 0.5);
        CHECK(a.std_error == doctest::Approx(std::sqrt(a.estimate * (1 - a.estimate) / 100.0)));
    }
    SUBCASE("seeded runs repeat") {
        const auto a = walk_recurrence_probe(zero, -1.0, 1.0, 5.0, 30, 5000, 42);
        const auto b = walk_recurrence_probe(zero, -1.0, 1.0, 5.0, 30, 5000, 42);
        CHECK(a.hit_times == b.hit_times);
    }
    CHECK_THROWS_AS(walk_recurrence_probe(zero, 1.0, -1.0, 0.0, 1, 1, 0), InvalidArgument);
}

TEST_CASE("discounted occupation measures") {
    SUBCASE("absorbing start") {
        const FiniteMdp mdp = make_mdp({{{{1.0, 0.0}, 0.0}}, {{{0.5, 0.5}, 1.0}}});
        const Policy<double> pol = StationaryPolicy<double>{uniform_kernel(mdp)};
        const auto occ = occupation_measure(mdp, pol, {1.0, 0.0}, 20);
        CHECK(occ.weights[0] == doctest::Approx(1.0 - std::ldexp(1.0, -20)).epsilon(1e-15));
        CHECK(occ.weights[1] == 0.0);
        CHECK(occ.residual == std::ldexp(1.0, -20));
    }
    SUBCASE("point start charges at least one half") {
        std::mt19937_64 rng(31);
        for (int trial = 0; trial < 20; ++trial) {
            const FiniteMdp mdp = random_mdp(rng, 4, 3);
            const std::size_t x0 = trial % 4;
            std::vector<double> p0(4, 0.0);
            p0[x0] = 1.0;
            const Policy<double> pol = StationaryPolicy<double>{random_kernel(rng, mdp)};
            const auto occ = occupation_measure(mdp, pol, p0, 30);
            CHECK(occ.weights[x0] >= 0.5);
        }
    }
    SUBCASE("spread start dominates half the initial law and rules out singularity") {
        std::mt19937_64 rng(32);
        for (int trial = 0; trial < 20; ++trial) {
            const ExactMdp mdp = random_exact_mdp(rng);
            const std::vector<R> p0{R(1, 8), R(0), R(3, 8), R(1, 2)};
            StationaryKernel<R> mu1(4), mu2(4);
            for (std::size_t x = 0; x < 4; ++x) {
                mu1[x].assign(mdp.num_actions(x), R(0));
                mu2[x].assign(mdp.num_actions(x), R(0));
                mu1[x].front() = R(1);
                mu2[x].back() = R(1);
            }
            const auto l1 = occupation_measure<R>(mdp, StationaryPolicy<R>{mu1}, p0, 12);
            const auto l2 = occupation_measure<R>(mdp, StationaryPolicy<R>{mu2}, p0, 12);
            R mass(0);
            for (std::size_t x = 0; x < 4; ++x) {
                CHECK(l1.weights[x] >= p0[x] / 2);
                CHECK(l2.weights[x] >= p0[x] / 2);
                mass += l1.weights[x];
                if (p0[x] > 0) CHECK(std::min(l1.weights[x], l2.weights[x]) >= R(1, 16));
            }
            CHECK(mass + l1.residual == R(1));
        }
    }
    SUBCASE("history policies are propagated through their marginals") {
        const FiniteMdp mdp = make_mdp({{{{0.0, 1.0}, 0.0}, {{1.0, 0.0}, 1.0}}, {{{1.0, 0.0}, 0.0}}});
        // Stage-0 action 1 keeps the chain at 0; afterwards action 0 moves it to 1 and back.
        MarkovPolicy<double> mk;
        mk.prefix = {{{0.0, 1.0}, {1.0}}};
        mk.cycle = {{{1.0, 0.0}, {1.0}}};
        const auto occ = occupation_measure<double>(mdp, Policy<double>{mk}, {1.0, 0.0}, 4);
        // x_0 = 0, x_1 = 0, x_2 = 1, x_3 = 0.
        CHECK(occ.weights[0] == doctest::Approx(0.5 + 0.25 + 0.0625));
        CHECK(occ.weights[1] == doctest::Approx(0.125));
    }
    const FiniteMdp one = make_mdp({{{{1.0}, 0.0}}});
    CHECK_THROWS_AS(occupation_measure<double>(one, StationaryPolicy<double>{uniform_kernel(one)}, {1.0}, 0),
                    InvalidArgument);
}
