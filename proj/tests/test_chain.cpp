#include <cmath>
#include <random>

#include "doctest.h"

#include "acmdp/chain.hpp"
#include "acmdp/examples.hpp"
#include "support.hpp"

using namespace acmdp;
using acmdp::testing::make_mdp;
using acmdp::testing::power_average;
using acmdp::testing::random_row;

namespace {

Matrix<double> from_rows(const std::vector<std::vector<double>>& rows) {
    Matrix<double> P(rows.size(), rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows.size(); ++j) P(i, j) = rows[i][j];
    return P;
}

MarkovChain random_chain(std::mt19937_64& rng, std::size_t n, double density) {
    Matrix<double> P(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = random_row(rng, n, density);
        for (std::size_t j = 0; j < n; ++j) P(i, j) = row[j];
    }
    return make_chain(std::move(P));
}

MarkovChain absorbing_truncation(std::size_t K) {
    const FiniteMdp mdp = truncate(to_countable<double>(harmonic_chain(AbsorbingCost::Bounded)), K);
    std::vector<std::size_t> first(K + 1, 0);
    return induced_chain(mdp, deterministic_kernel(mdp, std::span<const std::size_t>(first)));
}

}  // namespace

TEST_CASE("induced chains") {
    const FiniteMdp mdp = make_mdp({{{{1.0, 0.0}, 0.0}, {{0.0, 1.0}, 1.0}}, {{{1.0, 0.0}, 0.0}}});
    std::vector<std::size_t> choice{1, 0};
    const auto det = induced_chain(mdp, deterministic_kernel(mdp, std::span<const std::size_t>(choice)));
    CHECK(det.P == from_rows({{0, 1}, {1, 0}}));
    const auto mix = induced_chain(mdp, uniform_kernel(mdp));
    CHECK(mix.P(0, 0) == 0.5);
    CHECK(mix.P(0, 1) == 0.5);

    const auto trunc = absorbing_truncation(12);
    for (std::size_t k = 1; k < 12; ++k) {
        CHECK(trunc.P(k, 0) == doctest::Approx(1.0 / static_cast<double>(k + 1)));
        CHECK(trunc.P(k, k + 1) == doctest::Approx(static_cast<double>(k) / static_cast<double>(k + 1)));
    }
    CHECK_THROWS_AS(make_chain(from_rows({{0.5, 0.4}, {0, 1}})), RowSumError);
}

TEST_CASE("class decomposition") {
    const auto id = decompose(make_chain(Matrix<double>::identity(3)));
    CHECK(id.recurrent_classes.size() == 3);
    CHECK(id.transient.empty());

    const auto cycle = decompose(make_chain(from_rows({{0, 1}, {1, 0}})));
    REQUIRE(cycle.recurrent_classes.size() == 1);
    CHECK(cycle.periods[0] == 2);

    const auto absorbing = decompose(absorbing_truncation(20));
    REQUIRE(absorbing.recurrent_classes.size() == 1);
    CHECK(absorbing.recurrent_classes[0] == std::vector<std::size_t>{0});
    CHECK(absorbing.transient.size() == 20);
}

TEST_CASE("Cesaro limits") {
    SUBCASE("irreducible aperiodic two-state chain") {
        const auto chain = make_chain(from_rows({{0.9, 0.1}, {0.3, 0.7}}));
        const auto lim = cesaro_matrix(chain, decompose(chain));
        // pi = (0.3, 0.1) / 0.4
        for (std::size_t x = 0; x < 2; ++x) {
            CHECK(lim.P_star(x, 0) == doctest::Approx(0.75).epsilon(1e-12));
            CHECK(lim.P_star(x, 1) == doctest::Approx(0.25).epsilon(1e-12));
        }
    }
    SUBCASE("periodic chain averages") {
        const auto chain = make_chain(from_rows({{0, 1}, {1, 0}}));
        const auto lim = cesaro_matrix(chain, decompose(chain));
        for (double v : lim.P_star.data()) CHECK(v == doctest::Approx(0.5));
    }
    SUBCASE("random six-state chains against power averages") {
        std::mt19937_64 rng(606);
        for (int trial = 0; trial < 4; ++trial) {
            const auto chain = random_chain(rng, 6, trial < 2 ? 0.3 : 0.6);
            const auto decomp = decompose(chain);
            const auto lim = cesaro_matrix(chain, decomp);
            const auto avg = power_average(chain.P, 100000);
            for (std::size_t i = 0; i < 6; ++i)
                for (std::size_t j = 0; j < 6; ++j) CHECK(std::fabs(lim.P_star(i, j) - avg(i, j)) <= 1e-4);
            for (const auto& pi : lim.per_class_stationary) {
                double total = 0.0;
                for (double v : pi) {
                    CHECK(v >= 0.0);
                    total += v;
                }
                CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
                const auto piP = left_multiply<double>(pi, chain.P);
                for (std::size_t j = 0; j < 6; ++j) CHECK(std::fabs(piP[j] - pi[j]) <= 1e-10);
            }
        }
    }
}

TEST_CASE("window averages converge to the Cesaro limit") {
    std::mt19937_64 rng(77);
    const std::size_t n_win = 10000;
    for (int trial = 0; trial < 3; ++trial) {
        const auto chain = random_chain(rng, 6, 0.4);
        std::vector<double> c(6);
        for (auto& v : c) v = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        const auto lim = cesaro_matrix(chain, decompose(chain));
        const auto target = right_multiply<double>(lim.P_star, c);
        // prefix[k] = sum_{i<k} P^i c, for k up to 11 n_win.
        const std::size_t len = 11 * n_win;
        std::vector<std::vector<double>> prefix(len + 1, std::vector<double>(6, 0.0));
        std::vector<double> v = c;
        for (std::size_t k = 0; k < len; ++k) {
            for (std::size_t x = 0; x < 6; ++x) prefix[k + 1][x] = prefix[k][x] + v[x];
            v = right_multiply<double>(chain.P, v);
        }
        double worst = 0.0;
        for (std::size_t j = 0; j <= 10 * n_win; ++j)
            for (std::size_t x = 0; x < 6; ++x)
                worst = std::max(worst, std::fabs((prefix[j + n_win][x] - prefix[j][x]) / n_win - target[x]));
        CHECK(worst <= 1e-3);
    }
}

TEST_CASE("hitting probabilities") {
    const auto chain = make_chain(from_rows({{0.5, 0.25, 0.25, 0}, {0, 1, 0, 0}, {0, 0, 0.5, 0.5}, {0, 0, 0, 1}}));
    const auto all = hitting_probability(chain, {0, 1, 2, 3});
    for (double h : all) CHECK(h == 1.0);
    const auto h1 = hitting_probability(chain, {1});
    CHECK(h1[0] == doctest::Approx(0.5));
    CHECK(h1[2] == 0.0);
    CHECK(h1[3] == 0.0);
    CHECK_THROWS_AS(hitting_probability(chain, {}), EmptyTargetSet);

    const auto trunc = absorbing_truncation(30);
    for (double h : hitting_probability(trunc, {0})) CHECK(h == 1.0);
}

TEST_CASE("hitting probabilities are the minimal fixed point") {
    std::mt19937_64 rng(404);
    for (int trial = 0; trial < 20; ++trial) {
        const auto chain = random_chain(rng, 7, 0.3);
        const std::vector<std::size_t> target{static_cast<std::size_t>(trial % 7)};
        const auto h = hitting_probability(chain, target);
        // Value iteration from zero converges monotonically to the minimal solution.
        std::vector<double> v(7, 0.0);
        for (int it = 0; it < 2000000; ++it) {
            std::vector<double> next = right_multiply<double>(chain.P, v);
            next[target[0]] = 1.0;
            double step = 0.0;
            for (std::size_t x = 0; x < 7; ++x) step = std::max(step, std::fabs(next[x] - v[x]));
            v = std::move(next);
            if (step < 1e-15) break;
        }
        for (std::size_t x = 0; x < 7; ++x) CHECK(std::fabs(h[x] - v[x]) <= 1e-10);
        const auto Ph = right_multiply<double>(chain.P, h);
        for (std::size_t x = 0; x < 7; ++x)
            if (x != target[0]) CHECK(std::fabs(Ph[x] - h[x]) <= 1e-10);
    }
}

TEST_CASE("expected hitting times") {
    const double p = 0.125;
    const auto chain = make_chain(from_rows({{1 - p, p}, {0, 1}}));
    const auto m = expected_hitting_time(chain, {1});
    CHECK(m[1] == 0.0);
    CHECK(m[0] == doctest::Approx(1.0 / p).epsilon(1e-12));

    const auto split = make_chain(from_rows({{0, 0.5, 0.5}, {0, 1, 0}, {0, 0, 1}}));
    CHECK(std::isinf(expected_hitting_time(split, {1})[0]));

    const auto model = to_countable<double>(harmonic_chain(AbsorbingCost::Bounded));
    const auto times = truncated_hitting_times(model, 5, {0}, {10, 20, 40, 80, 160});
    CHECK(times.monotone_growth);
    for (std::size_t i = 1; i < times.values.size(); ++i) CHECK(times.values[i] > times.values[i - 1]);
    // On the truncation the time is finite and at least sum_{n<K-5} 5/(5+n).
    CHECK(times.values.back() >= survival_partial_sum(5, 155));
}
