#include <cmath>
#include <random>

#include "doctest.h"

#include "acmdp/chain.hpp"
#include "acmdp/examples.hpp"
#include "acmdp/lp.hpp"
#include "support.hpp"

using namespace acmdp;
using acmdp::testing::random_row;
using R = Rational;

namespace {

Matrix<double> from_rows(const std::vector<std::vector<double>>& rows) {
    Matrix<double> P(rows.size(), rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows.size(); ++j) P(i, j) = rows[i][j];
    return P;
}

template <class T>
void check_feasible(const LpProgram<T>& lp, const LpOutcome<T>& out) {
    REQUIRE(out.status == LpStatus::Feasible);
    CHECK(lp_residual(lp, out.gamma, out.nu) <= 1e-8);
    for (const T& v : out.gamma) CHECK(to_double(v) >= -1e-10);
    for (const T& v : out.nu) CHECK(to_double(v) >= -1e-10);
}

// Solves the square system M z = r exactly; returns nothing if singular.
std::optional<std::vector<R>> gauss(Matrix<R> M, std::vector<R> r) {
    const std::size_t m = M.rows();
    for (std::size_t col = 0; col < m; ++col) {
        std::size_t piv = col;
        while (piv < m && M(piv, col) == 0) ++piv;
        if (piv == m) return std::nullopt;
        if (piv != col) {
            for (std::size_t j = 0; j < m; ++j) std::swap(M(piv, j), M(col, j));
            std::swap(r[piv], r[col]);
        }
        for (std::size_t i = 0; i < m; ++i) {
            if (i == col || M(i, col) == 0) continue;
            const R f = M(i, col) / M(col, col);
            for (std::size_t j = 0; j < m; ++j) M(i, j) -= f * M(col, j);
            r[i] -= f * r[col];
        }
    }
    for (std::size_t i = 0; i < m; ++i) r[i] /= M(i, i);
    return r;
}

// Minimum of c^T x over basic feasible solutions of A x = b, x >= 0, with A
// of full row rank. Exhaustive over column subsets.
std::optional<R> vertex_minimum(const Matrix<R>& A, const std::vector<R>& b, const std::vector<R>& c) {
    const std::size_t m = A.rows();
    const std::size_t N = A.cols();
    std::optional<R> best;
    for (std::size_t mask = 0; mask < (std::size_t{1} << N); ++mask) {
        if (static_cast<std::size_t>(__builtin_popcountll(mask)) != m) continue;
        std::vector<std::size_t> cols;
        for (std::size_t j = 0; j < N; ++j)
            if (mask >> j & 1) cols.push_back(j);
        Matrix<R> B(m, m);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t k = 0; k < m; ++k) B(i, k) = A(i, cols[k]);
        const auto z = gauss(B, b);
        if (!z) continue;
        bool nonneg = true;
        R value(0);
        for (std::size_t k = 0; k < m; ++k) {
            if ((*z)[k] < 0) nonneg = false;
            value += c[cols[k]] * (*z)[k];
        }
        if (nonneg && (!best || value < *best)) best = value;
    }
    return best;
}

}  // namespace

TEST_CASE("weights") {
    const auto g = make_weights<R>(WeightScheme::Geometric, 3);
    CHECK(g[0] == R(4) / 7);
    CHECK(g[1] == R(2) / 7);
    CHECK(g[2] == R(1) / 7);
    const auto u = make_weights<double>(WeightScheme::Uniform, 4);
    for (double v : u) CHECK(v == 0.25);
    CHECK_THROWS_AS(make_weights<double>(WeightScheme::Uniform, 0), WeightError);
    CHECK(parse_weight_scheme("uniform") == WeightScheme::Uniform);
    CHECK_THROWS_AS(parse_weight_scheme("flat"), InvalidArgument);
}

TEST_CASE("program construction") {
    SUBCASE("one state") {
        const auto lp = build_lp(make_chain(from_rows({{1}})), {1.0});
        CHECK(lp.A == from_rows({{0, 0}, {1, 0}}));
        CHECK(lp.rhs == std::vector<double>{0, 1});
        const auto out = solve_lp(lp);
        check_feasible(lp, out);
        CHECK(out.gamma[0] == 1.0);
        CHECK(*out.objective == 0.0);
    }
    SUBCASE("periodic pair forces the uniform invariant law") {
        const auto lp = build_lp(make_chain(from_rows({{0, 1}, {1, 0}})), {0.25, 0.75});
        const auto out = solve_lp(lp);
        check_feasible(lp, out);
        CHECK(out.gamma[0] == doctest::Approx(0.5));
        CHECK(out.gamma[1] == doctest::Approx(0.5));
    }
    SUBCASE("rows of the absorbing-chain truncation written out by hand") {
        // K = 3: 0 absorbing; k -> 0 w.p. 1/(k+1), k -> k+1 w.p. k/(k+1); 3 keeps 3/4.
        const auto mdp = truncate(to_countable<R>(harmonic_chain(AbsorbingCost::Linear)), 3);
        const std::vector<std::size_t> first(4, 0);
        const auto P = induced_matrix(mdp, deterministic_kernel(mdp, std::span<const std::size_t>(first)));
        const auto b = make_weights<R>(WeightScheme::Geometric, 4);
        const auto lp = build_lp(P, b);
        const R h(1, 2), t(1, 3), q(1, 4);
        // Columns: g0 g1 g2 g3 n0 n1 n2 n3.
        const std::vector<std::vector<R>> expected{
            {0, -h, -t, -q, 0, 0, 0, 0},
            {0, 1, 0, 0, 0, 0, 0, 0},
            {0, -h, 1, 0, 0, 0, 0, 0},
            {0, 0, -2 * t, 1 - 3 * q, 0, 0, 0, 0},
            {1, 0, 0, 0, 0, -h, -t, -q},
            {0, 1, 0, 0, 0, 1, 0, 0},
            {0, 0, 1, 0, 0, -h, 1, 0},
            {0, 0, 0, 1, 0, 0, -2 * t, 1 - 3 * q},
        };
        for (std::size_t i = 0; i < 8; ++i)
            for (std::size_t j = 0; j < 8; ++j) CHECK(lp.A(i, j) == expected[i][j]);
        for (std::size_t k = 0; k < 4; ++k) {
            CHECK(lp.rhs[k] == 0);
            CHECK(lp.rhs[4 + k] == b[k]);
        }
    }
    SUBCASE("weight errors") {
        const auto chain = make_chain(from_rows({{0, 1}, {1, 0}}));
        CHECK_THROWS_AS(build_lp(chain, {0.5}), WeightError);
        CHECK_THROWS_AS(build_lp(chain, {0.0, 1.0}), WeightError);
        CHECK_THROWS_AS(build_lp(chain, {0.5, 0.6}), WeightError);
    }
}

TEST_CASE("infeasible program yields a verified certificate") {
    LpProgram<double> lp;
    lp.n_states = 1;
    lp.A = from_rows({{1, 0}, {1, 0}});
    lp.rhs = {1.0, 0.0};
    lp.b = {1.0};
    const auto out = solve_lp(lp);
    REQUIRE(out.status == LpStatus::Infeasible);
    CHECK(verify_farkas(lp, out.farkas));
    CHECK_FALSE(verify_farkas(lp, {0.0, 0.0}));

    LpProgram<R> exact;
    exact.n_states = 1;
    exact.A = Matrix<R>(2, 2);
    exact.A(0, 0) = 1;
    exact.A(1, 0) = 1;
    exact.rhs = {R(1), R(0)};
    exact.b = {R(1)};
    const auto eout = solve_lp(exact);
    REQUIRE(eout.status == LpStatus::Infeasible);
    CHECK(verify_farkas(exact, eout.farkas));
}

TEST_CASE("feasible gamma is the stationary law of a unichain") {
    std::mt19937_64 rng(55);
    for (int trial = 0; trial < 10; ++trial) {
        Matrix<double> P(5, 5);
        for (std::size_t i = 0; i < 5; ++i) {
            const auto row = random_row(rng, 5, trial < 5 ? 1.0 : 0.6);
            for (std::size_t j = 0; j < 5; ++j) P(i, j) = row[j];
        }
        const auto chain = make_chain(P);
        const auto decomp = decompose(chain);
        if (decomp.recurrent_classes.size() != 1) continue;
        const auto pi = cesaro_matrix(chain, decomp).per_class_stationary[0];
        for (auto scheme : {WeightScheme::Geometric, WeightScheme::Uniform}) {
            const auto lp = build_lp(chain, make_weights<double>(scheme, 5));
            const auto out = solve_lp(lp);
            check_feasible(lp, out);
            for (std::size_t k = 0; k < 5; ++k) CHECK(std::fabs(out.gamma[k] - pi[k]) <= 1e-8);
        }
    }
}

TEST_CASE("simplex optimum matches vertex enumeration") {
    std::mt19937_64 rng(8);
    std::uniform_int_distribution<int> coef(-3, 3);
    std::uniform_int_distribution<int> pos(0, 4);
    int solved = 0;
    int infeasible = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t m = 2 + trial % 2;
        const std::size_t N = m + 3;
        Matrix<R> A(m, N);
        std::vector<R> b(m), c(N);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < N; ++j) A(i, j) = coef(rng);
            b[i] = coef(rng);
        }
        // Nonnegative costs keep the program bounded below.
        for (auto& v : c) v = pos(rng);
        // Skip rank-deficient draws: the enumeration oracle assumes full row rank.
        bool full_rank = false;
        for (std::size_t mask = 0; mask < (std::size_t{1} << N) && !full_rank; ++mask) {
            if (static_cast<std::size_t>(__builtin_popcountll(mask)) != m) continue;
            Matrix<R> B(m, m);
            std::size_t k = 0;
            for (std::size_t j = 0; j < N; ++j)
                if (mask >> j & 1) {
                    for (std::size_t i = 0; i < m; ++i) B(i, k) = A(i, j);
                    ++k;
                }
            full_rank = gauss(B, std::vector<R>(m, R(0))).has_value();
        }
        if (!full_rank) continue;

        const auto oracle = vertex_minimum(A, b, c);
        const auto res = simplex_solve(A, b, c);
        if (!oracle) {
            CHECK(res.status == SimplexStatus::Infeasible);
            ++infeasible;
            continue;
        }
        REQUIRE(res.status == SimplexStatus::Optimal);
        CHECK(res.objective == *oracle);
        for (std::size_t i = 0; i < m; ++i) {
            R s(0);
            for (std::size_t j = 0; j < N; ++j) s += A(i, j) * res.x[j];
            CHECK(s == b[i]);
        }
        ++solved;

        std::vector<double> cd(N), bd(m);
        Matrix<double> Ad(m, N);
        for (std::size_t i = 0; i < m; ++i) {
            bd[i] = to_double(b[i]);
            for (std::size_t j = 0; j < N; ++j) Ad(i, j) = to_double(A(i, j));
        }
        for (std::size_t j = 0; j < N; ++j) cd[j] = to_double(c[j]);
        const auto fres = simplex_solve(Ad, bd, cd);
        REQUIRE(fres.status == SimplexStatus::Optimal);
        CHECK(fres.objective == doctest::Approx(to_double(*oracle)).epsilon(1e-9));
    }
    CHECK(solved > 50);
    CHECK(infeasible > 5);
}

TEST_CASE("pivot cap") {
    const auto lp = build_lp(make_chain(from_rows({{0.5, 0.5}, {0.5, 0.5}})), {0.5, 0.5});
    CHECK_THROWS_AS(solve_lp(lp, std::optional<std::vector<double>>{}, 0), NumericalStall);
}

TEST_CASE("truncation study of the absorbing chain") {
    const auto model = to_countable<double>(harmonic_chain(AbsorbingCost::Linear));

    SUBCASE("single transient state") {
        const auto study = truncation_study(model, {1}, WeightScheme::Geometric);
        REQUIRE(study.rows.size() == 1);
        CHECK(study.rows[0].status == LpStatus::Feasible);
        CHECK(std::isfinite(study.rows[0].min_mass));
        CHECK(study.rows[0].min_mass < 10.0);
    }

    SUBCASE("mass grows at least like the harmonic series") {
        const std::vector<std::size_t> Ks{10, 20, 40, 80};
        const auto study = truncation_study(model, Ks, WeightScheme::Uniform);
        CHECK(study.strictly_increasing);
        CHECK(study.nu_bound_holds);
        REQUIRE(study.increments.size() == 3);
        for (double d : study.increments) CHECK(d >= 0.25 * study.increments.front());
        for (const auto& row : study.rows) {
            REQUIRE(row.status == LpStatus::Feasible);
            // Chained bound checked here from the raw solution.
            double harmonic = 0.0;
            for (std::size_t k = 1; k <= row.K; ++k) {
                CHECK(row.nu[k] >= row.nu1 / static_cast<double>(k) - 1e-8);
                harmonic += 1.0 / static_cast<double>(k);
            }
            CHECK(row.min_mass >= row.nu1 * harmonic - 1e-8);
            CHECK(row.nu1 > 0.0);
        }
    }

    SUBCASE("the sweep signals divergence after four doublings") {
        const auto study = truncation_study(model, {10, 20, 40, 80, 160}, WeightScheme::Geometric);
        CHECK(study.doublings == 4);
        CHECK(study.strictly_increasing);
        CHECK(study.divergence_verdict);
        const auto short_sweep = truncation_study(model, {10, 20, 40}, WeightScheme::Geometric);
        CHECK_FALSE(short_sweep.divergence_verdict);
    }

    SUBCASE("exact and float modes agree for small truncations") {
        const auto exact_model = to_countable<R>(harmonic_chain(AbsorbingCost::Linear));
        const std::vector<std::size_t> Ks{1, 2, 3, 5, 8, 13, 20};
        for (auto scheme : {WeightScheme::Geometric, WeightScheme::Uniform}) {
            const auto fs = truncation_study(model, Ks, scheme);
            const auto es = truncation_study(exact_model, Ks, scheme);
            for (std::size_t i = 0; i < Ks.size(); ++i) {
                CHECK(fs.rows[i].status == es.rows[i].status);
                CHECK(es.rows[i].mode == "exact");
                CHECK(fs.rows[i].min_mass == doctest::Approx(es.rows[i].min_mass).epsilon(1e-9));
            }
        }
    }

    CHECK_THROWS_AS(truncation_study(model, {20, 10}, WeightScheme::Uniform), InvalidArgument);
    CHECK_THROWS_AS(truncation_study(model, {}, WeightScheme::Uniform), InvalidArgument);
}
