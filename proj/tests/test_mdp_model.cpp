#include <random>

#include "doctest.h"

#include "acmdp/drift.hpp"
#include "acmdp/examples.hpp"
#include "acmdp/mdp_io.hpp"
#include "acmdp/optimal.hpp"
#include "support.hpp"

using namespace acmdp;
using acmdp::testing::make_mdp;
using acmdp::testing::random_mdp;
using nlohmann::json;

TEST_CASE("single absorbing state is a valid model") {
    const auto mdp = parse_mdp<double>(R"({"n_states":1,"actions":[["stay"]],"q":{"0,stay":[1]},"c":{"0,stay":0}})");
    CHECK(mdp.num_states() == 1);
    CHECK(mdp.num_actions(0) == 1);
    CHECK(mdp.cost(0, 0) == 0.0);
}

TEST_CASE("validation errors") {
    CHECK_THROWS_AS(
        parse_mdp<double>(R"({"n_states":2,"actions":[["a"],["a"]],"q":{"0,a":[0.5,0.4],"1,a":[0,1]},"c":{"0,a":0,"1,a":0}})"),
        RowSumError);
    CHECK_THROWS_AS(
        parse_mdp<double>(R"({"n_states":1,"actions":[["a"]],"q":{"0,a":[1]},"c":{"0,a":0},"extra":1})"), UnknownKey);
    CHECK_THROWS_AS(parse_mdp<double>(R"({"n_states":1,"actions":[[]],"q":{},"c":{}})"), EmptyActionSet);
    CHECK_THROWS_AS(parse_mdp<double>(R"({"n_states":2,"actions":[["a"],["a"]],"q":{"0,a":[1],"1,a":[0,1]},"c":{"0,a":0,"1,a":0}})"),
                    DimensionMismatch);
    CHECK_THROWS_AS(parse_mdp<double>(R"({"n_states":1,"actions":[["a"]],"q":{"0,a":[1]},"c":{"0,a":null}})"),
                    NonFiniteCost);
    CHECK_THROWS_AS(parse_mdp<double>("{not json"), ParseError);
    CHECK_THROWS_AS(parse_mdp<double>(R"({"n_states":1,"actions":[["a"]],"q":{"0,a":[1.5,-0.5]},"c":{"0,a":0}})"),
                    DimensionMismatch);
    CHECK_THROWS_AS(parse_mdp<double>(R"({"n_states":2,"actions":[["a"],["a"]],"q":{"0,a":[1.5,-0.5],"1,a":[0,1]},"c":{"0,a":0,"1,a":0}})"),
                    RowSumError);
}

TEST_CASE("rational literals") {
    CHECK(parse_rational("0.25") == Rational(1) / 4);
    CHECK(parse_rational("007/010") == Rational(7) / 10);
    CHECK(parse_rational("-0.5") == Rational(-1) / 2);
    CHECK(parse_rational("1e-3") == Rational(1) / 1000);
    CHECK(parse_rational("2.5E2") == Rational(250));
    CHECK(parse_rational("0") == Rational(0));
    CHECK(format_rational(Rational(6) / 4) == "3/2");
    CHECK(format_rational(Rational(-3)) == "-3");
    CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
    CHECK_THROWS_AS(parse_rational("abc"), ParseError);
    CHECK_THROWS_AS(parse_rational(""), ParseError);
}

TEST_CASE("rational input is exact and rejects near-stochastic rows") {
    const std::string doc =
        R"({"n_states":2,"actions":[["a","b"],["a"]],"q":{"0,a":["1/3","2/3"],"0,b":[1,0],"1,a":[0,1]},"c":{"0,a":"1/7","0,b":2,"1,a":"0.25"}})";
    const auto exact = parse_mdp<Rational>(doc);
    CHECK(exact.prob(0, 0, 0) == Rational(1) / 3);
    CHECK(exact.cost(0, 0) == Rational(1) / 7);
    CHECK(exact.cost(1, 0) == Rational(1) / 4);
    CHECK_THROWS_AS(parse_mdp<Rational>(R"({"n_states":2,"actions":[["a"],["a"]],"q":{"0,a":["1/3","0.66666"],"1,a":[0,1]},"c":{"0,a":0,"1,a":0}})"),
                    RowSumError);
}

TEST_CASE("round trip is exact for rationals and bit-exact for doubles") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 25; ++trial) {
        const FiniteMdp mdp = random_mdp(rng, 1 + trial % 5, 3);
        const json doc = mdp_to_json(mdp);
        CHECK(validate_mdp<double>(json::parse(doc.dump())) == mdp);
        const ExactMdp exact = convert_mdp<Rational>(mdp);
        CHECK(validate_mdp<Rational>(json::parse(mdp_to_json(exact).dump())) == exact);
    }
}

TEST_CASE("truncation of the absorbing chain") {
    const auto model = to_countable<double>(harmonic_chain(AbsorbingCost::Linear));
    const FiniteMdp mdp = truncate(model, 10);
    REQUIRE(mdp.num_states() == 11);
    // Row-sum oracle written independently of the validator.
    for (std::size_t k = 0; k <= 10; ++k) {
        double s = 0.0;
        for (double p : mdp.transition(k, 0)) s += p;
        CHECK(std::fabs(s - 1.0) <= 1e-12);
    }
    CHECK(mdp.prob(0, 0, 0) == 1.0);
    CHECK(mdp.prob(0, 4, 0) == doctest::Approx(1.0 / 5.0));
    CHECK(mdp.prob(5, 4, 0) == doctest::Approx(4.0 / 5.0));
    CHECK(mdp.prob(10, 10, 0) == doctest::Approx(10.0 / 11.0));
    CHECK(mdp.cost(10, 0) == 10.0);

    const ExactMdp exact = truncate(to_countable<Rational>(harmonic_chain(AbsorbingCost::Linear)), 10);
    CHECK(exact.prob(10, 10, 0) == Rational(10) / 11);
    CHECK(exact.prob(0, 10, 0) == Rational(1) / 11);
}

TEST_CASE("drift certificates") {
    SUBCASE("zero cost, zero weights") {
        const FiniteMdp mdp = make_mdp({{{{0.5, 0.5}, 0.0}}, {{{1.0, 0.0}, 0.0}}});
        const auto report = check_drift(mdp, {{0.0, 0.0}, 0.0, 0.0});
        CHECK(report.verdict);
        REQUIRE(report.gain_upper_bound);
        CHECK(*report.gain_upper_bound == 0.0);
    }
    SUBCASE("linear cost of the absorbing chain fails for any beta") {
        const FiniteMdp mdp = truncate(to_countable<double>(harmonic_chain(AbsorbingCost::Linear)), 30);
        std::vector<double> w(31);
        for (std::size_t k = 0; k <= 30; ++k) w[k] = static_cast<double>(k);
        for (double beta : {0.0, 0.5, 0.9}) {
            const auto report = check_drift(mdp, {w, beta, 1.0});
            CHECK_FALSE(report.verdict);
            CHECK_FALSE(report.gain_upper_bound);
            // Independent evaluation of both sides at k = 20: E[w(x_1)|k] = (k/(k+1))(k+1) = k.
            CHECK(report.drift_slack[20] == doctest::Approx(beta * 20 + 1.0 - 20.0));
        }
    }
    SUBCASE("constant weight on a bounded-cost model") {
        std::mt19937_64 rng(3);
        const FiniteMdp mdp = random_mdp(rng, 5, 3);
        double sup = 0.0;
        for (std::size_t x = 0; x < 5; ++x)
            for (std::size_t a = 0; a < mdp.num_actions(x); ++a) sup = std::max(sup, std::fabs(mdp.cost(x, a)));
        const auto report = check_drift(mdp, {std::vector<double>(5, sup), 0.0, sup});
        CHECK(report.verdict);
        CHECK(*report.gain_upper_bound == doctest::Approx(sup));
    }
    SUBCASE("invalid certificates") {
        const FiniteMdp mdp = make_mdp({{{{1.0}, 0.0}}});
        CHECK_THROWS_AS(check_drift(mdp, {{0.0, 1.0}, 0.0, 0.0}), DimensionMismatch);
        CHECK_THROWS_AS(check_drift(mdp, {{0.0}, 1.0, 0.0}), InvalidArgument);
        CHECK_THROWS_AS(check_drift(mdp, {{-1.0}, 0.0, 0.0}), InvalidArgument);
    }
}

TEST_CASE("drift verdict is monotone and bounds the optimal gain") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int certified = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const FiniteMdp mdp = random_mdp(rng, 2 + trial % 4, 3);
        const std::size_t n = mdp.num_states();
        DriftCertificate cert;
        for (std::size_t x = 0; x < n; ++x) {
            double cmax = 0.0;
            for (std::size_t a = 0; a < mdp.num_actions(x); ++a) cmax = std::max(cmax, mdp.cost(x, a));
            cert.w.push_back(cmax + u(rng));
        }
        cert.beta = 0.5 * u(rng);
        cert.b = 1.5 * u(rng);
        const auto report = check_drift(mdp, cert);
        if (!report.verdict) continue;
        ++certified;
        for (double t : {1.0, 2.0, 7.5}) {
            DriftCertificate scaled = cert;
            for (double& wx : scaled.w) wx *= t;
            scaled.b *= t;
            CHECK(check_drift(mdp, scaled).verdict);
        }
        const auto sol = optimal_gain_pi(mdp);
        for (double g : sol.g) CHECK(g <= *report.gain_upper_bound + 1e-9);
    }
    CHECK(certified > 5);
}

TEST_CASE("cost model classification") {
    std::mt19937_64 rng(5);
    CHECK(classify_cost_model(random_mdp(rng, 3, 2)) == CostModel::Both);
    using E = ExtendedCost;
    CHECK(classify_cost_model(ExtendedCostTable{{E::finite(1.0), E::plus_infinity()}, {E::finite(-2.0)}}) ==
          CostModel::ACplus);
    CHECK(classify_cost_model(ExtendedCostTable{{E::minus_infinity()}, {E::finite(3.0)}}) == CostModel::ACminus);
    CHECK(classify_cost_model(ExtendedCostTable{{E::finite(0.0)}}) == CostModel::Both);
    CHECK_THROWS_AS(classify_cost_model(ExtendedCostTable{{E::plus_infinity()}, {E::minus_infinity()}}),
                    BothSignsUnbounded);
    CHECK_THROWS_AS(classify_cost_model(ExtendedCostTable{{E::finite(std::nan(""))}}), NonFiniteCost);
}

TEST_CASE("policy documents") {
    const auto mdp = parse_mdp<double>(
        R"({"n_states":2,"actions":[["stay","go"],["stay"]],"q":{"0,stay":[1,0],"0,go":[0,1],"1,stay":[0,1]},"c":{"0,stay":1,"0,go":0,"1,stay":0}})");
    const auto det = parse_policy<double>(json::parse(R"({"kind":"deterministic","actions":["go","stay"]})"), mdp);
    CHECK(std::get<StationaryPolicy<double>>(det).mu[0] == std::vector<double>{0.0, 1.0});
    const auto mk = parse_policy<double>(
        json::parse(R"({"kind":"markov","prefix":[[[1,0],[1]]],"cycle":[[[0.5,0.5],[1]]]})"), mdp);
    CHECK(kind(mk) == PolicyKind::Markov);
    CHECK(std::get<MarkovPolicy<double>>(mk).at(7)[0][1] == 0.5);
    CHECK_THROWS_AS(parse_policy<double>(json::parse(R"({"kind":"deterministic","actions":["fly","stay"]})"), mdp),
                    PolicySupportError);
    CHECK_THROWS_AS(parse_policy<double>(json::parse(R"({"kind":"stationary","mu":[[0.5,0.6],[1]]})"), mdp),
                    PolicySupportError);
    CHECK_THROWS_AS(parse_policy<double>(json::parse(R"({"kind":"markov","cycle":[]})"), mdp), PolicySupportError);
    CHECK_THROWS_AS(parse_policy<double>(json::parse(R"({"kind":"oracle"})"), mdp), ParseError);
}
