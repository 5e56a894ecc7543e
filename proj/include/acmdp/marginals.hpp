#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "acmdp/errors.hpp"
#include "acmdp/mdp.hpp"
#include "acmdp/policy.hpp"

namespace acmdp {

/// Measure on admissible pairs: table[x][a] for a < |A(x)|.
template <class T>
using StateActionTable = std::vector<std::vector<T>>;

/// Stage-indexed state-action marginals gamma_n together with the initial
/// state distribution p0.
template <class T>
struct MarginalSequence {
    std::vector<T> p0;
    std::vector<StateActionTable<T>> gamma;
};

template <class T>
StateActionTable<T> zero_table(const BasicFiniteMdp<T>& mdp) {
    StateActionTable<T> t(mdp.num_states());
    for (std::size_t x = 0; x < mdp.num_states(); ++x) t[x].assign(mdp.num_actions(x), T(0));
    return t;
}

/// gamma(x,a) = dist(x) mu(a|x).
template <class T>
StateActionTable<T> apply_kernel(const BasicFiniteMdp<T>& mdp, const std::vector<T>& dist,
                                 const StationaryKernel<T>& mu) {
    StateActionTable<T> g = zero_table(mdp);
    for (std::size_t x = 0; x < mdp.num_states(); ++x) {
        if (dist[x] == T(0)) continue;
        for (std::size_t a = 0; a < mdp.num_actions(x); ++a) g[x][a] = dist[x] * mu[x][a];
    }
    return g;
}

/// Distribution of x_{n+1} given the marginal of (x_n, a_n).
template <class T>
std::vector<T> next_state_distribution(const BasicFiniteMdp<T>& mdp, const StateActionTable<T>& gamma) {
    const std::size_t n = mdp.num_states();
    std::vector<T> next(n, T(0));
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t a = 0; a < mdp.num_actions(x); ++a) {
            const T& w = gamma[x][a];
            if (w == T(0)) continue;
            const auto row = mdp.transition(x, a);
            for (std::size_t y = 0; y < n; ++y)
                if (row[y] != T(0)) next[y] += w * row[y];
        }
    return next;
}

template <class T>
std::vector<T> state_marginal(const StateActionTable<T>& gamma) {
    std::vector<T> out(gamma.size(), T(0));
    for (std::size_t x = 0; x < gamma.size(); ++x)
        for (const T& w : gamma[x]) out[x] += w;
    return out;
}

/// Expected one-stage cost under a state-action marginal.
template <class T>
T expected_cost(const BasicFiniteMdp<T>& mdp, const StateActionTable<T>& gamma) {
    T sum(0);
    for (std::size_t x = 0; x < gamma.size(); ++x)
        for (std::size_t a = 0; a < gamma[x].size(); ++a)
            if (gamma[x][a] != T(0)) sum += gamma[x][a] * mdp.cost(x, a);
    return sum;
}

/**
 * Exact marginals of (x_n, a_n), n < stages, for a policy depending only on
 * (x_0, n, x_n). Semi-policies are handled by mixing over the support of p0.
 */
template <class T>
MarginalSequence<T> propagate_markov_marginals(const BasicFiniteMdp<T>& mdp, const Policy<T>& policy,
                                               const std::vector<T>& p0, std::size_t stages) {
    if (!is_markov_like(policy)) throw InvalidArgument("policy is history dependent");
    if (p0.size() != mdp.num_states()) throw DimensionMismatch("initial distribution length mismatch");
    MarginalSequence<T> out;
    out.p0 = p0;
    out.gamma.assign(stages, zero_table(mdp));

    const bool depends_on_start =
        kind(policy) == PolicyKind::SemiStationary || kind(policy) == PolicyKind::SemiMarkov;
    auto run = [&](const std::vector<T>& start, std::size_t x0) {
        std::vector<T> dist = start;
        for (std::size_t n = 0; n < stages; ++n) {
            const StateActionTable<T> g = apply_kernel(mdp, dist, stage_kernel(policy, x0, n));
            for (std::size_t x = 0; x < g.size(); ++x)
                for (std::size_t a = 0; a < g[x].size(); ++a) out.gamma[n][x][a] += g[x][a];
            if (n + 1 < stages) dist = next_state_distribution(mdp, g);
        }
    };
    if (!depends_on_start) {
        run(p0, 0);
    } else {
        for (std::size_t x0 = 0; x0 < p0.size(); ++x0) {
            if (p0[x0] == T(0)) continue;
            std::vector<T> start(p0.size(), T(0));
            start[x0] = p0[x0];
            run(start, x0);
        }
    }
    return out;
}

/**
 * Checks gamma_n(Gamma) = 1, gamma_0(. x A) = p0 and
 * gamma_n(. x A) = sum q(.|x,a) gamma_{n-1}(x,a). Exact for rationals,
 * within 1e-12 for doubles. Returns an empty string when consistent,
 * otherwise a description of the first violation.
 */
template <class T>
std::string marginal_inconsistency(const BasicFiniteMdp<T>& mdp, const MarginalSequence<T>& seq) {
    const std::size_t n = mdp.num_states();
    if (seq.p0.size() != n) return "p0 has wrong length";
    for (std::size_t k = 0; k < seq.gamma.size(); ++k) {
        const auto& g = seq.gamma[k];
        if (g.size() != n) return "gamma_" + std::to_string(k) + " has wrong number of states";
        T total(0);
        for (std::size_t x = 0; x < n; ++x) {
            if (g[x].size() != mdp.num_actions(x))
                return "gamma_" + std::to_string(k) + " charges inadmissible pairs at state " + std::to_string(x);
            for (const T& w : g[x]) {
                if (w < T(0)) return "gamma_" + std::to_string(k) + " has negative mass";
                total += w;
            }
        }
        if (!prob_equal(total, T(1))) return "gamma_" + std::to_string(k) + " does not have unit mass";
        const std::vector<T> expected = k == 0 ? seq.p0 : next_state_distribution(mdp, seq.gamma[k - 1]);
        const std::vector<T> actual = state_marginal(g);
        for (std::size_t x = 0; x < n; ++x)
            if (!prob_equal(actual[x], expected[x]))
                return "state marginal of gamma_" + std::to_string(k) + " is inconsistent at state " +
                       std::to_string(x);
    }
    return {};
}

}  // namespace acmdp
