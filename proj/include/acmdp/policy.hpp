#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "acmdp/errors.hpp"
#include "acmdp/mdp.hpp"

namespace acmdp {

/// Distribution over the admissible action indices of one state.
template <class T>
using ActionDist = std::vector<T>;

/// State -> action distribution.
template <class T>
using StationaryKernel = std::vector<ActionDist<T>>;

struct StateAction {
    std::uint32_t state = 0;
    std::uint32_t action = 0;

    friend bool operator==(const StateAction&, const StateAction&) = default;
    friend auto operator<=>(const StateAction&, const StateAction&) = default;
};

template <class T>
struct StationaryPolicy {
    StationaryKernel<T> mu;
};

/// Stationary rule selected by the initial state.
template <class T>
struct SemiStationaryPolicy {
    std::vector<StationaryKernel<T>> by_initial;
};

/**
 * Markov policy given as a finite prefix followed by a repeating cycle.
 * Stage n uses prefix[n] for n < prefix.size(), otherwise
 * cycle[(n - prefix.size()) % cycle.size()].
 */
template <class T>
struct MarkovPolicy {
    std::vector<StationaryKernel<T>> prefix;
    std::vector<StationaryKernel<T>> cycle;

    const StationaryKernel<T>& at(std::size_t n) const {
        if (n < prefix.size()) return prefix[n];
        return cycle[(n - prefix.size()) % cycle.size()];
    }

    /// True when every cycle entry is the same kernel.
    bool eventually_stationary() const {
        for (const auto& k : cycle)
            if (k != cycle.front()) return false;
        return true;
    }

    /// First stage from which the policy is stationary (prefix length, after
    /// dropping trailing prefix entries equal to the tail kernel).
    std::size_t switch_stage() const {
        std::size_t m = prefix.size();
        while (m > 0 && prefix[m - 1] == cycle.front()) --m;
        return m;
    }
};

/// Markov policy selected by the initial state.
template <class T>
struct SemiMarkovPolicy {
    std::vector<MarkovPolicy<T>> by_initial;
};

/**
 * History-dependent randomized policy on a finite horizon. The rule receives
 * the past state-action pairs (x_0,a_0,...,x_{n-1},a_{n-1}) and the current
 * state x_n, and returns the distribution of a_n over A(x_n).
 */
template <class T>
struct HistoryPolicy {
    std::size_t horizon = 0;
    std::function<ActionDist<T>(std::span<const StateAction>, std::size_t)> rule;
};

enum class PolicyKind { Stationary, SemiStationary, Markov, SemiMarkov, HistoryFiniteHorizon };

template <class T>
using Policy = std::variant<StationaryPolicy<T>, SemiStationaryPolicy<T>, MarkovPolicy<T>,
                            SemiMarkovPolicy<T>, HistoryPolicy<T>>;

template <class T>
PolicyKind kind(const Policy<T>& policy) {
    return static_cast<PolicyKind>(policy.index());
}

std::string to_string(PolicyKind kind);

/// True unless the policy depends on more than (x_0, n, x_n).
template <class T>
bool is_markov_like(const Policy<T>& policy) {
    return kind(policy) != PolicyKind::HistoryFiniteHorizon;
}

/// Kernel used at stage n from initial state x0 by a Markov-like policy.
template <class T>
const StationaryKernel<T>& stage_kernel(const Policy<T>& policy, std::size_t x0, std::size_t n) {
    switch (kind(policy)) {
        case PolicyKind::Stationary:
            return std::get<StationaryPolicy<T>>(policy).mu;
        case PolicyKind::SemiStationary:
            return std::get<SemiStationaryPolicy<T>>(policy).by_initial.at(x0);
        case PolicyKind::Markov:
            return std::get<MarkovPolicy<T>>(policy).at(n);
        case PolicyKind::SemiMarkov:
            return std::get<SemiMarkovPolicy<T>>(policy).by_initial.at(x0).at(n);
        case PolicyKind::HistoryFiniteHorizon:
            break;
    }
    throw InvalidArgument("history-dependent policy has no stage kernel");
}

/// Action distribution after the given past, at current state x.
template <class T>
ActionDist<T> decide(const Policy<T>& policy, std::span<const StateAction> past, std::size_t x) {
    if (kind(policy) == PolicyKind::HistoryFiniteHorizon) {
        const auto& hp = std::get<HistoryPolicy<T>>(policy);
        if (past.size() > hp.horizon)
            throw HorizonOverflow("history policy queried beyond its horizon " + std::to_string(hp.horizon));
        return hp.rule(past, x);
    }
    const std::size_t x0 = past.empty() ? x : past.front().state;
    return stage_kernel(policy, x0, past.size()).at(x);
}

template <class T>
StationaryKernel<T> uniform_kernel(const BasicFiniteMdp<T>& mdp) {
    StationaryKernel<T> mu(mdp.num_states());
    for (std::size_t x = 0; x < mdp.num_states(); ++x) {
        const std::size_t m = mdp.num_actions(x);
        mu[x].assign(m, T(1) / T(static_cast<long>(m)));
    }
    return mu;
}

/// Deterministic stationary kernel choosing action choice[x] at x.
template <class T>
StationaryKernel<T> deterministic_kernel(const BasicFiniteMdp<T>& mdp, std::span<const std::size_t> choice) {
    if (choice.size() != mdp.num_states()) throw DimensionMismatch("decision rule length mismatch");
    StationaryKernel<T> mu(mdp.num_states());
    for (std::size_t x = 0; x < mdp.num_states(); ++x) {
        if (choice[x] >= mdp.num_actions(x))
            throw PolicySupportError("action index out of range at state " + std::to_string(x));
        mu[x].assign(mdp.num_actions(x), T(0));
        mu[x][choice[x]] = T(1);
    }
    return mu;
}

/// Checks that mu is a stochastic kernel supported on A(x) at every state.
template <class T>
void validate_kernel(const BasicFiniteMdp<T>& mdp, const StationaryKernel<T>& mu) {
    if (mu.size() != mdp.num_states())
        throw PolicySupportError("kernel has " + std::to_string(mu.size()) + " rows, MDP has " +
                                 std::to_string(mdp.num_states()) + " states");
    for (std::size_t x = 0; x < mu.size(); ++x) {
        if (mu[x].size() != mdp.num_actions(x))
            throw PolicySupportError("kernel row " + std::to_string(x) + " does not match A(x)");
        try {
            detail::check_distribution<T>(mu[x], "mu(.|" + std::to_string(x) + ")");
        } catch (const RowSumError& e) {
            throw PolicySupportError(e.what());
        }
    }
}

/// Validates every kernel reachable through the policy's representation.
/// History policies are validated lazily when queried.
template <class T>
void validate_policy(const BasicFiniteMdp<T>& mdp, const Policy<T>& policy) {
    auto check_markov = [&](const MarkovPolicy<T>& mp) {
        if (mp.cycle.empty()) throw PolicySupportError("Markov policy needs a nonempty cycle");
        for (const auto& k : mp.prefix) validate_kernel(mdp, k);
        for (const auto& k : mp.cycle) validate_kernel(mdp, k);
    };
    switch (kind(policy)) {
        case PolicyKind::Stationary:
            validate_kernel(mdp, std::get<StationaryPolicy<T>>(policy).mu);
            break;
        case PolicyKind::SemiStationary:
            for (const auto& k : std::get<SemiStationaryPolicy<T>>(policy).by_initial) validate_kernel(mdp, k);
            if (std::get<SemiStationaryPolicy<T>>(policy).by_initial.size() != mdp.num_states())
                throw PolicySupportError("semi-stationary policy needs one kernel per initial state");
            break;
        case PolicyKind::Markov:
            check_markov(std::get<MarkovPolicy<T>>(policy));
            break;
        case PolicyKind::SemiMarkov: {
            const auto& sm = std::get<SemiMarkovPolicy<T>>(policy);
            if (sm.by_initial.size() != mdp.num_states())
                throw PolicySupportError("semi-Markov policy needs one Markov policy per initial state");
            for (const auto& mp : sm.by_initial) check_markov(mp);
            break;
        }
        case PolicyKind::HistoryFiniteHorizon:
            if (!std::get<HistoryPolicy<T>>(policy).rule)
                throw PolicySupportError("history policy has no decision rule");
            break;
    }
}

}  // namespace acmdp
