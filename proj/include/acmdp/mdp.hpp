#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "acmdp/errors.hpp"
#include "acmdp/scalar.hpp"

namespace acmdp {

/// One admissible action at a state: its identifier, successor distribution
/// q(.|x,a) as a dense row, and one-stage cost c(x,a).
template <class T>
struct ActionData {
    std::string name;
    std::vector<T> next;
    T cost{};

    friend bool operator==(const ActionData&, const ActionData&) = default;
};

/**
 * Finite MDP with per-state admissible action lists.
 *
 * Actions are addressed by their index within A(x); the identifier string is
 * kept for I/O. Construction validates the model: nonempty action sets,
 * nonnegative rows summing to 1 within 1e-12 (evaluated in the scalar's own
 * arithmetic), finite costs.
 */
template <class T>
class BasicFiniteMdp {
public:
    using Scalar = T;

    BasicFiniteMdp() = default;
    explicit BasicFiniteMdp(std::vector<std::vector<ActionData<T>>> states);

    std::size_t num_states() const { return states_.size(); }
    std::size_t num_actions(std::size_t x) const { return states_[x].size(); }
    std::size_t max_actions() const { return max_actions_; }
    std::size_t num_pairs() const { return num_pairs_; }

    const std::string& action_name(std::size_t x, std::size_t a) const { return states_[x][a].name; }
    std::span<const T> transition(std::size_t x, std::size_t a) const { return states_[x][a].next; }
    const T& prob(std::size_t y, std::size_t x, std::size_t a) const { return states_[x][a].next[y]; }
    const T& cost(std::size_t x, std::size_t a) const { return states_[x][a].cost; }

    /// Successor states with positive probability.
    std::vector<std::size_t> support(std::size_t x, std::size_t a) const {
        std::vector<std::size_t> out;
        const auto& row = states_[x][a].next;
        for (std::size_t y = 0; y < row.size(); ++y)
            if (row[y] > T(0)) out.push_back(y);
        return out;
    }

    const std::vector<std::vector<ActionData<T>>>& states() const { return states_; }

    friend bool operator==(const BasicFiniteMdp& a, const BasicFiniteMdp& b) {
        return a.states_ == b.states_;
    }

private:
    std::vector<std::vector<ActionData<T>>> states_;
    std::size_t max_actions_ = 0;
    std::size_t num_pairs_ = 0;
};

using FiniteMdp = BasicFiniteMdp<double>;
using ExactMdp = BasicFiniteMdp<Rational>;

namespace detail {

template <class T>
void check_distribution(std::span<const T> row, const std::string& where) {
    T sum(0);
    for (const T& p : row) {
        if (p < T(0)) throw RowSumError(where + ": negative probability");
        if constexpr (!ScalarTraits<T>::exact) {
            if (!std::isfinite(p)) throw RowSumError(where + ": non-finite probability");
        }
        sum += p;
    }
    if (ScalarTraits<T>::abs(T(sum - T(1))) > ScalarTraits<T>::from_double(1e-12))
        throw RowSumError(where + ": probabilities sum to " + std::to_string(to_double(sum)));
}

}  // namespace detail

template <class T>
BasicFiniteMdp<T>::BasicFiniteMdp(std::vector<std::vector<ActionData<T>>> states)
    : states_(std::move(states)) {
    if (states_.empty()) throw DimensionMismatch("MDP must have at least one state");
    const std::size_t n = states_.size();
    for (std::size_t x = 0; x < n; ++x) {
        if (states_[x].empty())
            throw EmptyActionSet("state " + std::to_string(x) + " has no admissible action");
        for (std::size_t a = 0; a < states_[x].size(); ++a) {
            const auto& act = states_[x][a];
            const std::string where = "q(.|" + std::to_string(x) + "," + act.name + ")";
            if (act.next.size() != n)
                throw DimensionMismatch(where + " has " + std::to_string(act.next.size()) +
                                        " entries, expected " + std::to_string(n));
            detail::check_distribution<T>(act.next, where);
            if constexpr (!ScalarTraits<T>::exact) {
                if (!std::isfinite(act.cost))
                    throw NonFiniteCost("c(" + std::to_string(x) + "," + act.name + ") is not finite");
            }
        }
        max_actions_ = std::max(max_actions_, states_[x].size());
        num_pairs_ += states_[x].size();
    }
}

/// Converts the scalar type of every probability and cost.
template <class To, class From>
BasicFiniteMdp<To> convert_mdp(const BasicFiniteMdp<From>& mdp) {
    std::vector<std::vector<ActionData<To>>> states(mdp.num_states());
    for (std::size_t x = 0; x < mdp.num_states(); ++x)
        for (std::size_t a = 0; a < mdp.num_actions(x); ++a) {
            ActionData<To> act;
            act.name = mdp.action_name(x, a);
            for (const From& p : mdp.transition(x, a)) {
                if constexpr (std::is_same_v<To, double>) act.next.push_back(to_double(p));
                else act.next.push_back(To(p));
            }
            if constexpr (std::is_same_v<To, double>) act.cost = to_double(mdp.cost(x, a));
            else act.cost = To(mdp.cost(x, a));
            states[x].push_back(std::move(act));
        }
    return BasicFiniteMdp<To>(std::move(states));
}

template <class T>
using SparseDist = std::vector<std::pair<std::size_t, T>>;

/**
 * MDP on the state space {0, 1, 2, ...} described lazily by callbacks.
 * Only finitely many states are ever materialized (truncation, simulation,
 * sparse propagation).
 */
template <class T>
struct CountableMdp {
    std::function<std::vector<std::string>(std::size_t)> action_set;
    std::function<SparseDist<T>(std::size_t, std::size_t)> kernel;
    std::function<T(std::size_t, std::size_t)> cost;

    std::size_t num_actions(std::size_t k) const { return action_set(k).size(); }

    /// Kernel row with the distribution invariant enforced.
    SparseDist<T> checked_kernel(std::size_t k, std::size_t a) const {
        SparseDist<T> dist = kernel(k, a);
        std::vector<T> masses;
        masses.reserve(dist.size());
        for (const auto& [y, p] : dist) masses.push_back(p);
        detail::check_distribution<T>(masses, "kernel(" + std::to_string(k) + "," + std::to_string(a) + ")");
        return dist;
    }
};

/**
 * Restriction of a countable MDP to {0..K}. Mass sent to states above K is
 * redirected to K; costs at K are those of the original model.
 */
template <class T>
BasicFiniteMdp<T> truncate(const CountableMdp<T>& model, std::size_t K) {
    const std::size_t n = K + 1;
    std::vector<std::vector<ActionData<T>>> states(n);
    for (std::size_t k = 0; k < n; ++k) {
        const auto names = model.action_set(k);
        if (names.empty()) throw EmptyActionSet("state " + std::to_string(k) + " has no admissible action");
        for (std::size_t a = 0; a < names.size(); ++a) {
            ActionData<T> act;
            act.name = names[a];
            act.next.assign(n, T(0));
            for (const auto& [y, p] : model.checked_kernel(k, a)) act.next[std::min(y, K)] += p;
            act.cost = model.cost(k, a);
            states[k].push_back(std::move(act));
        }
    }
    return BasicFiniteMdp<T>(std::move(states));
}

}  // namespace acmdp
