#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <type_traits>
#include <vector>

#include "acmdp/marginals.hpp"
#include "acmdp/mdp.hpp"
#include "acmdp/policy.hpp"
#include "acmdp/rng.hpp"
#include "acmdp/scalar.hpp"

namespace acmdp {

// ---------------------------------------------------------------------------
// Absorbing chain on {0, 1, 2, ...}: from k >= 1 jump to 0 with probability
// beta_k, otherwise move to k + 1. State 0 is absorbing.

enum class AbsorbingCost { Linear, Bounded };
std::string to_string(AbsorbingCost cost);

struct AbsorbingChain {
    std::function<Rational(std::size_t)> beta;
    std::function<Rational(std::size_t)> cost;
};

/// beta_k = 1/(k+1); cost c(k) = k (Linear) or c(0) = 0, c(k) = 1 (Bounded).
AbsorbingChain harmonic_chain(AbsorbingCost cost);

/// Single-action countable MDP of the chain.
template <class T>
CountableMdp<T> to_countable(const AbsorbingChain& chain) {
    CountableMdp<T> m;
    m.action_set = [](std::size_t) { return std::vector<std::string>{"0"}; };
    m.kernel = [chain](std::size_t k, std::size_t) -> SparseDist<T> {
        if (k == 0) return {{0, T(1)}};
        const Rational b = chain.beta(k);
        if constexpr (std::is_same_v<T, Rational>) {
            if (b == 1) return {{0, T(1)}};
            return {{0, b}, {k + 1, Rational(1 - b)}};
        } else {
            const double bd = to_double(b);
            if (b == 1) return {{0, 1.0}};
            return {{0, bd}, {k + 1, 1.0 - bd}};
        }
    };
    m.cost = [chain](std::size_t k, std::size_t) -> T {
        if constexpr (std::is_same_v<T, Rational>) return chain.cost(k);
        else return to_double(chain.cost(k));
    };
    return m;
}

/// P_k(tau_0 > n) = prod_{j=k}^{k+n-1} (1 - 1/(j+1)) = k/(k+n) for the harmonic chain.
Rational survival_closed_form(std::size_t k, std::size_t n);

/// E_k[c(x_n)] for n = 0..horizon by exact sparse propagation.
std::vector<Rational> expected_cost_trace(const AbsorbingChain& chain, std::size_t k, std::size_t horizon);

/// sum_{n<N} P_k(tau_0 > n) = sum_{n<N} k/(k+n), accumulated in long double.
double survival_partial_sum(std::size_t k, std::size_t N);

struct AbsorbingRow {
    std::size_t k = 0;
    /// Optimal gain of the untruncated chain: k for c(k) = k, 0 for bounded c.
    double g_closed_form = 0.0;
    /// Exact E_k[c(x_horizon)] on the untruncated chain.
    double expected_cost_at_horizon = 0.0;
    /// Optimal gain of the truncation at K.
    double g_truncated = 0.0;
    /// Pr_k(tau_0 < inf) and E_k[tau_0] on the truncation.
    double hitting_prob = 0.0;
    double hitting_time_truncated = 0.0;
    /// sum_{n<horizon} k/(k+n).
    double survival_partial = 0.0;
};

struct AbsorbingReport {
    AbsorbingCost cost = AbsorbingCost::Linear;
    std::size_t K = 0;
    std::size_t horizon = 0;
    std::vector<AbsorbingRow> rows;
    /// E_k[c(x_n)] equals k (linear cost) or k/(k+n) (bounded cost) for
    /// every k <= K, n <= horizon, exactly.
    bool expected_cost_identity = false;
    /// max_k |g_truncated(k)| <= 1/K (bounded cost only).
    bool truncated_gain_within_bound = false;
    double max_abs_truncated_gain = 0.0;
};

/// Cross-checks closed forms against exact propagation and a truncation at K.
AbsorbingReport absorbing_chain_report(AbsorbingCost cost, std::size_t K, std::size_t horizon);

// ---------------------------------------------------------------------------
// Inventory random walk x' = x + a - xi on the real line.

enum class DemandKind {
    /// xi in {0, 2 m_F} with probability 1/2 each; actions uniform on
    /// (m_F - eps + shift, m_F + eps + shift).
    TwoPoint,
    /// xi uniform on (0, 2 m_F); action fixed at m_F + shift.
    Uniform
};
std::string to_string(DemandKind kind);

struct InventoryWalk {
    DemandKind demand = DemandKind::TwoPoint;
    double mean_demand = 1.0;
    double epsilon = 0.5;
    /// Offset of the action mean from m_F; nonzero gives a drifting walk.
    double action_shift = 0.0;

    double sample_demand(SplitMix64& rng) const;
    double sample_action(SplitMix64& rng) const;
};

struct RecurrenceProbe {
    std::size_t n_traj = 0;
    std::size_t horizon = 0;
    std::size_t hits = 0;
    double estimate = 0.0;
    double std_error = 0.0;
    /// Hitting time per trajectory; horizon + 1 when the interval was missed.
    std::vector<std::size_t> hit_times;
};

/// Estimates P(tau_[lo,hi] <= horizon) from x0. Trajectory t uses SplitMix64(seed ^ t).
RecurrenceProbe walk_recurrence_probe(const InventoryWalk& walk, double lo, double hi, double x0,
                                      std::size_t n_traj, std::size_t horizon, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Discounted occupation measures.

template <class T>
struct OccupationMeasure {
    /// sum_{n<N} 2^{-n-1} P(x_n = x)
    std::vector<T> weights;
    /// 2^{-N}: mass of the omitted tail.
    T residual;
};

template <class T>
OccupationMeasure<T> occupation_measure(const BasicFiniteMdp<T>& mdp, const Policy<T>& policy,
                                        const std::vector<T>& p0, std::size_t horizon) {
    if (horizon < 1) throw InvalidArgument("occupation horizon must be at least 1");
    if (p0.size() != mdp.num_states()) throw DimensionMismatch("initial distribution length mismatch");
    validate_policy(mdp, policy);
    const MarginalSequence<T> seq = propagate_markov_marginals(mdp, policy, p0, horizon);
    OccupationMeasure<T> out;
    out.weights.assign(mdp.num_states(), T(0));
    T w(1);
    for (std::size_t n = 0; n < horizon; ++n) {
        w /= T(2);
        const std::vector<T> states = state_marginal(seq.gamma[n]);
        for (std::size_t x = 0; x < states.size(); ++x) out.weights[x] += w * states[x];
    }
    out.residual = w;
    return out;
}

}  // namespace acmdp
