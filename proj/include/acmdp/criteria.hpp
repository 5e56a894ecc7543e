#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "acmdp/chain.hpp"
#include "acmdp/errors.hpp"
#include "acmdp/marginals.hpp"
#include "acmdp/mdp.hpp"
#include "acmdp/policy.hpp"
#include "acmdp/strategic.hpp"

namespace acmdp {

/// Horizon cap for exact n-stage costs (n + j).
inline constexpr std::size_t kMaxStageHorizon = 10'000'000;

enum class Criterion : std::size_t { J1, J2, J3, J4, Jt1, Jt2, Jt3, Jt4 };
inline constexpr std::size_t kNumCriteria = 8;
inline constexpr std::array<const char*, kNumCriteria> kCriterionNames = {"J1",  "J2",  "J3",  "J4",
                                                                          "Jt1", "Jt2", "Jt3", "Jt4"};

enum class Method { Exact, Estimated };
std::string to_string(Method method);

/**
 * Per-state values of the four expected criteria (limsup/liminf of J_n/n and
 * of the window averages J_{n,j}/n) and their four pathwise counterparts.
 * Criteria that were not evaluated hold NaN.
 */
struct CriteriaReport {
    std::array<std::vector<double>, kNumCriteria> value;
    std::array<std::vector<double>, kNumCriteria> est_error;
    Method method = Method::Exact;
    /// False when an estimate oscillated beyond the requested tolerance.
    bool converged = true;
    std::string diagnostics;

    explicit CriteriaReport(std::size_t n_states = 0) {
        for (auto& v : value) v.assign(n_states, std::numeric_limits<double>::quiet_NaN());
        for (auto& e : est_error) e.assign(n_states, 0.0);
    }

    std::size_t num_states() const { return value[0].size(); }
    std::vector<double>& operator[](Criterion c) { return value[static_cast<std::size_t>(c)]; }
    const std::vector<double>& operator[](Criterion c) const { return value[static_cast<std::size_t>(c)]; }
    bool has(Criterion c) const {
        const auto& v = (*this)[c];
        return !v.empty() && !std::isnan(v.front());
    }

    /// J4 <= J2 <= J1 <= J3 (and the pathwise analogue) at every state, up
    /// to the summed estimation errors plus `slack`.
    bool ordering_holds(double slack = 0.0) const;
};

/// E_x[sum_{k<n} c(x_{k+j}, a_{k+j})], exactly, by marginal propagation.
template <class T>
T n_stage_cost(const BasicFiniteMdp<T>& mdp, const Policy<T>& policy, std::size_t x, std::size_t n,
               std::size_t j) {
    if (n < 1) throw InvalidArgument("horizon n must be at least 1");
    if (x >= mdp.num_states()) throw InvalidArgument("state out of range");
    if (n + j > kMaxStageHorizon)
        throw HorizonOverflow("n + j = " + std::to_string(n + j) + " exceeds the cap of 1e7 stages");
    std::vector<T> start(mdp.num_states(), T(0));
    start[x] = T(1);
    if (is_markov_like(policy)) {
        validate_policy(mdp, policy);
        T total(0);
        std::vector<T> dist = start;
        for (std::size_t m = 0; m < n + j; ++m) {
            const auto g = apply_kernel(mdp, dist, stage_kernel(policy, x, m));
            if (m >= j) total += expected_cost(mdp, g);
            if (m + 1 < n + j) dist = next_state_distribution(mdp, g);
        }
        return total;
    }
    const auto seq = stage_marginals(mdp, policy, start, n + j);
    T total(0);
    for (std::size_t m = j; m < n + j; ++m) total += expected_cost(mdp, seq.gamma[m]);
    return total;
}

/// All eight criteria of a stationary policy, exactly: the expected ones
/// from P* c_mu, the pathwise ones from class gains and absorption
/// probabilities.
CriteriaReport avg_cost_stationary(const FiniteMdp& mdp, const StationaryKernel<double>& mu);

/// Pathwise criteria only: sum_R Pr_x(absorb in R) * (pi_R c_mu).
CriteriaReport pathwise_exact(const FiniteMdp& mdp, const StationaryKernel<double>& mu);

/**
 * Criteria of a Markov policy. Eventually stationary policies are evaluated
 * exactly through the stationary tail. Otherwise the expected criteria are
 * estimated from J_n/n over n in [N/2, N] and from window averages J_{n,j}/n
 * over offsets j <= N with window lengths 2^10, 2^11, ... <= N; pathwise
 * entries are left unevaluated.
 */
CriteriaReport avg_cost_markov(const FiniteMdp& mdp, const MarkovPolicy<double>& policy, std::size_t horizon,
                               double tol);

/// Per-criterion Monte Carlo estimate of the pathwise criteria.
struct SimulationEstimate {
    std::array<double, 4> mean{};
    std::array<double, 4> std_error{};
    std::size_t n_traj = 0;
    std::size_t horizon = 0;
    /// Window length used for the Jt3/Jt4 windowed averages.
    std::size_t window = 0;
    /// Mean over trajectories of (max window average - min window average).
    double window_spread = 0.0;
    /// Final running average c~_H of every trajectory, in trajectory order.
    std::vector<double> final_average;
};

/// Stage/state -> action distribution used when simulating a countable MDP.
using CountableRule = std::function<ActionDist<double>(std::size_t stage, std::size_t state)>;

/**
 * Simulates n_traj trajectories of the given horizon from x. Per trajectory:
 * Jt1/Jt2 are the max/min of c~_n over n in [ceil(H/2), H], Jt3/Jt4 the
 * max/min of window averages of length ceil(H/2). Trajectory t draws from
 * SplitMix64(seed ^ t); results do not depend on evaluation order.
 */
SimulationEstimate simulate_pathwise(const FiniteMdp& mdp, const Policy<double>& policy, std::size_t x,
                                     std::size_t n_traj, std::size_t horizon, std::uint64_t seed);

SimulationEstimate simulate_pathwise(const CountableMdp<double>& model, const CountableRule& rule,
                                     std::size_t x, std::size_t n_traj, std::size_t horizon,
                                     std::uint64_t seed);

}  // namespace acmdp
