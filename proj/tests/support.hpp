#pragma once

// Shared test fixtures and independent oracles. Nothing here calls the
// library's solvers: oracles are written from first principles.

#include <cmath>
#include <cstddef>
#include <functional>
#include <random>
#include <vector>

#include "acmdp/matrix.hpp"
#include "acmdp/mdp.hpp"
#include "acmdp/policy.hpp"

namespace acmdp::testing {

/// Random row: each entry kept with probability `density`, weights uniform,
/// normalized; at least one entry is kept.
inline std::vector<double> random_row(std::mt19937_64& rng, std::size_t n, double density) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> row(n, 0.0);
    double total = 0.0;
    for (std::size_t y = 0; y < n; ++y)
        if (u(rng) < density) {
            row[y] = 0.05 + u(rng);
            total += row[y];
        }
    if (total == 0.0) {
        row[std::uniform_int_distribution<std::size_t>(0, n - 1)(rng)] = 1.0;
        return row;
    }
    for (double& p : row) p /= total;
    // Fix the rounding so the row sums to 1 within a few ulps.
    double s = 0.0;
    std::size_t last = 0;
    for (std::size_t y = 0; y < n; ++y)
        if (row[y] > 0.0) {
            s += row[y];
            last = y;
        }
    row[last] += 1.0 - s;
    return row;
}

/// Random MDP with 1..max_actions actions per state and costs in [0, 1).
inline FiniteMdp random_mdp(std::mt19937_64& rng, std::size_t n, std::size_t max_actions, double density = 0.5,
                            bool exactly_max = false) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<std::vector<ActionData<double>>> states(n);
    for (std::size_t x = 0; x < n; ++x) {
        const std::size_t m =
            exactly_max ? max_actions : std::uniform_int_distribution<std::size_t>(1, max_actions)(rng);
        for (std::size_t a = 0; a < m; ++a)
            states[x].push_back({std::to_string(a), random_row(rng, n, density), std::floor(u(rng) * 100.0) / 100.0});
    }
    return FiniteMdp(std::move(states));
}

inline StationaryKernel<double> random_kernel(std::mt19937_64& rng, const FiniteMdp& mdp) {
    StationaryKernel<double> mu(mdp.num_states());
    for (std::size_t x = 0; x < mdp.num_states(); ++x) mu[x] = random_row(rng, mdp.num_actions(x), 0.7);
    return mu;
}

/// MDP from explicit (row, cost) lists per state, double probabilities.
inline FiniteMdp make_mdp(const std::vector<std::vector<std::pair<std::vector<double>, double>>>& rows) {
    std::vector<std::vector<ActionData<double>>> states(rows.size());
    for (std::size_t x = 0; x < rows.size(); ++x)
        for (std::size_t a = 0; a < rows[x].size(); ++a)
            states[x].push_back({std::to_string(a), rows[x][a].first, rows[x][a].second});
    return FiniteMdp(std::move(states));
}

/// Sum over every trajectory of length n + j of probability times the
/// cost accrued at stages j..n+j-1, by explicit recursion over histories.
template <class T>
T brute_force_stage_cost(const BasicFiniteMdp<T>& mdp, const Policy<T>& policy, std::size_t x, std::size_t n,
                         std::size_t j) {
    std::vector<StateAction> past;
    std::function<T(std::size_t, T)> walk = [&](std::size_t state, T prob) -> T {
        const std::size_t stage = past.size();
        if (stage == n + j) return T(0);
        const ActionDist<T> dist = decide(policy, std::span<const StateAction>(past), state);
        T total(0);
        for (std::size_t a = 0; a < dist.size(); ++a) {
            if (dist[a] == T(0)) continue;
            const T pa = prob * dist[a];
            if (stage >= j) total += pa * mdp.cost(state, a);
            past.push_back({static_cast<std::uint32_t>(state), static_cast<std::uint32_t>(a)});
            const auto row = mdp.transition(state, a);
            for (std::size_t y = 0; y < row.size(); ++y)
                if (row[y] != T(0)) total += walk(y, pa * row[y]);
            past.pop_back();
        }
        return total;
    };
    return walk(x, T(1));
}

/// (1/N) sum_{k<N} P^k by repeated multiplication.
inline Matrix<double> power_average(const Matrix<double>& P, std::size_t N) {
    const std::size_t n = P.rows();
    Matrix<double> power = Matrix<double>::identity(n);
    Matrix<double> sum(n, n);
    for (std::size_t k = 0; k < N; ++k) {
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c) sum(r, c) += power(r, c);
        power = power * P;
    }
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) sum(r, c) /= static_cast<double>(N);
    return sum;
}

}  // namespace acmdp::testing
