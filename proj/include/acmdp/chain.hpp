#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "acmdp/graph.hpp"
#include "acmdp/matrix.hpp"
#include "acmdp/mdp.hpp"
#include "acmdp/policy.hpp"

namespace acmdp {

/// Row-stochastic transition matrix with a free-form provenance tag.
struct MarkovChain {
    Matrix<double> P;
    std::string provenance;

    std::size_t size() const { return P.rows(); }
};

/// Validates P (square, rows sum to 1 within 1e-12, entries >= 0).
MarkovChain make_chain(Matrix<double> P, std::string provenance = {});

/// P(y|x) = sum_a q(y|x,a) mu(a|x).
template <class T>
Matrix<T> induced_matrix(const BasicFiniteMdp<T>& mdp, const StationaryKernel<T>& mu) {
    validate_kernel(mdp, mu);
    const std::size_t n = mdp.num_states();
    Matrix<T> P(n, n);
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t a = 0; a < mdp.num_actions(x); ++a) {
            const T& w = mu[x][a];
            if (w == T(0)) continue;
            const auto row = mdp.transition(x, a);
            for (std::size_t y = 0; y < n; ++y) P(x, y) += w * row[y];
        }
    return P;
}

/// c_mu(x) = sum_a c(x,a) mu(a|x).
template <class T>
std::vector<T> induced_cost(const BasicFiniteMdp<T>& mdp, const StationaryKernel<T>& mu) {
    std::vector<T> c(mdp.num_states(), T(0));
    for (std::size_t x = 0; x < mdp.num_states(); ++x)
        for (std::size_t a = 0; a < mdp.num_actions(x); ++a) c[x] += mu[x][a] * mdp.cost(x, a);
    return c;
}

MarkovChain induced_chain(const FiniteMdp& mdp, const StationaryKernel<double>& mu, std::string provenance = {});

/// Transition graph (edge x -> y iff P(y|x) > 0).
Adjacency transition_graph(const MarkovChain& chain);

/**
 * Recurrent classes (closed communicating classes) and transient states.
 * On a finite chain this is the conservative/dissipative split.
 */
struct ClassDecomposition {
    std::vector<std::vector<std::size_t>> recurrent_classes;
    std::vector<std::size_t> transient;
    std::vector<std::size_t> periods;
    /// Class index per state, or kTransient.
    std::vector<std::size_t> class_of;

    static constexpr std::size_t kTransient = std::numeric_limits<std::size_t>::max();
};

ClassDecomposition decompose(const MarkovChain& chain);

struct CesaroLimit {
    Matrix<double> P_star;
    std::vector<std::vector<double>> per_class_stationary;  ///< full-length vectors, zero off-class
    Matrix<double> absorption;                             ///< n x classes: Pr_x(absorbed in class R)
};

/// P*(x,.) = sum_R Pr_x(absorb in R) pi_R.
CesaroLimit cesaro_matrix(const MarkovChain& chain, const ClassDecomposition& decomp);

/// Minimal nonnegative solution of h = 1 on B, h = P h off B.
std::vector<double> hitting_probability(const MarkovChain& chain, const std::vector<std::size_t>& target);

/// E_x[tau_B]; +infinity wherever Pr_x(tau_B < inf) < 1.
std::vector<double> expected_hitting_time(const MarkovChain& chain, const std::vector<std::size_t>& target);

/// Expected hitting times of a countable chain observed through a sequence
/// of truncations. Truncations can exhibit divergence but never prove it.
struct TruncatedHittingTimes {
    std::vector<std::size_t> levels;
    std::vector<double> values;
    bool monotone_growth = false;
};

/// Uses the first admissible action at every state (uncontrolled chains).
TruncatedHittingTimes truncated_hitting_times(const CountableMdp<double>& model, std::size_t start,
                                              const std::vector<std::size_t>& target,
                                              const std::vector<std::size_t>& levels);

}  // namespace acmdp
