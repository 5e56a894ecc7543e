#include "acmdp/chain.hpp"

#include <algorithm>
#include <cmath>

#include "acmdp/errors.hpp"
#include "acmdp/linalg.hpp"

namespace acmdp {

namespace {

std::vector<bool> target_mask(std::size_t n, const std::vector<std::size_t>& target) {
    if (target.empty()) throw EmptyTargetSet("target set is empty");
    std::vector<bool> mask(n, false);
    for (std::size_t y : target) {
        if (y >= n) throw InvalidArgument("target state " + std::to_string(y) + " out of range");
        mask[y] = true;
    }
    return mask;
}

/// States x not in B with Pr_x(tau_B < inf) = 1, decided on the graph: every
/// state reachable from x while avoiding B can still reach B.
std::vector<bool> almost_sure_hitters(const Adjacency& adj, const std::vector<bool>& in_target) {
    const std::size_t n = adj.size();
    const auto reach = can_reach(adj, in_target);
    std::vector<bool> bad(n, false);
    for (std::size_t x = 0; x < n; ++x) bad[x] = !reach[x];
    // Graph with edges out of B removed: x is bad if it reaches a dead state.
    Adjacency avoid(n);
    for (std::size_t x = 0; x < n; ++x)
        if (!in_target[x]) avoid[x] = adj[x];
    const auto leaks = can_reach(avoid, bad);
    std::vector<bool> sure(n, false);
    for (std::size_t x = 0; x < n; ++x) sure[x] = !in_target[x] && !leaks[x];
    return sure;
}

}  // namespace

MarkovChain make_chain(Matrix<double> P, std::string provenance) {
    if (P.rows() != P.cols() || P.rows() == 0) throw DimensionMismatch("transition matrix must be square and nonempty");
    for (std::size_t x = 0; x < P.rows(); ++x)
        detail::check_distribution<double>(P.row(x), "P(.|" + std::to_string(x) + ")");
    return MarkovChain{std::move(P), std::move(provenance)};
}

MarkovChain induced_chain(const FiniteMdp& mdp, const StationaryKernel<double>& mu, std::string provenance) {
    return make_chain(induced_matrix(mdp, mu), std::move(provenance));
}

Adjacency transition_graph(const MarkovChain& chain) {
    const std::size_t n = chain.size();
    Adjacency adj(n);
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
            if (chain.P(x, y) > 0.0) adj[x].push_back(y);
    return adj;
}

ClassDecomposition decompose(const MarkovChain& chain) {
    const std::size_t n = chain.size();
    const Adjacency adj = transition_graph(chain);
    const SccResult scc = strongly_connected_components(adj);

    std::vector<bool> closed(scc.count, true);
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y : adj[x])
            if (scc.component[y] != scc.component[x]) closed[scc.component[x]] = false;

    ClassDecomposition out;
    out.class_of.assign(n, ClassDecomposition::kTransient);
    std::vector<std::size_t> class_id(scc.count, ClassDecomposition::kTransient);
    // Number classes by their smallest member so the output is order-stable.
    for (std::size_t x = 0; x < n; ++x) {
        const std::size_t comp = scc.component[x];
        if (!closed[comp]) {
            out.transient.push_back(x);
            continue;
        }
        if (class_id[comp] == ClassDecomposition::kTransient) {
            class_id[comp] = out.recurrent_classes.size();
            out.recurrent_classes.emplace_back();
        }
        out.recurrent_classes[class_id[comp]].push_back(x);
        out.class_of[x] = class_id[comp];
    }
    for (const auto& members : out.recurrent_classes) out.periods.push_back(scc_period(adj, members));
    return out;
}

CesaroLimit cesaro_matrix(const MarkovChain& chain, const ClassDecomposition& decomp) {
    const std::size_t n = chain.size();
    const std::size_t k = decomp.recurrent_classes.size();
    if (decomp.class_of.size() != n) throw DimensionMismatch("decomposition does not match chain");
    CesaroLimit out;
    out.P_star = Matrix<double>(n, n);
    out.absorption = Matrix<double>(n, k);

    for (std::size_t r = 0; r < k; ++r) {
        const auto& members = decomp.recurrent_classes[r];
        const std::size_t m = members.size();
        // pi (I - P_R) = 0, sum pi = 1: transpose and replace the last equation.
        Eigen::MatrixXd a(m, m);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j)
                a(j, i) = (i == j ? 1.0 : 0.0) - chain.P(members[i], members[j]);
        a.row(m - 1).setOnes();
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
        rhs(m - 1) = 1.0;
        const Eigen::VectorXd pi = solve_checked(a, rhs, "stationary distribution");
        std::vector<double> full(n, 0.0);
        for (std::size_t i = 0; i < m; ++i) full[members[i]] = std::max(pi(i), 0.0);
        out.per_class_stationary.push_back(std::move(full));
        for (std::size_t x : members) out.absorption(x, r) = 1.0;
    }

    const auto& trans = decomp.transient;
    if (!trans.empty() && k > 0) {
        const std::size_t t = trans.size();
        Eigen::MatrixXd a(t, t);
        Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(t, k);
        for (std::size_t i = 0; i < t; ++i) {
            for (std::size_t j = 0; j < t; ++j) a(i, j) = (i == j ? 1.0 : 0.0) - chain.P(trans[i], trans[j]);
            for (std::size_t y = 0; y < n; ++y) {
                const std::size_t r = decomp.class_of[y];
                if (r != ClassDecomposition::kTransient) rhs(i, r) += chain.P(trans[i], y);
            }
        }
        const Eigen::MatrixXd absorb = solve_checked(a, rhs, "absorption probabilities");
        for (std::size_t i = 0; i < t; ++i)
            for (std::size_t r = 0; r < k; ++r) out.absorption(trans[i], r) = std::clamp(absorb(i, r), 0.0, 1.0);
    }

    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t r = 0; r < k; ++r) {
            const double w = out.absorption(x, r);
            if (w == 0.0) continue;
            for (std::size_t y : decomp.recurrent_classes[r]) out.P_star(x, y) += w * out.per_class_stationary[r][y];
        }
    return out;
}

std::vector<double> hitting_probability(const MarkovChain& chain, const std::vector<std::size_t>& target) {
    const std::size_t n = chain.size();
    const auto in_target = target_mask(n, target);
    const Adjacency adj = transition_graph(chain);
    const auto reach = can_reach(adj, in_target);
    const auto sure = almost_sure_hitters(adj, in_target);

    std::vector<double> h(n, 0.0);
    std::vector<std::size_t> unknown;
    for (std::size_t x = 0; x < n; ++x) {
        if (in_target[x] || sure[x]) h[x] = 1.0;
        else if (reach[x]) unknown.push_back(x);
    }
    if (unknown.empty()) return h;

    const std::size_t m = unknown.size();
    Eigen::MatrixXd a(m, m);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) a(i, j) = (i == j ? 1.0 : 0.0) - chain.P(unknown[i], unknown[j]);
        for (std::size_t y = 0; y < n; ++y)
            if (h[y] == 1.0) rhs(i) += chain.P(unknown[i], y);
    }
    const Eigen::VectorXd sol = solve_checked(a, rhs, "hitting probabilities");
    for (std::size_t i = 0; i < m; ++i) h[unknown[i]] = std::clamp(sol(i), 0.0, 1.0);
    return h;
}

std::vector<double> expected_hitting_time(const MarkovChain& chain, const std::vector<std::size_t>& target) {
    const std::size_t n = chain.size();
    const auto in_target = target_mask(n, target);
    const auto sure = almost_sure_hitters(transition_graph(chain), in_target);

    std::vector<double> m(n, std::numeric_limits<double>::infinity());
    std::vector<std::size_t> inner;
    for (std::size_t x = 0; x < n; ++x) {
        if (in_target[x]) m[x] = 0.0;
        else if (sure[x]) inner.push_back(x);
    }
    if (inner.empty()) return m;
    const std::size_t t = inner.size();
    Eigen::MatrixXd a(t, t);
    for (std::size_t i = 0; i < t; ++i)
        for (std::size_t j = 0; j < t; ++j) a(i, j) = (i == j ? 1.0 : 0.0) - chain.P(inner[i], inner[j]);
    const Eigen::VectorXd sol = solve_checked(a, Eigen::VectorXd::Ones(t), "expected hitting times");
    for (std::size_t i = 0; i < t; ++i) m[inner[i]] = sol(i);
    return m;
}

TruncatedHittingTimes truncated_hitting_times(const CountableMdp<double>& model, std::size_t start,
                                              const std::vector<std::size_t>& target,
                                              const std::vector<std::size_t>& levels) {
    TruncatedHittingTimes out;
    for (std::size_t K : levels) {
        if (start > K) throw InvalidArgument("start state lies above truncation level");
        const FiniteMdp mdp = truncate(model, K);
        std::vector<std::size_t> first(mdp.num_states(), 0);
        const MarkovChain chain = induced_chain(mdp, deterministic_kernel(mdp, std::span<const std::size_t>(first)));
        std::vector<std::size_t> tgt;
        for (std::size_t y : target)
            if (y <= K) tgt.push_back(y);
        out.levels.push_back(K);
        out.values.push_back(expected_hitting_time(chain, tgt)[start]);
    }
    out.monotone_growth = out.values.size() >= 2;
    for (std::size_t i = 1; i < out.values.size(); ++i)
        out.monotone_growth = out.monotone_growth && out.values[i] > out.values[i - 1];
    return out;
}

}  // namespace acmdp
