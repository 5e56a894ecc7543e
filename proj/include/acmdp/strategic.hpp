#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "acmdp/errors.hpp"
#include "acmdp/marginals.hpp"
#include "acmdp/mdp.hpp"
#include "acmdp/policy.hpp"

namespace acmdp {

/// Default cap on the number of trajectory atoms in a strategic table.
inline constexpr std::size_t kDefaultTableCap = std::size_t{1} << 26;

using Trajectory = std::vector<StateAction>;

template <class T>
struct TrajectoryAtom {
    Trajectory path;  ///< (x_0,a_0),...,(x_N,a_N)
    T mass;
};

/**
 * Probability table on H'_N = (X x A)^{N+1}, stored sparsely and sorted by
 * trajectory. Atoms absent from the table carry zero mass.
 */
template <class T>
struct StrategicMeasure {
    std::size_t horizon = 0;
    std::vector<T> p0;
    std::vector<TrajectoryAtom<T>> atoms;

    void sort() {
        std::sort(atoms.begin(), atoms.end(), [](const auto& a, const auto& b) { return a.path < b.path; });
    }

    T mass_of(const Trajectory& path) const {
        const auto it = std::lower_bound(atoms.begin(), atoms.end(), path,
                                         [](const auto& atom, const Trajectory& p) { return atom.path < p; });
        return it != atoms.end() && it->path == path ? it->mass : T(0);
    }

    friend bool operator==(const StrategicMeasure& a, const StrategicMeasure& b) {
        if (a.horizon != b.horizon || a.p0 != b.p0) return false;
        // Compare on the union of supports; zero-mass atoms are immaterial.
        auto strip = [](const StrategicMeasure& m) {
            std::vector<std::pair<Trajectory, T>> out;
            for (const auto& atom : m.atoms)
                if (atom.mass != T(0)) out.emplace_back(atom.path, atom.mass);
            return out;
        };
        return strip(a) == strip(b);
    }
};

namespace detail {

template <class T>
ActionDist<T> checked_decision(const BasicFiniteMdp<T>& mdp, const Policy<T>& policy, const Trajectory& past,
                               std::size_t x) {
    ActionDist<T> dist = decide(policy, std::span<const StateAction>(past), x);
    if (dist.size() != mdp.num_actions(x))
        throw PolicySupportError("policy returned a distribution over the wrong action set at state " +
                                 std::to_string(x));
    try {
        check_distribution<T>(dist, "policy decision at state " + std::to_string(x));
    } catch (const RowSumError& e) {
        throw PolicySupportError(e.what());
    }
    return dist;
}

}  // namespace detail

/// Exact joint law of (x_0,a_0,...,x_N,a_N) by forward recursion.
template <class T>
StrategicMeasure<T> strategic_measure(const BasicFiniteMdp<T>& mdp, const Policy<T>& policy,
                                      const std::vector<T>& p0, std::size_t horizon,
                                      std::size_t cap = kDefaultTableCap) {
    if (p0.size() != mdp.num_states()) throw DimensionMismatch("initial distribution length mismatch");
    detail::check_distribution<T>(p0, "p0");
    validate_policy(mdp, policy);

    std::vector<TrajectoryAtom<T>> frontier;
    for (std::size_t x = 0; x < p0.size(); ++x) {
        if (p0[x] == T(0)) continue;
        const auto dist = detail::checked_decision(mdp, policy, Trajectory{}, x);
        for (std::size_t a = 0; a < dist.size(); ++a)
            if (dist[a] != T(0))
                frontier.push_back({Trajectory{{static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(a)}},
                                    p0[x] * dist[a]});
    }
    for (std::size_t n = 1; n <= horizon; ++n) {
        std::vector<TrajectoryAtom<T>> next;
        for (const auto& atom : frontier) {
            const StateAction last = atom.path.back();
            const auto row = mdp.transition(last.state, last.action);
            for (std::size_t y = 0; y < row.size(); ++y) {
                if (row[y] == T(0)) continue;
                const auto dist = detail::checked_decision(mdp, policy, atom.path, y);
                for (std::size_t b = 0; b < dist.size(); ++b) {
                    if (dist[b] == T(0)) continue;
                    if (next.size() >= cap)
                        throw TableTooLarge("strategic table exceeds " + std::to_string(cap) + " atoms");
                    Trajectory path = atom.path;
                    path.push_back({static_cast<std::uint32_t>(y), static_cast<std::uint32_t>(b)});
                    next.push_back({std::move(path), atom.mass * row[y] * dist[b]});
                }
            }
        }
        frontier = std::move(next);
    }
    StrategicMeasure<T> out;
    out.horizon = horizon;
    out.p0 = p0;
    out.atoms = std::move(frontier);
    out.sort();
    return out;
}

/// Marginals of (x_n, a_n), n <= horizon, read off a strategic table.
template <class T>
MarginalSequence<T> table_marginals(const BasicFiniteMdp<T>& mdp, const StrategicMeasure<T>& p) {
    MarginalSequence<T> out;
    out.p0 = p.p0;
    out.gamma.assign(p.horizon + 1, zero_table(mdp));
    for (const auto& atom : p.atoms)
        for (std::size_t n = 0; n < atom.path.size(); ++n)
            out.gamma[n][atom.path[n].state][atom.path[n].action] += atom.mass;
    return out;
}

/// Marginals for any policy kind: propagation for Markov-like policies, a
/// strategic table for history-dependent ones.
template <class T>
MarginalSequence<T> stage_marginals(const BasicFiniteMdp<T>& mdp, const Policy<T>& policy,
                                    const std::vector<T>& p0, std::size_t stages,
                                    std::size_t cap = kDefaultTableCap) {
    if (is_markov_like(policy)) {
        validate_policy(mdp, policy);
        return propagate_markov_marginals(mdp, policy, p0, stages);
    }
    if (stages == 0) return MarginalSequence<T>{p0, {}};
    return table_marginals(mdp, strategic_measure(mdp, policy, p0, stages - 1, cap));
}

struct CharacterizationResult {
    bool accepted = false;
    std::string reason;  ///< first failed condition, empty when accepted

    explicit operator bool() const { return accepted; }
};

/**
 * Decides whether a table is the strategic measure of some policy: it must
 * charge only admissible pairs at every stage, and at every stage the law of
 * x_{n+1} given the past h'_n must be q(.|x_n,a_n) on every charged h'_n.
 */
template <class T>
CharacterizationResult check_characterization(const StrategicMeasure<T>& p, const BasicFiniteMdp<T>& mdp) {
    const std::size_t n_states = mdp.num_states();
    auto reject = [](std::string why) { return CharacterizationResult{false, std::move(why)}; };
    if (p.p0.size() != n_states) return reject("p0 has wrong length");

    T total(0);
    std::vector<T> start(n_states, T(0));
    for (const auto& atom : p.atoms) {
        if (atom.path.size() != p.horizon + 1) return reject("trajectory length differs from horizon");
        if (atom.mass < T(0)) return reject("negative mass");
        if (atom.mass == T(0)) continue;
        for (const auto& [x, a] : atom.path) {
            if (x >= n_states || a >= mdp.num_actions(x)) return reject("mass on an inadmissible pair");
        }
        total += atom.mass;
        start[atom.path.front().state] += atom.mass;
    }
    if (!prob_equal(total, T(1))) return reject("total mass is not 1");
    for (std::size_t x = 0; x < n_states; ++x)
        if (!prob_equal(start[x], p.p0[x])) return reject("initial marginal differs from p0");

    for (std::size_t n = 0; n < p.horizon; ++n) {
        std::map<Trajectory, T> prefix_mass;
        std::map<std::pair<Trajectory, std::size_t>, T> step_mass;
        for (const auto& atom : p.atoms) {
            if (atom.mass == T(0)) continue;
            Trajectory prefix(atom.path.begin(), atom.path.begin() + static_cast<std::ptrdiff_t>(n + 1));
            prefix_mass[prefix] += atom.mass;
            step_mass[{std::move(prefix), atom.path[n + 1].state}] += atom.mass;
        }
        for (const auto& [prefix, mass] : prefix_mass) {
            const StateAction last = prefix.back();
            const auto row = mdp.transition(last.state, last.action);
            for (std::size_t y = 0; y < n_states; ++y) {
                const auto it = step_mass.find({prefix, y});
                const T observed = it == step_mass.end() ? T(0) : it->second;
                if (!prob_equal(observed, T(mass * row[y])))
                    return reject("law of x_" + std::to_string(n + 1) + " given the past is not q(.|x,a)");
            }
        }
    }
    return {true, {}};
}

/**
 * Policy whose strategic measure reproduces an accepted table: at every
 * charged history the conditional law of the next action, and the uniform
 * kernel on uncharged histories.
 */
template <class T>
HistoryPolicy<T> extract_policy(const StrategicMeasure<T>& p, const BasicFiniteMdp<T>& mdp) {
    using Key = std::pair<Trajectory, std::size_t>;  // (past pairs, current state)
    auto table = std::make_shared<std::map<Key, ActionDist<T>>>();
    for (const auto& atom : p.atoms) {
        if (atom.mass == T(0)) continue;
        for (std::size_t n = 0; n < atom.path.size(); ++n) {
            Key key{Trajectory(atom.path.begin(), atom.path.begin() + static_cast<std::ptrdiff_t>(n)),
                    atom.path[n].state};
            auto& dist = (*table)[key];
            if (dist.empty()) dist.assign(mdp.num_actions(atom.path[n].state), T(0));
            dist[atom.path[n].action] += atom.mass;
        }
    }
    for (auto& [key, dist] : *table) {
        T sum(0);
        for (const T& w : dist) sum += w;
        for (T& w : dist) w /= sum;
    }
    std::vector<std::size_t> counts(mdp.num_states());
    for (std::size_t x = 0; x < mdp.num_states(); ++x) counts[x] = mdp.num_actions(x);

    HistoryPolicy<T> policy;
    policy.horizon = p.horizon;
    policy.rule = [table, counts](std::span<const StateAction> past, std::size_t x) {
        const auto it = table->find(Key{Trajectory(past.begin(), past.end()), x});
        if (it != table->end()) return it->second;
        const std::size_t m = counts.at(x);
        return ActionDist<T>(m, T(1) / T(static_cast<long>(m)));
    };
    return policy;
}

/// rho1 = state marginal, rho2(.|x) = conditional action law.
template <class T>
struct KernelDecomposition {
    std::vector<T> rho1;
    StationaryKernel<T> rho2;
};

/**
 * Splits a joint law on admissible pairs into its state marginal and action
 * conditional. States with zero marginal get the uniform kernel on A(x).
 */
template <class T>
KernelDecomposition<T> decompose_joint(const StateActionTable<T>& gamma) {
    KernelDecomposition<T> out;
    out.rho1 = state_marginal(gamma);
    T total(0);
    for (const T& w : out.rho1) total += w;
    if (!prob_equal(total, T(1))) throw InvalidArgument("joint law must have unit mass");
    out.rho2.resize(gamma.size());
    for (std::size_t x = 0; x < gamma.size(); ++x) {
        const std::size_t m = gamma[x].size();
        if (m == 0) throw EmptyActionSet("state " + std::to_string(x) + " has no admissible action");
        if (out.rho1[x] == T(0)) {
            out.rho2[x].assign(m, T(1) / T(static_cast<long>(m)));
            continue;
        }
        out.rho2[x].resize(m);
        for (std::size_t a = 0; a < m; ++a) out.rho2[x][a] = gamma[x][a] / out.rho1[x];
    }
    return out;
}

template <class T>
StateActionTable<T> recompose(const KernelDecomposition<T>& d) {
    StateActionTable<T> out(d.rho1.size());
    for (std::size_t x = 0; x < d.rho1.size(); ++x) {
        out[x].resize(d.rho2[x].size());
        for (std::size_t a = 0; a < d.rho2[x].size(); ++a) out[x][a] = d.rho2[x][a] * d.rho1[x];
    }
    return out;
}

/**
 * Markov policy with the same (x_n, a_n) marginals as `policy` at every
 * stage n <= horizon: mu_n(.|x) is the stage-n conditional of a_n given x_n.
 * Stages past the horizon repeat the last kernel.
 */
template <class T>
MarkovPolicy<T> markovize(const BasicFiniteMdp<T>& mdp, const Policy<T>& policy, const std::vector<T>& p0,
                          std::size_t horizon, std::size_t cap = kDefaultTableCap) {
    const MarginalSequence<T> seq = stage_marginals(mdp, policy, p0, horizon + 1, cap);
    MarkovPolicy<T> out;
    for (std::size_t n = 0; n <= horizon; ++n) out.prefix.push_back(decompose_joint(seq.gamma[n]).rho2);
    out.cycle.push_back(out.prefix.back());
    out.prefix.pop_back();
    return out;
}

template <class T>
struct SemiStationaryReconstruction {
    StationaryKernel<T> kernel;
    std::vector<StateActionTable<T>> reproduced;
    /// max |reproduced_k(x,a) - gamma_k(x,a)| over the prefix
    double mismatch = 0.0;
    /// exact equality for rationals, 1e-12 agreement for doubles
    bool reproduces = false;
};

/**
 * Stationary kernel rho2(.|x; g~) read off the geometrically averaged
 * marginal g~ = sum_{k<L} 2^{-k-1} gamma_k / sum_{k<L} 2^{-k-1}, and the
 * marginals it induces from p0. Inputs induced by a stationary policy are
 * reproduced exactly; a nonzero mismatch shows the sequence is not of that
 * form.
 */
template <class T>
SemiStationaryReconstruction<T> semi_stationary_reconstruct(const BasicFiniteMdp<T>& mdp,
                                                            const MarginalSequence<T>& seq) {
    if (seq.gamma.empty()) throw InvalidArgument("marginal sequence is empty");
    if (const auto why = marginal_inconsistency(mdp, seq); !why.empty()) throw InconsistentMarginals(why);

    StateActionTable<T> averaged = zero_table(mdp);
    T weight(1);
    T weight_sum(0);
    for (const auto& g : seq.gamma) {
        weight /= T(2);
        weight_sum += weight;
        for (std::size_t x = 0; x < g.size(); ++x)
            for (std::size_t a = 0; a < g[x].size(); ++a) averaged[x][a] += weight * g[x][a];
    }
    for (auto& row : averaged)
        for (T& w : row) w /= weight_sum;

    SemiStationaryReconstruction<T> out;
    out.kernel = decompose_joint(averaged).rho2;
    const Policy<T> stationary = StationaryPolicy<T>{out.kernel};
    out.reproduced = propagate_markov_marginals(mdp, stationary, seq.p0, seq.gamma.size()).gamma;
    out.reproduces = true;
    for (std::size_t k = 0; k < seq.gamma.size(); ++k)
        for (std::size_t x = 0; x < seq.gamma[k].size(); ++x)
            for (std::size_t a = 0; a < seq.gamma[k][x].size(); ++a) {
                const T diff = ScalarTraits<T>::abs(T(out.reproduced[k][x][a] - seq.gamma[k][x][a]));
                out.mismatch = std::max(out.mismatch, to_double(diff));
                out.reproduces = out.reproduces && prob_equal(out.reproduced[k][x][a], seq.gamma[k][x][a]);
            }
    return out;
}

}  // namespace acmdp
