#include "acmdp/criteria.hpp"

#include <algorithm>
#include <cmath>

#include "acmdp/rng.hpp"

namespace acmdp {

std::string to_string(Method method) { return method == Method::Exact ? "exact" : "estimated"; }

bool CriteriaReport::ordering_holds(double slack) const {
    auto chain_ok = [&](std::size_t base) {
        // value order: J4 <= J2 <= J1 <= J3 (indices base+3, base+1, base, base+2)
        const std::size_t order[4] = {base + 3, base + 1, base, base + 2};
        for (std::size_t x = 0; x < num_states(); ++x)
            for (std::size_t i = 0; i + 1 < 4; ++i) {
                const double lo = value[order[i]][x];
                const double hi = value[order[i + 1]][x];
                if (std::isnan(lo) || std::isnan(hi)) continue;
                const double allowance = est_error[order[i]][x] + est_error[order[i + 1]][x] + slack;
                if (lo > hi + allowance) return false;
            }
        return true;
    };
    return chain_ok(0) && chain_ok(4);
}

namespace {

struct StationaryParts {
    std::vector<double> expected;  // P* c_mu
    std::vector<double> pathwise;  // sum_R absorb(x,R) g_R
};

StationaryParts stationary_parts(const FiniteMdp& mdp, const StationaryKernel<double>& mu) {
    const MarkovChain chain = induced_chain(mdp, mu);
    const ClassDecomposition decomp = decompose(chain);
    const CesaroLimit limit = cesaro_matrix(chain, decomp);
    const std::vector<double> c = induced_cost(mdp, mu);
    const std::size_t n = chain.size();

    StationaryParts out;
    out.expected = right_multiply(limit.P_star, std::span<const double>(c));

    std::vector<double> class_gain(decomp.recurrent_classes.size(), 0.0);
    for (std::size_t r = 0; r < class_gain.size(); ++r)
        for (std::size_t y : decomp.recurrent_classes[r]) class_gain[r] += limit.per_class_stationary[r][y] * c[y];
    out.pathwise.assign(n, 0.0);
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t r = 0; r < class_gain.size(); ++r) out.pathwise[x] += limit.absorption(x, r) * class_gain[r];
    return out;
}

std::size_t ceil_half(std::size_t n) { return (n + 1) / 2; }

}  // namespace

CriteriaReport avg_cost_stationary(const FiniteMdp& mdp, const StationaryKernel<double>& mu) {
    const StationaryParts parts = stationary_parts(mdp, mu);
    CriteriaReport report(mdp.num_states());
    for (std::size_t i = 0; i < 4; ++i) {
        report.value[i] = parts.expected;
        report.value[i + 4] = parts.pathwise;
    }
    report.method = Method::Exact;
    return report;
}

CriteriaReport pathwise_exact(const FiniteMdp& mdp, const StationaryKernel<double>& mu) {
    const StationaryParts parts = stationary_parts(mdp, mu);
    CriteriaReport report(mdp.num_states());
    for (std::size_t i = 4; i < kNumCriteria; ++i) report.value[i] = parts.pathwise;
    report.method = Method::Exact;
    return report;
}

CriteriaReport avg_cost_markov(const FiniteMdp& mdp, const MarkovPolicy<double>& policy, std::size_t horizon,
                               double tol) {
    if (horizon < 1000) throw InvalidArgument("horizon must be at least 1000");
    if (!(tol > 0.0)) throw InvalidArgument("tolerance must be positive");
    const Policy<double> wrapped = policy;
    validate_policy(mdp, wrapped);
    const std::size_t n = mdp.num_states();
    CriteriaReport report(n);

    if (policy.eventually_stationary()) {
        const std::size_t m = policy.switch_stage();
        const CriteriaReport tail = avg_cost_stationary(mdp, policy.cycle.front());
        for (std::size_t x = 0; x < n; ++x) {
            std::vector<double> dist(n, 0.0);
            dist[x] = 1.0;
            for (std::size_t k = 0; k < m; ++k)
                dist = next_state_distribution(mdp, apply_kernel(mdp, dist, policy.at(k)));
            for (std::size_t i = 0; i < kNumCriteria; ++i) {
                double v = 0.0;
                for (std::size_t y = 0; y < n; ++y) v += dist[y] * tail.value[i][y];
                report.value[i][x] = v;
            }
        }
        report.method = Method::Exact;
        return report;
    }

    std::vector<std::size_t> windows;
    for (std::size_t w = 1024; w <= horizon; w *= 2) windows.push_back(w);
    if (windows.empty()) windows.push_back(horizon);
    const std::size_t stages = horizon + windows.back();
    const std::size_t lo = ceil_half(horizon);
    const std::size_t decade = std::max<std::size_t>(1, horizon / 10);

    report.method = Method::Estimated;
    double worst = 0.0;
    for (std::size_t x = 0; x < n; ++x) {
        std::vector<long double> prefix(stages + 1, 0.0L);
        std::vector<double> dist(n, 0.0);
        dist[x] = 1.0;
        for (std::size_t k = 0; k < stages; ++k) {
            const auto g = apply_kernel(mdp, dist, policy.at(k));
            prefix[k + 1] = prefix[k] + expected_cost(mdp, g);
            dist = next_state_distribution(mdp, g);
        }
        double j1 = -std::numeric_limits<double>::infinity();
        double j2 = std::numeric_limits<double>::infinity();
        for (std::size_t m = lo; m <= horizon; ++m) {
            const double avg = static_cast<double>(prefix[m] / static_cast<long double>(m));
            j1 = std::max(j1, avg);
            j2 = std::min(j2, avg);
        }
        double osc_hi = -std::numeric_limits<double>::infinity();
        double osc_lo = std::numeric_limits<double>::infinity();
        for (std::size_t m = decade; m <= horizon; ++m) {
            const double avg = static_cast<double>(prefix[m] / static_cast<long double>(m));
            osc_hi = std::max(osc_hi, avg);
            osc_lo = std::min(osc_lo, avg);
        }
        const double oscillation = osc_hi - osc_lo;

        std::vector<double> sup_w, inf_w;
        for (std::size_t w : windows) {
            double s = -std::numeric_limits<double>::infinity();
            double i = std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j <= horizon; ++j) {
                const double avg = static_cast<double>((prefix[j + w] - prefix[j]) / static_cast<long double>(w));
                s = std::max(s, avg);
                i = std::min(i, avg);
            }
            sup_w.push_back(s);
            inf_w.push_back(i);
        }
        const std::size_t last = windows.size() - 1;
        const double err3 = last > 0 ? std::fabs(sup_w[last] - sup_w[last - 1]) : oscillation;
        const double err4 = last > 0 ? std::fabs(inf_w[last] - inf_w[last - 1]) : oscillation;

        report[Criterion::J1][x] = j1;
        report[Criterion::J2][x] = j2;
        report[Criterion::J3][x] = sup_w[last];
        report[Criterion::J4][x] = inf_w[last];
        report.est_error[0][x] = oscillation;
        report.est_error[1][x] = oscillation;
        report.est_error[2][x] = err3;
        report.est_error[3][x] = err4;
        worst = std::max({worst, oscillation, err3, err4});
    }
    report.converged = worst <= tol;
    if (!report.converged)
        report.diagnostics = "oscillation " + std::to_string(worst) + " exceeds tolerance " + std::to_string(tol);
    return report;
}

namespace {

struct TrajectoryStats {
    std::array<double, 4> est{};
    double spread = 0.0;
    double final_average = 0.0;
};

TrajectoryStats summarize(const std::vector<double>& costs, std::size_t window) {
    const std::size_t h = costs.size();
    std::vector<long double> prefix(h + 1, 0.0L);
    for (std::size_t k = 0; k < h; ++k) prefix[k + 1] = prefix[k] + costs[k];
    TrajectoryStats s;
    double hi = -std::numeric_limits<double>::infinity();
    double lo = std::numeric_limits<double>::infinity();
    for (std::size_t m = ceil_half(h); m <= h; ++m) {
        const double avg = static_cast<double>(prefix[m] / static_cast<long double>(m));
        hi = std::max(hi, avg);
        lo = std::min(lo, avg);
    }
    double whi = -std::numeric_limits<double>::infinity();
    double wlo = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j + window <= h; ++j) {
        const double avg = static_cast<double>((prefix[j + window] - prefix[j]) / static_cast<long double>(window));
        whi = std::max(whi, avg);
        wlo = std::min(wlo, avg);
    }
    s.est = {hi, lo, whi, wlo};
    s.spread = whi - wlo;
    s.final_average = static_cast<double>(prefix[h] / static_cast<long double>(h));
    return s;
}

template <class Simulate>
SimulationEstimate run_simulation(std::size_t n_traj, std::size_t horizon, std::uint64_t seed, Simulate&& one) {
    if (n_traj < 1 || horizon < 1) throw InvalidArgument("n_traj and horizon must be positive");
    SimulationEstimate out;
    out.n_traj = n_traj;
    out.horizon = horizon;
    out.window = ceil_half(horizon);
    std::vector<TrajectoryStats> stats(n_traj);
    std::vector<double> costs(horizon);
    for (std::size_t t = 0; t < n_traj; ++t) {
        SplitMix64 rng(seed ^ static_cast<std::uint64_t>(t));
        one(rng, costs);
        stats[t] = summarize(costs, out.window);
    }
    for (std::size_t i = 0; i < 4; ++i) {
        long double sum = 0.0L;
        for (const auto& s : stats) sum += s.est[i];
        const double mean = static_cast<double>(sum / static_cast<long double>(n_traj));
        long double ss = 0.0L;
        for (const auto& s : stats) ss += (s.est[i] - mean) * (s.est[i] - mean);
        out.mean[i] = mean;
        out.std_error[i] =
            n_traj > 1 ? std::sqrt(static_cast<double>(ss / static_cast<long double>(n_traj - 1)) / n_traj) : 0.0;
    }
    long double spread = 0.0L;
    for (const auto& s : stats) {
        spread += s.spread;
        out.final_average.push_back(s.final_average);
    }
    out.window_spread = static_cast<double>(spread / static_cast<long double>(n_traj));
    return out;
}

}  // namespace

SimulationEstimate simulate_pathwise(const FiniteMdp& mdp, const Policy<double>& policy, std::size_t x,
                                     std::size_t n_traj, std::size_t horizon, std::uint64_t seed) {
    if (x >= mdp.num_states()) throw InvalidArgument("start state out of range");
    validate_policy(mdp, policy);
    const bool history = !is_markov_like(policy);
    return run_simulation(n_traj, horizon, seed, [&](SplitMix64& rng, std::vector<double>& costs) {
        std::size_t state = x;
        Trajectory past;
        for (std::size_t k = 0; k < costs.size(); ++k) {
            std::size_t a;
            if (history) {
                const ActionDist<double> dist = decide(policy, std::span<const StateAction>(past), state);
                a = rng.categorical(dist);
                past.push_back({static_cast<std::uint32_t>(state), static_cast<std::uint32_t>(a)});
            } else {
                a = rng.categorical(stage_kernel(policy, x, k)[state]);
            }
            costs[k] = mdp.cost(state, a);
            state = rng.categorical(mdp.transition(state, a));
        }
    });
}

SimulationEstimate simulate_pathwise(const CountableMdp<double>& model, const CountableRule& rule,
                                     std::size_t x, std::size_t n_traj, std::size_t horizon,
                                     std::uint64_t seed) {
    return run_simulation(n_traj, horizon, seed, [&](SplitMix64& rng, std::vector<double>& costs) {
        std::size_t state = x;
        std::vector<double> masses;
        for (std::size_t k = 0; k < costs.size(); ++k) {
            std::size_t a = 0;
            if (rule) a = rng.categorical(rule(k, state));
            costs[k] = model.cost(state, a);
            const SparseDist<double> next = model.checked_kernel(state, a);
            masses.clear();
            for (const auto& [y, p] : next) masses.push_back(p);
            state = next[rng.categorical(masses)].first;
        }
    });
}

}  // namespace acmdp
