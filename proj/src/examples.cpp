#include "acmdp/examples.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "acmdp/chain.hpp"
#include "acmdp/optimal.hpp"

namespace acmdp {

std::string to_string(AbsorbingCost cost) { return cost == AbsorbingCost::Linear ? "linear" : "bounded"; }

AbsorbingChain harmonic_chain(AbsorbingCost cost) {
    AbsorbingChain chain;
    chain.beta = [](std::size_t k) { return Rational(1) / Rational(static_cast<long>(k) + 1); };
    if (cost == AbsorbingCost::Linear)
        chain.cost = [](std::size_t k) { return Rational(static_cast<long>(k)); };
    else
        chain.cost = [](std::size_t k) { return k == 0 ? Rational(0) : Rational(1); };
    return chain;
}

Rational survival_closed_form(std::size_t k, std::size_t n) {
    if (k == 0) throw InvalidArgument("survival is defined for k >= 1");
    return Rational(static_cast<long>(k)) / Rational(static_cast<long>(k + n));
}

std::vector<Rational> expected_cost_trace(const AbsorbingChain& chain, std::size_t k, std::size_t horizon) {
    const CountableMdp<Rational> model = to_countable<Rational>(chain);
    std::map<std::size_t, Rational> dist{{k, Rational(1)}};
    std::vector<Rational> out;
    out.reserve(horizon + 1);
    for (std::size_t n = 0; n <= horizon; ++n) {
        Rational e(0);
        for (const auto& [y, p] : dist) e += p * model.cost(y, 0);
        out.push_back(e);
        if (n == horizon) break;
        std::map<std::size_t, Rational> next;
        for (const auto& [y, p] : dist)
            for (const auto& [z, q] : model.checked_kernel(y, 0)) next[z] += p * q;
        dist = std::move(next);
    }
    return out;
}

double survival_partial_sum(std::size_t k, std::size_t N) {
    if (k == 0) throw InvalidArgument("survival is defined for k >= 1");
    long double sum = 0.0L;
    long double comp = 0.0L;
    const long double kk = static_cast<long double>(k);
    for (std::size_t n = 0; n < N; ++n) {
        const long double term = kk / (kk + static_cast<long double>(n)) - comp;
        const long double t = sum + term;
        comp = (t - sum) - term;
        sum = t;
    }
    return static_cast<double>(sum);
}

AbsorbingReport absorbing_chain_report(AbsorbingCost cost, std::size_t K, std::size_t horizon) {
    if (K < 2) throw InvalidArgument("truncation level must be at least 2");
    const AbsorbingChain chain = harmonic_chain(cost);
    AbsorbingReport report;
    report.cost = cost;
    report.K = K;
    report.horizon = horizon;

    const FiniteMdp trunc = truncate(to_countable<double>(chain), K);
    const GainBiasSolution sol = optimal_gain_pi(trunc);
    const MarkovChain mc = induced_chain(trunc, uniform_kernel(trunc));
    const std::vector<double> hit = hitting_probability(mc, {0});
    const std::vector<double> times = expected_hitting_time(mc, {0});

    report.expected_cost_identity = true;
    for (std::size_t k = 0; k <= K; ++k) {
        AbsorbingRow row;
        row.k = k;
        row.g_closed_form = cost == AbsorbingCost::Linear ? static_cast<double>(k) : 0.0;
        const std::vector<Rational> trace = expected_cost_trace(chain, k, horizon);
        for (std::size_t n = 0; n <= horizon; ++n) {
            Rational expected;
            if (k == 0) expected = 0;
            else if (cost == AbsorbingCost::Linear) expected = Rational(static_cast<long>(k));
            else expected = survival_closed_form(k, n);
            if (trace[n] != expected) report.expected_cost_identity = false;
        }
        row.expected_cost_at_horizon = to_double(trace.back());
        row.g_truncated = sol.g[k];
        row.hitting_prob = hit[k];
        row.hitting_time_truncated = times[k];
        row.survival_partial = k == 0 ? 0.0 : survival_partial_sum(k, horizon);
        report.max_abs_truncated_gain = std::max(report.max_abs_truncated_gain, std::fabs(row.g_truncated));
        report.rows.push_back(row);
    }
    report.truncated_gain_within_bound = report.max_abs_truncated_gain <= 1.0 / static_cast<double>(K);
    return report;
}

std::string to_string(DemandKind kind) { return kind == DemandKind::TwoPoint ? "two-point" : "uniform"; }

double InventoryWalk::sample_demand(SplitMix64& rng) const {
    if (demand == DemandKind::TwoPoint) return rng.uniform() < 0.5 ? 0.0 : 2.0 * mean_demand;
    return 2.0 * mean_demand * rng.uniform();
}

double InventoryWalk::sample_action(SplitMix64& rng) const {
    const double centre = mean_demand + action_shift;
    if (demand == DemandKind::TwoPoint) return centre - epsilon + 2.0 * epsilon * rng.uniform();
    return centre;
}

RecurrenceProbe walk_recurrence_probe(const InventoryWalk& walk, double lo, double hi, double x0,
                                      std::size_t n_traj, std::size_t horizon, std::uint64_t seed) {
    if (!(lo < hi)) throw InvalidArgument("interval must satisfy lo < hi");
    if (n_traj < 1) throw InvalidArgument("n_traj must be positive");
    RecurrenceProbe probe;
    probe.n_traj = n_traj;
    probe.horizon = horizon;
    for (std::size_t t = 0; t < n_traj; ++t) {
        SplitMix64 rng(seed ^ static_cast<std::uint64_t>(t));
        double x = x0;
        std::size_t hit = horizon + 1;
        for (std::size_t n = 0; n <= horizon; ++n) {
            if (x >= lo && x <= hi) {
                hit = n;
                break;
            }
            const double a = walk.sample_action(rng);
            x += a - walk.sample_demand(rng);
        }
        if (hit <= horizon) ++probe.hits;
        probe.hit_times.push_back(hit);
    }
    const double p = static_cast<double>(probe.hits) / static_cast<double>(n_traj);
    probe.estimate = p;
    probe.std_error = std::sqrt(p * (1.0 - p) / static_cast<double>(n_traj));
    return probe;
}

}  // namespace acmdp
