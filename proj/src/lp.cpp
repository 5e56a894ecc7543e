#include "acmdp/lp.hpp"

#include <cmath>
#include <limits>

#include "acmdp/policy.hpp"

namespace acmdp {

std::string to_string(SimplexStatus status) {
    switch (status) {
        case SimplexStatus::Optimal:
            return "optimal";
        case SimplexStatus::Infeasible:
            return "infeasible";
        case SimplexStatus::Unbounded:
            return "unbounded";
    }
    return "unknown";
}

std::string to_string(WeightScheme scheme) { return scheme == WeightScheme::Geometric ? "geometric" : "uniform"; }

WeightScheme parse_weight_scheme(const std::string& name) {
    if (name == "geometric") return WeightScheme::Geometric;
    if (name == "uniform") return WeightScheme::Uniform;
    throw InvalidArgument("unknown weight scheme '" + name + "' (expected geometric or uniform)");
}

std::string to_string(LpStatus status) {
    switch (status) {
        case LpStatus::Feasible:
            return "feasible";
        case LpStatus::Infeasible:
            return "infeasible";
        case LpStatus::Unbounded:
            return "unbounded";
    }
    return "unknown";
}

LpProgram<double> build_lp(const MarkovChain& chain, const std::vector<double>& b) { return build_lp(chain.P, b); }

template <class T>
TruncationStudy truncation_study(const CountableMdp<T>& model, const std::vector<std::size_t>& Ks,
                                 WeightScheme scheme) {
    if (Ks.empty()) throw InvalidArgument("no truncation levels given");
    for (std::size_t i = 1; i < Ks.size(); ++i)
        if (Ks[i] <= Ks[i - 1]) throw InvalidArgument("truncation levels must be strictly increasing");

    TruncationStudy study;
    study.nu_bound_holds = true;
    for (std::size_t K : Ks) {
        const BasicFiniteMdp<T> mdp = truncate(model, K);
        const std::vector<std::size_t> first(mdp.num_states(), 0);
        const Matrix<T> P = induced_matrix(mdp, deterministic_kernel(mdp, std::span<const std::size_t>(first)));
        const LpProgram<T> lp = build_lp(P, make_weights<T>(scheme, K + 1));
        const LpOutcome<T> out = solve_lp(lp);

        TruncationRow row;
        row.K = K;
        row.status = out.status;
        row.pivots = out.pivots;
        row.mode = ScalarTraits<T>::exact ? "exact" : "float";
        if (out.status == LpStatus::Feasible) {
            row.min_mass = to_double(*out.objective);
            for (const T& v : out.nu) row.nu.push_back(to_double(v));
            row.nu1 = K >= 1 ? row.nu[1] : 0.0;
            row.nu_bound_holds = true;
            T chain_factor(1);
            for (std::size_t k = 1; k <= K; ++k) {
                if (k >= 2) chain_factor *= P(k - 1, k);
                const double bound = to_double(T(chain_factor * out.nu[1]));
                if (row.nu[k] < bound - 1e-8) row.nu_bound_holds = false;
            }
        } else {
            row.min_mass = std::numeric_limits<double>::quiet_NaN();
        }
        study.nu_bound_holds = study.nu_bound_holds && row.nu_bound_holds;
        study.rows.push_back(std::move(row));
    }

    study.strictly_increasing = true;
    for (std::size_t i = 1; i < study.rows.size(); ++i) {
        const double d = study.rows[i].min_mass - study.rows[i - 1].min_mass;
        study.increments.push_back(d);
        if (!(d > 0.0)) study.strictly_increasing = false;
        if (Ks[i] == 2 * Ks[i - 1]) ++study.doublings;
    }
    bool steady = !study.increments.empty();
    for (double d : study.increments)
        if (!(d > 0.0) || d < 0.5 * study.increments.front()) steady = false;
    study.divergence_verdict = study.doublings >= 4 && study.doublings == study.increments.size() && steady;
    return study;
}

template TruncationStudy truncation_study<double>(const CountableMdp<double>&, const std::vector<std::size_t>&,
                                                  WeightScheme);
template TruncationStudy truncation_study<Rational>(const CountableMdp<Rational>&, const std::vector<std::size_t>&,
                                                    WeightScheme);

}  // namespace acmdp
