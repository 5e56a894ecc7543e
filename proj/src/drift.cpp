#include "acmdp/drift.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace acmdp {

DriftReport check_drift(const FiniteMdp& mdp, const DriftCertificate& cert) {
    const std::size_t n = mdp.num_states();
    if (cert.w.size() != n)
        throw DimensionMismatch("drift weights have " + std::to_string(cert.w.size()) + " entries, MDP has " +
                                std::to_string(n) + " states");
    if (!(cert.beta >= 0.0 && cert.beta < 1.0)) throw InvalidArgument("beta must lie in [0, 1)");
    if (!(cert.b >= 0.0)) throw InvalidArgument("b must be nonnegative");
    for (double wx : cert.w)
        if (!(wx >= 0.0) || !std::isfinite(wx)) throw InvalidArgument("weights must be finite and nonnegative");

    DriftReport report;
    report.drift_slack.resize(n);
    report.cost_slack.resize(n);
    bool ok = true;
    for (std::size_t x = 0; x < n; ++x) {
        double sup_next = -std::numeric_limits<double>::infinity();
        double sup_cost = 0.0;
        for (std::size_t a = 0; a < mdp.num_actions(x); ++a) {
            double expected = 0.0;
            const auto row = mdp.transition(x, a);
            for (std::size_t y = 0; y < n; ++y) expected += cert.w[y] * row[y];
            sup_next = std::max(sup_next, expected);
            sup_cost = std::max(sup_cost, std::max(mdp.cost(x, a), 0.0));
        }
        report.drift_slack[x] = cert.beta * cert.w[x] + cert.b - sup_next;
        report.cost_slack[x] = cert.w[x] - sup_cost;
        ok = ok && report.drift_slack[x] >= -kDriftSlackTol && report.cost_slack[x] >= -kDriftSlackTol;
    }
    report.verdict = ok;
    if (ok) report.gain_upper_bound = cert.b / (1.0 - cert.beta);
    return report;
}

std::string to_string(CostModel model) {
    switch (model) {
        case CostModel::ACplus: return "AC+";
        case CostModel::ACminus: return "AC-";
        case CostModel::Both: return "AC+ and AC-";
    }
    return "?";
}

CostModel classify_cost_model(const FiniteMdp& /*mdp*/) { return CostModel::Both; }

CostModel classify_cost_model(const ExtendedCostTable& costs) {
    bool plus = false;
    bool minus = false;
    for (const auto& row : costs)
        for (const auto& c : row) {
            if (c.kind == ExtendedCost::Kind::Finite && !std::isfinite(c.value))
                throw NonFiniteCost("finite-tagged cost is not finite; use a sentinel");
            plus = plus || c.kind == ExtendedCost::Kind::PlusInfinity;
            minus = minus || c.kind == ExtendedCost::Kind::MinusInfinity;
        }
    if (plus && minus)
        throw BothSignsUnbounded("costs carry both +inf and -inf; neither finiteness condition can be certified");
    if (plus) return CostModel::ACplus;
    if (minus) return CostModel::ACminus;
    return CostModel::Both;
}

}  // namespace acmdp
