#pragma once

#include <optional>
#include <string>
#include <vector>

#include "acmdp/mdp.hpp"

namespace acmdp {

/**
 * Weighted drift certificate: weights w >= 0 and constants beta in [0,1),
 * b >= 0 such that for every state x
 *
 *     sup_a sum_y w(y) q(y|x,a) <= beta w(x) + b,     sup_a c+(x,a) <= w(x).
 *
 * When both hold, every average cost is bounded above by b / (1 - beta).
 */
struct DriftCertificate {
    std::vector<double> w;
    double beta = 0.0;
    double b = 0.0;
};

struct DriftReport {
    /// beta w(x) + b - sup_a E[w(x_1) | x, a]
    std::vector<double> drift_slack;
    /// w(x) - sup_a c+(x, a)
    std::vector<double> cost_slack;
    bool verdict = false;
    /// b / (1 - beta); present only when the verdict is true.
    std::optional<double> gain_upper_bound;
};

/// Slack threshold below which an inequality counts as violated.
inline constexpr double kDriftSlackTol = 1e-12;

DriftReport check_drift(const FiniteMdp& mdp, const DriftCertificate& cert);

enum class CostModel { ACplus, ACminus, Both };

std::string to_string(CostModel model);

/// One-stage cost that may carry an infinite sentinel. Only used for
/// classification; solvers never see these.
struct ExtendedCost {
    enum class Kind { Finite, PlusInfinity, MinusInfinity };
    Kind kind = Kind::Finite;
    double value = 0.0;

    static ExtendedCost finite(double v) { return {Kind::Finite, v}; }
    static ExtendedCost plus_infinity() { return {Kind::PlusInfinity, 0.0}; }
    static ExtendedCost minus_infinity() { return {Kind::MinusInfinity, 0.0}; }
};

using ExtendedCostTable = std::vector<std::vector<ExtendedCost>>;

/// Finite-cost models are in both classes.
CostModel classify_cost_model(const FiniteMdp& mdp);

/// +inf only: c- bounded, AC+. -inf only: c+ bounded, AC-. Both signs throw
/// BothSignsUnbounded.
CostModel classify_cost_model(const ExtendedCostTable& costs);

}  // namespace acmdp
