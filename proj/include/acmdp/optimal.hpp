#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "acmdp/mdp.hpp"
#include "acmdp/policy.hpp"

namespace acmdp {

enum class SolveMethod { Enumeration, PolicyIteration };
std::string to_string(SolveMethod method);

/// Largest number of deterministic stationary policies optimal_gain_enum visits.
inline constexpr std::size_t kMaxEnumeratedPolicies = 1'000'000;

/**
 * Optimal gain g, a bias h and a deterministic stationary policy attaining
 * g. For policy iteration (g, h, policy) solve the two multichain
 * optimality equations.
 */
struct GainBiasSolution {
    std::vector<double> g;
    std::vector<double> h;
    std::vector<std::size_t> policy;
    SolveMethod method = SolveMethod::PolicyIteration;
    std::size_t iterations = 0;
};

/// Gain g = P* c and bias h = (I - P + P*)^{-1} (I - P*) c of a deterministic policy.
struct PolicyValue {
    std::vector<double> g;
    std::vector<double> h;
};
PolicyValue evaluate_deterministic(const FiniteMdp& mdp, const std::vector<std::size_t>& policy);

/// State-wise minimum of P* c over all deterministic stationary policies.
GainBiasSolution optimal_gain_enum(const FiniteMdp& mdp);

/// Multichain policy iteration: gain improvement, then bias improvement over
/// the gain-attaining actions. Ties keep the current action, otherwise the
/// lowest improving action index wins.
GainBiasSolution optimal_gain_pi(const FiniteMdp& mdp);

/// Tolerance on gain inequalities and constancy comparisons.
inline constexpr double kGainTol = 1e-9;

struct GainInequalityReport {
    /// slack[x][a] = sum_y q(y|x,a) g(y) - g(x)
    std::vector<std::vector<double>> slack;
    std::vector<double> min_slack;
    /// min_a slack(x,a) >= -1e-9 at every x.
    bool verdict = false;
    /// slack(x,a) >= -1e-9 for every admissible pair.
    bool per_action_verdict = false;
};
GainInequalityReport verify_gain_inequality(const FiniteMdp& mdp, const std::vector<double>& g);

struct SubmartingaleTrace {
    /// E[g(x_{n+1})] - E[g(x_n)] for n < horizon.
    std::vector<double> increments;
    /// Smallest E[g(x_{n+1}) | x_n, a_n] - g(x_n) over charged pairs.
    double min_conditional_increment = 0.0;
    /// First stage with a negative conditional increment, if any.
    std::optional<std::size_t> first_violation;
    bool verdict = true;
};

inline constexpr std::size_t kMaxSubmartingaleHorizon = 100'000;

/// Exact trace of g along the marginals of the policy from x0.
SubmartingaleTrace submartingale_check(const FiniteMdp& mdp, const Policy<double>& policy,
                                       const std::vector<double>& g, std::size_t x0, std::size_t horizon);

struct ReachabilityResult {
    std::vector<double> prob;
    /// Deterministic stationary policy attaining prob.
    std::vector<std::size_t> witness;
};

/// sup_pi P_x(tau_B < inf), exact on the 0/1 sets, value iteration elsewhere.
ReachabilityResult max_reachability(const FiniteMdp& mdp, const std::vector<std::size_t>& target);

struct ReachabilityWitness {
    std::size_t target = 0;
    std::vector<std::size_t> policy;
};

struct ReachabilityCondition {
    bool holds = false;
    std::vector<ReachabilityWitness> witnesses;
    /// (target, start) of the first failure.
    std::optional<std::pair<std::size_t, std::size_t>> failure;
};

/// Every y in lambda_support is reached with probability 1 from every x in
/// xhat by some policy. Singleton targets suffice.
ReachabilityCondition check_reachability_condition(const FiniteMdp& mdp, const std::vector<std::size_t>& lambda_support,
                                                   const std::vector<std::size_t>& xhat);

enum class ConstancyVerdict { ConclusionsHold, HypothesisFailure, Violated };
std::string to_string(ConstancyVerdict verdict);

struct ConstancyReport {
    double ell = 0.0;
    std::vector<std::size_t> support;
    std::vector<std::size_t> upper_violations;
    std::vector<std::size_t> lambda_support;
    ConstancyVerdict verdict = ConstancyVerdict::ConclusionsHold;
};

/**
 * ell = g on lambda_support (NonConstantOnSupport otherwise); support is
 * {g = ell}; upper_violations are the states of xhat with g > ell + 1e-9.
 * Violations are attributed to the uniform-integrability hypothesis when
 * `uniformly_integrable` is false; finite models always satisfy it.
 */
ConstancyReport constancy_report(const FiniteMdp& mdp, const std::vector<double>& g,
                                 const std::vector<std::size_t>& lambda_support,
                                 const std::vector<std::size_t>& xhat, bool uniformly_integrable = true);

struct ConnectedClasses {
    /// Maximal end components, each sorted, ordered by smallest member.
    std::vector<std::vector<std::size_t>> classes;
    /// States in no class: transient under every policy.
    std::vector<std::size_t> transient;
    bool weakly_communicating = false;
};

ConnectedClasses connected_classes(const FiniteMdp& mdp);

}  // namespace acmdp
