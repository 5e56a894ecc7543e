#include "acmdp/optimal.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "acmdp/chain.hpp"
#include "acmdp/errors.hpp"
#include "acmdp/graph.hpp"
#include "acmdp/linalg.hpp"
#include "acmdp/strategic.hpp"

namespace acmdp {

namespace {

// Ties within this margin keep the incumbent action.
constexpr double kImproveTol = 1e-10;

constexpr double kReachStep = 1e-12;
// Actions within this margin of the iterated value count as optimal.
constexpr double kReachTieTol = 1e-9;
constexpr std::size_t kReachMaxSweeps = 50'000'000;

std::vector<bool> state_mask(std::size_t n, const std::vector<std::size_t>& states, const char* what) {
    std::vector<bool> mask(n, false);
    for (std::size_t s : states) {
        if (s >= n) throw InvalidArgument(std::string(what) + " state " + std::to_string(s) + " out of range");
        mask[s] = true;
    }
    return mask;
}

double expect(std::span<const double> row, const std::vector<double>& v) {
    double s = 0.0;
    for (std::size_t y = 0; y < row.size(); ++y)
        if (row[y] != 0.0) s += row[y] * v[y];
    return s;
}

// Lowest index attaining the minimum unless the incumbent already does.
std::size_t pick(const std::vector<double>& values, const std::vector<bool>& allowed, std::size_t incumbent) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < values.size(); ++a)
        if (allowed[a]) best = std::min(best, values[a]);
    if (allowed[incumbent] && values[incumbent] <= best + kImproveTol) return incumbent;
    for (std::size_t a = 0; a < values.size(); ++a)
        if (allowed[a] && values[a] <= best + kImproveTol) return a;
    return incumbent;
}

bool support_within(std::span<const double> row, const std::vector<bool>& inside) {
    for (std::size_t y = 0; y < row.size(); ++y)
        if (row[y] > 0.0 && !inside[y]) return false;
    return true;
}

bool support_meets(std::span<const double> row, const std::vector<bool>& set) {
    for (std::size_t y = 0; y < row.size(); ++y)
        if (row[y] > 0.0 && set[y]) return true;
    return false;
}

}  // namespace

std::string to_string(SolveMethod method) {
    return method == SolveMethod::Enumeration ? "enumeration" : "policy-iteration";
}

PolicyValue evaluate_deterministic(const FiniteMdp& mdp, const std::vector<std::size_t>& policy) {
    const auto mu = deterministic_kernel(mdp, std::span<const std::size_t>(policy));
    const MarkovChain chain = induced_chain(mdp, mu);
    const CesaroLimit limit = cesaro_matrix(chain, decompose(chain));
    const std::vector<double> c = induced_cost(mdp, mu);
    const std::size_t n = chain.size();

    PolicyValue out;
    out.g = right_multiply(limit.P_star, std::span<const double>(c));
    const Eigen::MatrixXd P = to_eigen(chain.P);
    const Eigen::MatrixXd Ps = to_eigen(limit.P_star);
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    Eigen::VectorXd cv(static_cast<Eigen::Index>(n));
    for (std::size_t x = 0; x < n; ++x) cv(static_cast<Eigen::Index>(x)) = c[x];
    const Eigen::MatrixXd h = solve_checked(I - P + Ps, (I - Ps) * cv, "bias equations");
    out.h.resize(n);
    for (std::size_t x = 0; x < n; ++x) out.h[x] = h(static_cast<Eigen::Index>(x), 0);
    return out;
}

GainBiasSolution optimal_gain_enum(const FiniteMdp& mdp) {
    const std::size_t n = mdp.num_states();
    double total = 1.0;
    for (std::size_t x = 0; x < n; ++x) total *= static_cast<double>(mdp.num_actions(x));
    if (total > static_cast<double>(kMaxEnumeratedPolicies))
        throw EnumerationTooLarge("MDP has " + format_double(total) + " deterministic policies; the cap is 1e6");

    auto advance = [&](std::vector<std::size_t>& d) {
        for (std::size_t x = 0; x < n; ++x) {
            if (++d[x] < mdp.num_actions(x)) return true;
            d[x] = 0;
        }
        return false;
    };

    std::vector<double> gmin(n, std::numeric_limits<double>::infinity());
    std::vector<std::size_t> d(n, 0);
    do {
        const auto v = evaluate_deterministic(mdp, d);
        for (std::size_t x = 0; x < n; ++x) gmin[x] = std::min(gmin[x], v.g[x]);
    } while (advance(d));

    // First policy in enumeration order attaining the minimum everywhere;
    // one always exists on a finite MDP.
    GainBiasSolution best;
    best.method = SolveMethod::Enumeration;
    best.iterations = static_cast<std::size_t>(total);
    std::fill(d.begin(), d.end(), 0);
    do {
        auto v = evaluate_deterministic(mdp, d);
        bool attains = true;
        for (std::size_t x = 0; x < n && attains; ++x) attains = v.g[x] <= gmin[x] + kGainTol;
        if (attains) {
            best.g = gmin;
            best.h = std::move(v.h);
            best.policy = d;
            return best;
        }
    } while (advance(d));
    throw NonConvergence("no deterministic policy attains the state-wise minimal gain");
}

GainBiasSolution optimal_gain_pi(const FiniteMdp& mdp) {
    const std::size_t n = mdp.num_states();
    std::vector<std::size_t> d(n, 0);
    std::set<std::vector<std::size_t>> seen;
    GainBiasSolution out;
    out.method = SolveMethod::PolicyIteration;

    for (;;) {
        if (!seen.insert(d).second) throw CyclingDetected("policy iteration revisited a policy");
        ++out.iterations;
        const PolicyValue v = evaluate_deterministic(mdp, d);

        // Gain improvement.
        std::vector<std::size_t> next = d;
        for (std::size_t x = 0; x < n; ++x) {
            std::vector<double> vals(mdp.num_actions(x));
            for (std::size_t a = 0; a < vals.size(); ++a) vals[a] = expect(mdp.transition(x, a), v.g);
            next[x] = pick(vals, std::vector<bool>(vals.size(), true), d[x]);
        }
        if (next != d) {
            d = std::move(next);
            continue;
        }

        // Bias improvement over the gain-attaining actions.
        for (std::size_t x = 0; x < n; ++x) {
            const std::size_t m = mdp.num_actions(x);
            std::vector<double> gain_vals(m), vals(m);
            double gbest = std::numeric_limits<double>::infinity();
            for (std::size_t a = 0; a < m; ++a) {
                gain_vals[a] = expect(mdp.transition(x, a), v.g);
                gbest = std::min(gbest, gain_vals[a]);
                vals[a] = mdp.cost(x, a) + expect(mdp.transition(x, a), v.h);
            }
            std::vector<bool> allowed(m);
            for (std::size_t a = 0; a < m; ++a) allowed[a] = gain_vals[a] <= gbest + kImproveTol;
            next[x] = pick(vals, allowed, d[x]);
        }
        if (next != d) {
            d = std::move(next);
            continue;
        }
        out.g = v.g;
        out.h = v.h;
        out.policy = d;
        return out;
    }
}

GainInequalityReport verify_gain_inequality(const FiniteMdp& mdp, const std::vector<double>& g) {
    const std::size_t n = mdp.num_states();
    if (g.size() != n) throw DimensionMismatch("g has wrong length");
    GainInequalityReport r;
    r.slack.resize(n);
    r.min_slack.assign(n, std::numeric_limits<double>::infinity());
    r.verdict = true;
    r.per_action_verdict = true;
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t a = 0; a < mdp.num_actions(x); ++a) {
            const double s = expect(mdp.transition(x, a), g) - g[x];
            r.slack[x].push_back(s);
            r.min_slack[x] = std::min(r.min_slack[x], s);
            if (s < -kGainTol) r.per_action_verdict = false;
        }
        if (r.min_slack[x] < -kGainTol) r.verdict = false;
    }
    return r;
}

SubmartingaleTrace submartingale_check(const FiniteMdp& mdp, const Policy<double>& policy,
                                       const std::vector<double>& g, std::size_t x0, std::size_t horizon) {
    const std::size_t n = mdp.num_states();
    if (g.size() != n) throw DimensionMismatch("g has wrong length");
    if (x0 >= n) throw InvalidArgument("start state out of range");
    if (horizon > kMaxSubmartingaleHorizon) throw HorizonOverflow("submartingale horizon exceeds 1e5");
    std::vector<double> p0(n, 0.0);
    p0[x0] = 1.0;
    const auto seq = stage_marginals(mdp, policy, p0, horizon);

    SubmartingaleTrace t;
    t.min_conditional_increment = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < seq.gamma.size(); ++k) {
        const auto& gamma = seq.gamma[k];
        double now = 0.0, after = 0.0;
        for (std::size_t x = 0; x < n; ++x)
            for (std::size_t a = 0; a < gamma[x].size(); ++a) {
                const double w = gamma[x][a];
                if (w <= 0.0) continue;
                const double step = expect(mdp.transition(x, a), g);
                now += w * g[x];
                after += w * step;
                const double inc = step - g[x];
                t.min_conditional_increment = std::min(t.min_conditional_increment, inc);
                if (inc < -kGainTol && !t.first_violation) t.first_violation = k;
            }
        t.increments.push_back(after - now);
    }
    if (seq.gamma.empty()) t.min_conditional_increment = 0.0;
    t.verdict = !t.first_violation.has_value();
    return t;
}

ReachabilityResult max_reachability(const FiniteMdp& mdp, const std::vector<std::size_t>& target) {
    const std::size_t n = mdp.num_states();
    if (target.empty()) throw EmptyTargetSet("target set is empty");
    const std::vector<bool> in_b = state_mask(n, target, "target");

    // Prob0: no action path to B.
    Adjacency adj(n);
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t a = 0; a < mdp.num_actions(x); ++a) {
            const auto row = mdp.transition(x, a);
            for (std::size_t y = 0; y < n; ++y)
                if (row[y] > 0.0) adj[x].push_back(y);
        }
    const std::vector<bool> reach = can_reach(adj, in_b);

    // Prob1E: greatest U such that B is reached with probability 1 while
    // staying in U; the last attractor pass supplies the witness actions.
    std::vector<bool> u(n, true);
    std::vector<std::size_t> attractor_action(n, 0);
    for (;;) {
        std::vector<bool> r = in_b;
        bool grew = true;
        while (grew) {
            grew = false;
            for (std::size_t x = 0; x < n; ++x) {
                if (r[x] || !u[x]) continue;
                for (std::size_t a = 0; a < mdp.num_actions(x); ++a) {
                    const auto row = mdp.transition(x, a);
                    if (support_within(row, u) && support_meets(row, r)) {
                        r[x] = true;
                        attractor_action[x] = a;
                        grew = true;
                        break;
                    }
                }
            }
        }
        if (r == u) break;
        u = std::move(r);
    }

    ReachabilityResult out;
    out.prob.assign(n, 0.0);
    out.witness.assign(n, 0);
    std::vector<bool> unknown(n, false);
    for (std::size_t x = 0; x < n; ++x) {
        if (u[x]) {
            out.prob[x] = 1.0;
            out.witness[x] = in_b[x] ? 0 : attractor_action[x];
        } else if (reach[x]) {
            unknown[x] = true;
        }
    }

    for (std::size_t sweep = 0;; ++sweep) {
        if (sweep >= kReachMaxSweeps) throw NonConvergence("reachability value iteration did not converge");
        std::vector<double> next = out.prob;
        double step = 0.0;
        for (std::size_t x = 0; x < n; ++x) {
            if (!unknown[x]) continue;
            double best = 0.0;
            std::size_t arg = 0;
            for (std::size_t a = 0; a < mdp.num_actions(x); ++a) {
                const double v = expect(mdp.transition(x, a), out.prob);
                if (v > best + kReachStep) {
                    best = v;
                    arg = a;
                }
            }
            next[x] = best;
            out.witness[x] = arg;
            step = std::max(step, std::fabs(best - out.prob[x]));
        }
        out.prob = std::move(next);
        if (step < kReachStep) break;
    }

    // Greedy argmax actions can circulate among states of equal value. Pick
    // the witness among near-optimal actions in attractor order so that every
    // choice moves toward already settled states, then evaluate it exactly.
    std::vector<bool> settled(n, false);
    for (std::size_t x = 0; x < n; ++x) settled[x] = !unknown[x];
    for (bool grew = true; grew;) {
        grew = false;
        for (std::size_t x = 0; x < n; ++x) {
            if (settled[x]) continue;
            for (std::size_t a = 0; a < mdp.num_actions(x); ++a) {
                const auto row = mdp.transition(x, a);
                if (expect(row, out.prob) >= out.prob[x] - kReachTieTol && support_meets(row, settled)) {
                    out.witness[x] = a;
                    settled[x] = true;
                    grew = true;
                    break;
                }
            }
        }
    }
    bool any_unknown = false;
    for (std::size_t x = 0; x < n; ++x) any_unknown = any_unknown || unknown[x];
    if (any_unknown) {
        const MarkovChain chain =
            induced_chain(mdp, deterministic_kernel(mdp, std::span<const std::size_t>(out.witness)));
        const std::vector<double> exact = hitting_probability(chain, target);
        for (std::size_t x = 0; x < n; ++x)
            if (unknown[x]) out.prob[x] = exact[x];
    }
    return out;
}

ReachabilityCondition check_reachability_condition(const FiniteMdp& mdp, const std::vector<std::size_t>& lambda_support,
                                                   const std::vector<std::size_t>& xhat) {
    const std::size_t n = mdp.num_states();
    if (lambda_support.empty()) throw EmptyTargetSet("lambda support is empty");
    const auto in_xhat = state_mask(n, xhat, "Xhat");
    for (std::size_t y : lambda_support)
        if (y >= n || !in_xhat[y]) throw InvalidArgument("lambda support must lie inside Xhat");
    ReachabilityCondition out;
    out.holds = true;
    for (std::size_t y : lambda_support) {
        const auto r = max_reachability(mdp, {y});
        for (std::size_t x : xhat)
            if (r.prob[x] != 1.0) {
                out.holds = false;
                if (!out.failure) out.failure = std::make_pair(y, x);
            }
        out.witnesses.push_back({y, r.witness});
    }
    return out;
}

std::string to_string(ConstancyVerdict verdict) {
    switch (verdict) {
        case ConstancyVerdict::ConclusionsHold:
            return "conclusions-hold";
        case ConstancyVerdict::HypothesisFailure:
            return "uniform-integrability-fails";
        case ConstancyVerdict::Violated:
            return "violated";
    }
    return "unknown";
}

ConstancyReport constancy_report(const FiniteMdp& mdp, const std::vector<double>& g,
                                 const std::vector<std::size_t>& lambda_support,
                                 const std::vector<std::size_t>& xhat, bool uniformly_integrable) {
    const std::size_t n = mdp.num_states();
    if (g.size() != n) throw DimensionMismatch("g has wrong length");
    if (lambda_support.empty()) throw EmptyTargetSet("lambda support is empty");
    state_mask(n, lambda_support, "lambda support");
    state_mask(n, xhat, "Xhat");

    ConstancyReport r;
    r.lambda_support = lambda_support;
    std::sort(r.lambda_support.begin(), r.lambda_support.end());
    r.ell = g[r.lambda_support.front()];
    for (std::size_t y : r.lambda_support)
        if (std::fabs(g[y] - r.ell) > kGainTol)
            throw NonConstantOnSupport("g differs on the support of lambda: g(" +
                                       std::to_string(r.lambda_support.front()) + ") = " + format_double(r.ell) +
                                       ", g(" + std::to_string(y) + ") = " + format_double(g[y]));
    for (std::size_t x = 0; x < n; ++x)
        if (std::fabs(g[x] - r.ell) <= kGainTol) r.support.push_back(x);
    std::vector<std::size_t> sorted_xhat = xhat;
    std::sort(sorted_xhat.begin(), sorted_xhat.end());
    sorted_xhat.erase(std::unique(sorted_xhat.begin(), sorted_xhat.end()), sorted_xhat.end());
    for (std::size_t x : sorted_xhat)
        if (g[x] > r.ell + kGainTol) r.upper_violations.push_back(x);
    if (r.upper_violations.empty()) r.verdict = ConstancyVerdict::ConclusionsHold;
    else r.verdict = uniformly_integrable ? ConstancyVerdict::Violated : ConstancyVerdict::HypothesisFailure;
    return r;
}

ConnectedClasses connected_classes(const FiniteMdp& mdp) {
    const std::size_t n = mdp.num_states();
    std::vector<std::vector<bool>> keep(n);
    for (std::size_t x = 0; x < n; ++x) keep[x].assign(mdp.num_actions(x), true);
    std::vector<bool> alive(n, true);

    SccResult scc;
    for (;;) {
        Adjacency adj(n);
        for (std::size_t x = 0; x < n; ++x) {
            if (!alive[x]) continue;
            for (std::size_t a = 0; a < keep[x].size(); ++a) {
                if (!keep[x][a]) continue;
                const auto row = mdp.transition(x, a);
                for (std::size_t y = 0; y < n; ++y)
                    if (row[y] > 0.0) adj[x].push_back(y);
            }
        }
        scc = strongly_connected_components(adj);
        bool changed = false;
        for (std::size_t x = 0; x < n; ++x) {
            if (!alive[x]) continue;
            bool any = false;
            for (std::size_t a = 0; a < keep[x].size(); ++a) {
                if (!keep[x][a]) continue;
                const auto row = mdp.transition(x, a);
                bool stays = true;
                for (std::size_t y = 0; y < n && stays; ++y)
                    if (row[y] > 0.0 && (!alive[y] || scc.component[y] != scc.component[x])) stays = false;
                if (!stays) {
                    keep[x][a] = false;
                    changed = true;
                } else {
                    any = true;
                }
            }
            if (!any) {
                alive[x] = false;
                changed = true;
            }
        }
        if (!changed) break;
    }

    ConnectedClasses out;
    std::vector<std::vector<std::size_t>> by_component(scc.count);
    for (std::size_t x = 0; x < n; ++x) {
        if (alive[x]) by_component[scc.component[x]].push_back(x);
        else out.transient.push_back(x);
    }
    for (auto& c : by_component)
        if (!c.empty()) out.classes.push_back(std::move(c));
    std::sort(out.classes.begin(), out.classes.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    out.weakly_communicating = out.classes.size() == 1;
    return out;
}

}  // namespace acmdp
