#include "acmdp/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "acmdp/chain.hpp"
#include "acmdp/criteria.hpp"
#include "acmdp/drift.hpp"
#include "acmdp/errors.hpp"
#include "acmdp/examples.hpp"
#include "acmdp/lp.hpp"
#include "acmdp/mdp_io.hpp"
#include "acmdp/optimal.hpp"
#include "acmdp/report.hpp"

namespace acmdp {

namespace {

using nlohmann::json;

/// Everything a command produces before it is written out.
struct Output {
    json report;
    std::vector<std::pair<std::string, CsvTable>> tables;
    bool property_violation = false;
};

std::string read_text(const std::string& path) {
    if (path.empty()) throw InvalidArgument("an input file is required");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json read_json(const std::string& path) {
    try {
        return json::parse(read_text(path));
    } catch (const json::parse_error& e) {
        throw ParseError("'" + path + "' is not valid JSON: " + e.what());
    }
}

template <class T>
BasicFiniteMdp<T> load_mdp(const RunConfig& cfg) {
    return validate_mdp<T>(read_json(cfg.input_path));
}

template <class T>
Policy<T> load_policy(const RunConfig& cfg, const BasicFiniteMdp<T>& mdp) {
    if (cfg.policy_path.empty()) return StationaryPolicy<T>{uniform_kernel(mdp)};
    Policy<T> p = parse_policy<T>(read_json(cfg.policy_path), mdp);
    validate_policy(mdp, p);
    return p;
}

template <class T>
const StationaryKernel<T>& require_stationary(const Policy<T>& p, const std::string& command) {
    if (kind(p) != PolicyKind::Stationary)
        throw InvalidArgument(command + " needs a stationary policy, got " + to_string(kind(p)));
    return std::get<StationaryPolicy<T>>(p).mu;
}

json base_report(const std::string& command) {
    json r;
    r["schema"] = kReportSchema;
    r["command"] = command;
    return r;
}

json index_sets(const std::vector<std::vector<std::size_t>>& sets) {
    json arr = json::array();
    for (const auto& s : sets) arr.push_back(s);
    return arr;
}

// ---------------------------------------------------------------- analyze

Output cmd_analyze(const RunConfig& cfg) {
    const FiniteMdp mdp = load_mdp<double>(cfg);
    const Policy<double> policy = load_policy(cfg, mdp);
    const auto& mu = require_stationary(policy, "analyze");
    Output out;
    out.report = base_report("analyze");
    out.report["n_states"] = mdp.num_states();
    out.report["cost_model"] = to_string(classify_cost_model(mdp));

    const ConnectedClasses cc = connected_classes(mdp);
    out.report["connected_classes"] = {{"classes", index_sets(cc.classes)},
                                       {"transient", cc.transient},
                                       {"classification", cc.weakly_communicating ? "weakly_communicating" : "multichain"}};

    const MarkovChain chain = induced_chain(mdp, mu);
    const ClassDecomposition d = decompose(chain);
    const CesaroLimit lim = cesaro_matrix(chain, d);
    json stationary = json::array();
    for (const auto& pi : lim.per_class_stationary) stationary.push_back(json_numbers(pi));
    json pstar = json::array();
    for (std::size_t x = 0; x < chain.size(); ++x)
        pstar.push_back(json_numbers(std::vector<double>(lim.P_star.row(x).begin(), lim.P_star.row(x).end())));
    out.report["policy_chain"] = {{"recurrent_classes", index_sets(d.recurrent_classes)},
                                  {"transient", d.transient},
                                  {"periods", d.periods},
                                  {"stationary", stationary},
                                  {"P_star", pstar}};

    if (!cfg.drift_path.empty()) {
        const json doc = read_json(cfg.drift_path);
        DriftCertificate cert;
        try {
            cert.w = doc.at("w").get<std::vector<double>>();
            cert.beta = doc.at("beta").get<double>();
            cert.b = doc.at("b").get<double>();
        } catch (const json::exception& e) {
            throw ParseError(std::string("drift certificate needs w, beta, b: ") + e.what());
        }
        const DriftReport dr = check_drift(mdp, cert);
        json drift = {{"drift_slack", json_numbers(dr.drift_slack)},
                      {"cost_slack", json_numbers(dr.cost_slack)},
                      {"verdict", dr.verdict}};
        if (dr.gain_upper_bound) drift["gain_upper_bound"] = json_number(*dr.gain_upper_bound);
        out.report["drift"] = drift;
        out.property_violation = !dr.verdict;
    }

    std::vector<long> connected_of(mdp.num_states(), -1);
    for (std::size_t i = 0; i < cc.classes.size(); ++i)
        for (std::size_t x : cc.classes[i]) connected_of[x] = static_cast<long>(i);
    const std::vector<double> gain = right_multiply(lim.P_star, std::span<const double>(induced_cost(mdp, mu)));
    CsvTable t({"state", "connected_class", "policy_class", "period", "gain"});
    for (std::size_t x = 0; x < mdp.num_states(); ++x) {
        const std::size_t cls = d.class_of[x];
        const bool transient = cls == ClassDecomposition::kTransient;
        t.row({cell(x), std::to_string(connected_of[x]), transient ? "-1" : cell(cls),
               transient ? "0" : cell(d.periods[cls]), cell(gain[x])});
    }
    out.tables.emplace_back("classes.csv", std::move(t));
    return out;
}

// ---------------------------------------------------------------- evaluate

CriteriaReport evaluate_policy(const FiniteMdp& mdp, const Policy<double>& policy, const RunConfig& cfg) {
    const std::size_t horizon = cfg.horizon.value_or(10'000);
    switch (kind(policy)) {
        case PolicyKind::Stationary:
            return avg_cost_stationary(mdp, std::get<StationaryPolicy<double>>(policy).mu);
        case PolicyKind::Markov:
            return avg_cost_markov(mdp, std::get<MarkovPolicy<double>>(policy), horizon, cfg.tol);
        default:
            throw InvalidArgument("evaluate supports stationary and Markov policies, got " + to_string(kind(policy)));
    }
}

Output cmd_evaluate(const RunConfig& cfg) {
    const FiniteMdp mdp = load_mdp<double>(cfg);
    const Policy<double> policy = load_policy(cfg, mdp);
    const CriteriaReport r = evaluate_policy(mdp, policy, cfg);
    Output out;
    out.report = base_report("evaluate");
    out.report["method"] = to_string(r.method);
    out.report["converged"] = r.converged;
    out.report["ordering_holds"] = r.ordering_holds(cfg.tol);
    if (!r.diagnostics.empty()) out.report["diagnostics"] = r.diagnostics;
    json values, errors;
    for (std::size_t i = 0; i < kNumCriteria; ++i) {
        values[kCriterionNames[i]] = json_numbers(r.value[i]);
        errors[kCriterionNames[i]] = json_numbers(r.est_error[i]);
    }
    out.report["values"] = values;
    out.report["est_error"] = errors;
    out.property_violation = !r.ordering_holds(cfg.tol);

    std::vector<std::string> header{"state"};
    for (const char* name : kCriterionNames) header.emplace_back(name);
    header.emplace_back("method");
    header.emplace_back("est_error");
    CsvTable t(header);
    for (std::size_t x = 0; x < mdp.num_states(); ++x) {
        std::vector<std::string> cells{cell(x)};
        double err = 0.0;
        for (std::size_t i = 0; i < kNumCriteria; ++i) {
            cells.push_back(cell(r.value[i][x]));
            err = std::max(err, r.est_error[i][x]);
        }
        cells.push_back(to_string(r.method));
        cells.push_back(cell(err));
        t.row(std::move(cells));
    }
    out.tables.emplace_back("criteria.csv", std::move(t));
    return out;
}

// ---------------------------------------------------------------- optimize

Output cmd_optimize(const RunConfig& cfg) {
    const FiniteMdp mdp = load_mdp<double>(cfg);
    if (cfg.state >= mdp.num_states()) throw InvalidArgument("--state out of range");
    const GainBiasSolution sol = optimal_gain_pi(mdp);
    const GainInequalityReport ineq = verify_gain_inequality(mdp, sol.g);
    const ConnectedClasses cc = connected_classes(mdp);

    const ReachabilityResult reach = max_reachability(mdp, {cfg.state});
    std::vector<std::size_t> xhat;
    for (std::size_t x = 0; x < mdp.num_states(); ++x)
        if (reach.prob[x] == 1.0) xhat.push_back(x);
    const ConstancyReport cons = constancy_report(mdp, sol.g, {cfg.state}, xhat);

    Output out;
    out.report = base_report("optimize");
    out.report["method"] = to_string(sol.method);
    out.report["g"] = json_numbers(sol.g);
    out.report["h"] = json_numbers(sol.h);
    json names = json::array();
    for (std::size_t x = 0; x < mdp.num_states(); ++x) names.push_back(mdp.action_name(x, sol.policy[x]));
    out.report["policy"] = names;
    out.report["classification"] = {{"kind", cc.weakly_communicating ? "weakly_communicating" : "multichain"},
                                    {"classes", index_sets(cc.classes)},
                                    {"transient", cc.transient}};
    json slacks = json::array();
    for (const auto& s : ineq.slack) slacks.push_back(json_numbers(s));
    out.report["inequality_slacks"] = {{"slack", slacks},
                                       {"verdict", ineq.verdict},
                                       {"per_action_verdict", ineq.per_action_verdict}};
    out.report["constancy"] = {{"ell", json_number(cons.ell)},
                               {"lambda_support", cons.lambda_support},
                               {"xhat", xhat},
                               {"support", cons.support},
                               {"upper_violations", cons.upper_violations},
                               {"verdict", to_string(cons.verdict)}};
    out.property_violation =
        !ineq.verdict || !ineq.per_action_verdict || cons.verdict == ConstancyVerdict::Violated;

    CsvTable t({"state", "g", "h", "action", "min_slack"});
    for (std::size_t x = 0; x < mdp.num_states(); ++x)
        t.row({cell(x), cell(sol.g[x]), cell(sol.h[x]), mdp.action_name(x, sol.policy[x]), cell(ineq.min_slack[x])});
    out.tables.emplace_back("gain.csv", std::move(t));
    return out;
}

// ---------------------------------------------------------------- lp

std::vector<std::size_t> default_levels(const RunConfig& cfg, std::vector<std::size_t> fallback) {
    if (!cfg.Ks.empty()) return cfg.Ks;
    if (cfg.K) return {*cfg.K};
    return fallback;
}

Output lp_sweep(const RunConfig& cfg, const std::vector<std::size_t>& Ks, const std::string& command) {
    const WeightScheme scheme = parse_weight_scheme(cfg.scheme);
    const AbsorbingChain chain = harmonic_chain(AbsorbingCost::Bounded);
    const TruncationStudy study = cfg.exact ? truncation_study(to_countable<Rational>(chain), Ks, scheme)
                                            : truncation_study(to_countable<double>(chain), Ks, scheme);
    Output out;
    out.report = base_report(command);
    out.report["scheme"] = to_string(scheme);
    json rows = json::array();
    CsvTable t({"K", "status", "min_mass", "pivots", "mode"});
    for (const auto& r : study.rows) {
        rows.push_back({{"K", r.K},
                        {"status", to_string(r.status)},
                        {"min_mass", json_number(r.min_mass)},
                        {"pivots", r.pivots},
                        {"mode", r.mode},
                        {"nu1", json_number(r.nu1)},
                        {"nu_bound_holds", r.nu_bound_holds}});
        t.row({cell(r.K), to_string(r.status), cell(r.min_mass), cell(r.pivots), r.mode});
    }
    out.report["rows"] = rows;
    out.report["increments"] = json_numbers(study.increments);
    out.report["strictly_increasing"] = study.strictly_increasing;
    out.report["nu_bound_holds"] = study.nu_bound_holds;
    out.report["doublings"] = study.doublings;
    out.report["divergence_verdict"] = study.divergence_verdict;
    if (study.divergence_verdict)
        out.report["verdict"] = "mass diverges: no finite-measure solution";
    out.property_violation = !study.nu_bound_holds;
    out.tables.emplace_back("truncation.csv", std::move(t));
    return out;
}

template <class T>
Output lp_solve(const RunConfig& cfg) {
    const BasicFiniteMdp<T> mdp = load_mdp<T>(cfg);
    const Policy<T> policy = load_policy(cfg, mdp);
    const Matrix<T> P = induced_matrix(mdp, require_stationary(policy, "lp solve"));
    const LpProgram<T> lp = build_lp(P, make_weights<T>(parse_weight_scheme(cfg.scheme), mdp.num_states()));
    const LpOutcome<T> r = solve_lp(lp);

    Output out;
    out.report = base_report("lp");
    out.report["mode"] = ScalarTraits<T>::exact ? "exact" : "float";
    out.report["status"] = to_string(r.status);
    out.report["pivots"] = r.pivots;
    auto as_doubles = [](const std::vector<T>& v) {
        std::vector<double> d;
        for (const T& x : v) d.push_back(to_double(x));
        return d;
    };
    if (r.status == LpStatus::Feasible) {
        out.report["objective"] = json_number(to_double(*r.objective));
        out.report["gamma"] = json_numbers(as_doubles(r.gamma));
        out.report["nu"] = json_numbers(as_doubles(r.nu));
        out.report["residual"] = json_number(lp_residual(lp, r.gamma, r.nu));
        CsvTable t({"state", "gamma", "nu"});
        for (std::size_t k = 0; k < lp.n_states; ++k) t.row({cell(k), cell(to_double(r.gamma[k])), cell(to_double(r.nu[k]))});
        out.tables.emplace_back("lp_solution.csv", std::move(t));
    } else if (r.status == LpStatus::Infeasible) {
        out.report["farkas"] = json_numbers(as_doubles(r.farkas));
        out.report["farkas_verified"] = verify_farkas(lp, r.farkas);
    }
    return out;
}

Output cmd_lp(const RunConfig& cfg) {
    if (cfg.target == "sweep") return lp_sweep(cfg, default_levels(cfg, {10, 20, 40, 80}), "lp");
    if (cfg.target == "solve") return cfg.exact ? lp_solve<Rational>(cfg) : lp_solve<double>(cfg);
    throw InvalidArgument("lp expects 'sweep' or 'solve', got '" + cfg.target + "'");
}

// ---------------------------------------------------------------- simulate

Output cmd_simulate(const RunConfig& cfg) {
    const FiniteMdp mdp = load_mdp<double>(cfg);
    const Policy<double> policy = load_policy(cfg, mdp);
    const std::size_t n_traj = cfg.n_traj.value_or(100);
    const std::size_t horizon = cfg.horizon.value_or(10'000);
    const SimulationEstimate est = simulate_pathwise(mdp, policy, cfg.state, n_traj, horizon, cfg.seed);
    Output out;
    out.report = base_report("simulate");
    out.report["seed"] = cfg.seed;
    out.report["state"] = cfg.state;
    out.report["n_traj"] = n_traj;
    out.report["horizon"] = horizon;
    out.report["window"] = est.window;
    out.report["window_spread"] = json_number(est.window_spread);
    CsvTable t({"criterion", "mean", "std_error"});
    for (std::size_t i = 0; i < 4; ++i) {
        const std::string name = kCriterionNames[4 + i];
        out.report["estimates"][name] = {{"mean", json_number(est.mean[i])}, {"std_error", json_number(est.std_error[i])}};
        t.row({name, cell(est.mean[i]), cell(est.std_error[i])});
    }
    out.tables.emplace_back("simulation.csv", std::move(t));
    return out;
}

// ---------------------------------------------------------------- reproduce

AbsorbingCost parse_cost(const std::string& name) {
    if (name == "linear") return AbsorbingCost::Linear;
    if (name == "bounded") return AbsorbingCost::Bounded;
    throw InvalidArgument("unknown cost '" + name + "' (expected linear or bounded)");
}

Output reproduce_absorbing(const RunConfig& cfg) {
    const AbsorbingCost cost = parse_cost(cfg.cost);
    const std::size_t K = cfg.K.value_or(50);
    const std::size_t horizon = cfg.horizon.value_or(100);
    const AbsorbingReport rep = absorbing_chain_report(cost, K, horizon);

    constexpr std::size_t kProbeState = 5;
    constexpr std::size_t kProbeSum = 1'000'000;
    const double partial = survival_partial_sum(kProbeState, kProbeSum);
    const double lower = 5.0 * std::log(static_cast<double>(kProbeSum) / 5.0);

    std::vector<std::size_t> levels;
    for (std::size_t L = 10; L <= K; L *= 2) levels.push_back(L);
    if (levels.empty() || levels.back() != K) levels.push_back(K);
    const TruncatedHittingTimes tht =
        truncated_hitting_times(to_countable<double>(harmonic_chain(cost)), kProbeState, {0}, levels);

    Output out;
    out.report = base_report("reproduce");
    out.report["example"] = "absorbing-chain";
    out.report["cost"] = to_string(cost);
    out.report["K"] = K;
    out.report["horizon"] = horizon;
    out.report["expected_cost_identity"] = rep.expected_cost_identity;
    out.report["max_abs_truncated_gain"] = json_number(rep.max_abs_truncated_gain);
    out.report["truncated_gain_within_bound"] = rep.truncated_gain_within_bound;
    out.report["hitting_time_divergence"] = {{"k", kProbeState},
                                             {"N", kProbeSum},
                                             {"partial_sum", json_number(partial)},
                                             {"lower_bound", json_number(lower)},
                                             {"exceeds", partial > lower},
                                             {"truncation_levels", tht.levels},
                                             {"truncated_expected_times", json_numbers(tht.values)},
                                             {"monotone_growth", tht.monotone_growth}};
    out.property_violation = !rep.expected_cost_identity || !(partial > lower) ||
                             (cost == AbsorbingCost::Bounded && !rep.truncated_gain_within_bound);

    CsvTable t({"k", "g_closed_form", "expected_cost_at_horizon", "g_truncated", "hitting_prob",
                "hitting_time_truncated", "survival_partial_sum"});
    for (const auto& r : rep.rows)
        t.row({cell(r.k), cell(r.g_closed_form), cell(r.expected_cost_at_horizon), cell(r.g_truncated),
               cell(r.hitting_prob), cell(r.hitting_time_truncated), cell(r.survival_partial)});
    out.tables.emplace_back("g_table.csv", std::move(t));
    return out;
}

Output reproduce_walk(const RunConfig& cfg) {
    const std::size_t horizon = cfg.horizon.value_or(1'000'000);
    const std::size_t n_traj = cfg.n_traj.value_or(100);
    struct Config {
        const char* name;
        InventoryWalk walk;
    };
    const std::vector<Config> configs = {
        {"zero-drift", InventoryWalk{DemandKind::TwoPoint, 1.0, 0.5, 0.0}},
        {"zero-drift-spread", InventoryWalk{DemandKind::Uniform, 1.0, 0.5, 0.0}},
        {"positive-drift", InventoryWalk{DemandKind::TwoPoint, 1.0, 0.5, 1.0}},
    };
    Output out;
    out.report = base_report("reproduce");
    out.report["example"] = "inventory-walk";
    out.report["interval"] = {-1.0, 1.0};
    out.report["start"] = cfg.start;
    out.report["seed"] = cfg.seed;
    CsvTable t({"configuration", "demand", "action_shift", "n_traj", "horizon", "hits", "estimate", "std_error"});
    for (const auto& c : configs) {
        const RecurrenceProbe p = walk_recurrence_probe(c.walk, -1.0, 1.0, cfg.start, n_traj, horizon, cfg.seed);
        out.report["probes"][c.name] = {{"hits", p.hits},
                                        {"estimate", json_number(p.estimate)},
                                        {"std_error", json_number(p.std_error)}};
        t.row({c.name, to_string(c.walk.demand), cell(c.walk.action_shift), cell(n_traj), cell(horizon),
               cell(p.hits), cell(p.estimate), cell(p.std_error)});
    }
    out.tables.emplace_back("walk.csv", std::move(t));
    return out;
}

Output reproduce_occupation(const RunConfig& cfg) {
    const std::size_t K = cfg.K.value_or(10);
    const std::size_t horizon = cfg.horizon.value_or(60);
    const ExactMdp mdp = truncate(to_countable<Rational>(harmonic_chain(AbsorbingCost::Bounded)), K);
    if (cfg.state > K) throw InvalidArgument("--state out of range");
    const Policy<Rational> policy = StationaryPolicy<Rational>{uniform_kernel(mdp)};
    const std::size_t n = mdp.num_states();

    std::vector<Rational> point(n, Rational(0));
    point[cfg.state] = 1;
    const std::vector<Rational> spread(n, Rational(1) / Rational(static_cast<long>(n)));
    const auto from_point = occupation_measure(mdp, policy, point, horizon);
    const auto from_spread = occupation_measure(mdp, policy, spread, horizon);

    auto total = [](const OccupationMeasure<Rational>& m) {
        Rational s = m.residual;
        for (const auto& w : m.weights) s += w;
        return s;
    };
    bool dominates = true;
    for (std::size_t x = 0; x < n; ++x)
        if (from_spread.weights[x] < spread[x] / 2) dominates = false;

    Output out;
    out.report = base_report("reproduce");
    out.report["example"] = "occupation-measure";
    out.report["K"] = K;
    out.report["horizon"] = horizon;
    out.report["start"] = cfg.state;
    out.report["residual"] = format_rational(from_point.residual);
    out.report["mass_plus_residual_is_one"] = total(from_point) == 1 && total(from_spread) == 1;
    out.report["start_mass_at_least_half"] = from_point.weights[cfg.state] >= Rational(1, 2);
    out.report["dominates_half_initial"] = dominates;
    out.property_violation = !out.report["mass_plus_residual_is_one"].get<bool>() ||
                             !out.report["start_mass_at_least_half"].get<bool>() || !dominates;
    CsvTable t({"state", "from_start", "from_uniform", "half_uniform"});
    for (std::size_t x = 0; x < n; ++x)
        t.row({cell(x), cell(to_double(from_point.weights[x])), cell(to_double(from_spread.weights[x])),
               cell(to_double(Rational(spread[x] / 2)))});
    out.tables.emplace_back("occupation.csv", std::move(t));
    return out;
}

Output cmd_reproduce(const RunConfig& cfg) {
    const std::string& e = cfg.target;
    if (e == "absorbing-chain" || e == "example-3.2") return reproduce_absorbing(cfg);
    if (e == "occupation-lp" || e == "example-3.3")
        return lp_sweep(cfg, default_levels(cfg, {10, 20, 40, 80, 160}), "reproduce");
    if (e == "inventory-walk" || e == "example-3.4") return reproduce_walk(cfg);
    if (e == "occupation-measure" || e == "example-3.5") return reproduce_occupation(cfg);
    throw InvalidArgument("unknown example '" + e +
                          "' (expected absorbing-chain, occupation-lp, inventory-walk or occupation-measure)");
}

Output dispatch(const RunConfig& cfg) {
    if (!(cfg.tol > 0.0)) throw InvalidArgument("--tol must be positive");
    if (cfg.format != "json" && cfg.format != "csv" && cfg.format != "both")
        throw InvalidArgument("--format must be json, csv or both");
    if (cfg.command == "analyze") return cmd_analyze(cfg);
    if (cfg.command == "evaluate") return cmd_evaluate(cfg);
    if (cfg.command == "optimize") return cmd_optimize(cfg);
    if (cfg.command == "lp") return cmd_lp(cfg);
    if (cfg.command == "simulate") return cmd_simulate(cfg);
    if (cfg.command == "reproduce") return cmd_reproduce(cfg);
    throw InvalidArgument("unknown command '" + cfg.command + "'");
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InvalidArgument("cannot write '" + path.string() + "'");
    f << content;
}

}  // namespace

RunResult run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    RunResult result;
    try {
        Output o = dispatch(config);
        if (config.format != "csv") result.artifacts["report.json"] = dump_report(o.report);
        if (config.format != "json")
            for (const auto& [name, table] : o.tables) result.artifacts[name] = table.str();
        if (config.output_dir.empty()) {
            for (const auto& [name, content] : result.artifacts) {
                if (result.artifacts.size() > 1) out << "# " << name << '\n';
                out << content;
            }
        } else {
            std::filesystem::create_directories(config.output_dir);
            for (const auto& [name, content] : result.artifacts)
                write_file(std::filesystem::path(config.output_dir) / name, content);
        }
        result.exit_code = o.property_violation ? kExitProperty : kExitOk;
        if (o.property_violation) result.error = "property violation detected; see report";
    } catch (const InputError& e) {
        result.exit_code = kExitInput;
        result.error = e.what();
    } catch (const SolverError& e) {
        result.exit_code = kExitSolver;
        result.error = e.what();
    } catch (const PropertyViolation& e) {
        result.exit_code = kExitProperty;
        result.error = e.what();
    } catch (const nlohmann::json::exception& e) {
        result.exit_code = kExitInput;
        result.error = e.what();
    } catch (const std::filesystem::filesystem_error& e) {
        result.exit_code = kExitInput;
        result.error = e.what();
    }
    if (!result.error.empty()) err << "acmdp: " << result.error << '\n';
    return result;
}

int cli_main(int argc, char** argv) {
    CLI::App app{"Average-cost MDP toolkit"};
    app.require_subcommand(1);
    RunConfig cfg;
    std::size_t horizon = 0, K = 0, n_traj = 0;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--tol", cfg.tol, "Tolerance for verification and estimation")->capture_default_str();
        sub->add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();
        sub->add_option("--horizon", horizon, "Horizon (stages)");
        sub->add_option("--K", K, "Truncation level");
        sub->add_option("--format", cfg.format, "json, csv or both")->capture_default_str();
        sub->add_option("--out", cfg.output_dir, "Output directory (default: stdout)");
    };
    auto with_policy = [&](CLI::App* sub) {
        sub->add_option("--policy", cfg.policy_path, "Policy JSON (default: uniform stationary)");
    };

    auto* analyze = app.add_subcommand("analyze", "Structure of an MDP and of the chain of a stationary policy");
    analyze->add_option("mdp", cfg.input_path, "MDP JSON")->required();
    analyze->add_option("--drift", cfg.drift_path, "Drift certificate JSON {w, beta, b}");
    with_policy(analyze);
    common(analyze);

    auto* evaluate = app.add_subcommand("evaluate", "All eight average-cost criteria of a policy");
    evaluate->add_option("mdp", cfg.input_path, "MDP JSON")->required();
    with_policy(evaluate);
    common(evaluate);

    auto* optimize = app.add_subcommand("optimize", "Optimal gain, bias and structural checks");
    optimize->add_option("mdp", cfg.input_path, "MDP JSON")->required();
    optimize->add_option("--state", cfg.state, "State carrying lambda for the constancy check")->capture_default_str();
    common(optimize);

    auto* lp = app.add_subcommand("lp", "Occupation-measure linear program");
    lp->add_option("mode", cfg.target, "sweep or solve")->required();
    lp->add_option("mdp", cfg.input_path, "MDP JSON (solve)");
    lp->add_option("--Ks", cfg.Ks, "Truncation levels (sweep)")->delimiter(',');
    lp->add_option("--scheme", cfg.scheme, "geometric or uniform weights")->capture_default_str();
    lp->add_flag("--exact", cfg.exact, "Exact rational arithmetic");
    with_policy(lp);
    common(lp);

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimate of the pathwise criteria");
    simulate->add_option("mdp", cfg.input_path, "MDP JSON")->required();
    simulate->add_option("--state", cfg.state, "Start state")->capture_default_str();
    simulate->add_option("--n-traj", n_traj, "Number of trajectories");
    with_policy(simulate);
    common(simulate);

    auto* reproduce = app.add_subcommand("reproduce", "Worked examples");
    reproduce->add_option("example", cfg.target,
                          "absorbing-chain, occupation-lp, inventory-walk, occupation-measure")
        ->required();
    reproduce->add_option("--cost", cfg.cost, "linear or bounded (absorbing-chain)")->capture_default_str();
    reproduce->add_option("--Ks", cfg.Ks, "Truncation levels (occupation-lp)")->delimiter(',');
    reproduce->add_option("--scheme", cfg.scheme, "geometric or uniform weights")->capture_default_str();
    reproduce->add_flag("--exact", cfg.exact, "Exact rational arithmetic (occupation-lp)");
    reproduce->add_option("--state", cfg.state, "Start state (occupation-measure)")->capture_default_str();
    reproduce->add_option("--start", cfg.start, "Start point (inventory-walk)")->capture_default_str();
    reproduce->add_option("--n-traj", n_traj, "Number of trajectories (inventory-walk)");
    common(reproduce);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    }
    cfg.command = app.get_subcommands().front()->get_name();
    const CLI::App* sub = app.get_subcommands().front();
    if (sub->count("--horizon")) cfg.horizon = horizon;
    if (sub->count("--K")) cfg.K = K;
    if (sub->get_option_no_throw("--n-traj") && sub->count("--n-traj")) cfg.n_traj = n_traj;
    return run(cfg, std::cout, std::cerr).exit_code;
}

}  // namespace acmdp
