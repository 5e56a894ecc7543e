#pragma once

#include <string>

#include "json.hpp"

#include "acmdp/mdp.hpp"
#include "acmdp/policy.hpp"

namespace acmdp {

/**
 * Parses and validates an MDP document:
 *
 *     {"n_states": 2,
 *      "actions": [["stay", "go"], ["stay"]],
 *      "q": {"0,stay": [1, 0], "0,go": ["1/3", "2/3"], "1,stay": [0, 1]},
 *      "c": {"0,stay": 1, "0,go": 0, "1,stay": "1/2"}}
 *
 * Probabilities and costs are JSON numbers or strings holding an exact
 * rational ("p/q" or a decimal literal). Unknown keys are rejected.
 */
template <class T>
BasicFiniteMdp<T> validate_mdp(const nlohmann::json& doc);

template <class T>
BasicFiniteMdp<T> parse_mdp(const std::string& text);

/// Inverse of validate_mdp. Doubles are written as JSON numbers (shortest
/// round-trip form), rationals as "p/q" strings.
template <class T>
nlohmann::json mdp_to_json(const BasicFiniteMdp<T>& mdp);

/**
 * Policy documents:
 *
 *     {"kind": "stationary", "mu": [[0.5, 0.5], [1]]}
 *     {"kind": "deterministic", "actions": ["go", "stay"]}
 *     {"kind": "markov", "prefix": [mu_0, mu_1], "cycle": [mu_2]}
 *
 * Rows follow the MDP's action order.
 */
template <class T>
Policy<T> parse_policy(const nlohmann::json& doc, const BasicFiniteMdp<T>& mdp);

}  // namespace acmdp
