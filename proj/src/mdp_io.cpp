#include "acmdp/mdp_io.hpp"

#include <cmath>
#include <map>
#include <set>

namespace acmdp {

using nlohmann::json;

namespace {

template <class T>
T read_scalar(const json& v, const std::string& where) {
    if (v.is_number()) {
        const double d = v.get<double>();
        if (!std::isfinite(d)) throw NonFiniteCost(where + ": non-finite number");
        return ScalarTraits<T>::from_double(d);
    }
    if (v.is_string()) {
        const Rational r = parse_rational(v.get<std::string>());
        if constexpr (ScalarTraits<T>::exact) return r;
        else return to_double(r);
    }
    throw ParseError(where + ": expected a number or a rational string");
}

template <class T>
json write_scalar(const T& v) {
    if constexpr (ScalarTraits<T>::exact) return format_rational(v);
    else return v;
}

std::string action_id(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    throw ParseError("action identifiers must be strings or integers");
}

template <class T>
StationaryKernel<T> read_kernel(const json& rows, const BasicFiniteMdp<T>& mdp) {
    if (!rows.is_array() || rows.size() != mdp.num_states())
        throw PolicySupportError("kernel must be an array with one row per state");
    StationaryKernel<T> mu(mdp.num_states());
    for (std::size_t x = 0; x < mdp.num_states(); ++x) {
        if (!rows[x].is_array()) throw PolicySupportError("kernel row must be an array");
        for (const auto& p : rows[x]) mu[x].push_back(read_scalar<T>(p, "mu"));
    }
    validate_kernel(mdp, mu);
    return mu;
}

}  // namespace

template <class T>
BasicFiniteMdp<T> validate_mdp(const json& doc) {
    if (!doc.is_object()) throw ParseError("MDP document must be a JSON object");
    static const std::set<std::string> known{"n_states", "actions", "q", "c"};
    for (const auto& [key, _] : doc.items())
        if (!known.count(key)) throw UnknownKey("unknown key '" + key + "'");
    for (const auto& key : known)
        if (!doc.contains(key)) throw ParseError("missing key '" + key + "'");

    if (!doc["n_states"].is_number_integer() || doc["n_states"].get<long long>() < 1)
        throw ParseError("n_states must be a positive integer");
    const auto n = static_cast<std::size_t>(doc["n_states"].get<long long>());
    const json& actions = doc["actions"];
    if (!actions.is_array() || actions.size() != n)
        throw DimensionMismatch("actions must list one array per state");

    std::vector<std::vector<ActionData<T>>> states(n);
    std::map<std::string, std::pair<std::size_t, std::size_t>> index;
    for (std::size_t x = 0; x < n; ++x) {
        if (!actions[x].is_array()) throw ParseError("actions[" + std::to_string(x) + "] must be an array");
        if (actions[x].empty())
            throw EmptyActionSet("state " + std::to_string(x) + " has no admissible action");
        for (const auto& id : actions[x]) {
            ActionData<T> act;
            act.name = action_id(id);
            const std::string key = std::to_string(x) + "," + act.name;
            if (index.count(key)) throw ParseError("duplicate action '" + act.name + "' at state " + std::to_string(x));
            index[key] = {x, states[x].size()};
            states[x].push_back(std::move(act));
        }
    }

    auto lookup = [&](const std::string& key, const char* what) {
        const auto it = index.find(key);
        if (it == index.end()) throw ParseError(std::string(what) + " entry '" + key + "' is not an admissible pair");
        return it->second;
    };
    const json& q = doc["q"];
    const json& c = doc["c"];
    if (!q.is_object() || !c.is_object()) throw ParseError("q and c must be objects keyed by \"x,a\"");
    if (q.size() != index.size() || c.size() != index.size())
        throw ParseError("q and c must have exactly one entry per admissible pair");
    for (const auto& [key, row] : q.items()) {
        const auto [x, a] = lookup(key, "q");
        if (!row.is_array()) throw ParseError("q['" + key + "'] must be an array");
        for (const auto& p : row) states[x][a].next.push_back(read_scalar<T>(p, "q['" + key + "']"));
    }
    for (const auto& [key, v] : c.items()) {
        const auto [x, a] = lookup(key, "c");
        if (v.is_null()) throw NonFiniteCost("c['" + key + "'] is not finite");
        states[x][a].cost = read_scalar<T>(v, "c['" + key + "']");
    }
    return BasicFiniteMdp<T>(std::move(states));
}

template <class T>
BasicFiniteMdp<T> parse_mdp(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    return validate_mdp<T>(doc);
}

template <class T>
json mdp_to_json(const BasicFiniteMdp<T>& mdp) {
    json doc;
    doc["n_states"] = mdp.num_states();
    json actions = json::array();
    json q = json::object();
    json c = json::object();
    for (std::size_t x = 0; x < mdp.num_states(); ++x) {
        json ids = json::array();
        for (std::size_t a = 0; a < mdp.num_actions(x); ++a) {
            ids.push_back(mdp.action_name(x, a));
            const std::string key = std::to_string(x) + "," + mdp.action_name(x, a);
            json row = json::array();
            for (const T& p : mdp.transition(x, a)) row.push_back(write_scalar(p));
            q[key] = row;
            c[key] = write_scalar(mdp.cost(x, a));
        }
        actions.push_back(ids);
    }
    doc["actions"] = actions;
    doc["q"] = q;
    doc["c"] = c;
    return doc;
}

template <class T>
Policy<T> parse_policy(const json& doc, const BasicFiniteMdp<T>& mdp) {
    if (!doc.is_object() || !doc.contains("kind") || !doc["kind"].is_string())
        throw ParseError("policy document needs a string 'kind'");
    const std::string kind = doc["kind"].get<std::string>();
    if (kind == "stationary") {
        if (!doc.contains("mu")) throw ParseError("stationary policy needs 'mu'");
        return StationaryPolicy<T>{read_kernel<T>(doc["mu"], mdp)};
    }
    if (kind == "deterministic") {
        if (!doc.contains("actions") || !doc["actions"].is_array() || doc["actions"].size() != mdp.num_states())
            throw PolicySupportError("deterministic policy needs one action per state");
        std::vector<std::size_t> choice(mdp.num_states());
        for (std::size_t x = 0; x < mdp.num_states(); ++x) {
            const std::string id = action_id(doc["actions"][x]);
            std::size_t a = 0;
            while (a < mdp.num_actions(x) && mdp.action_name(x, a) != id) ++a;
            if (a == mdp.num_actions(x))
                throw PolicySupportError("action '" + id + "' is not admissible at state " + std::to_string(x));
            choice[x] = a;
        }
        return StationaryPolicy<T>{deterministic_kernel(mdp, std::span<const std::size_t>(choice))};
    }
    if (kind == "markov") {
        MarkovPolicy<T> mp;
        if (doc.contains("prefix"))
            for (const auto& k : doc["prefix"]) mp.prefix.push_back(read_kernel<T>(k, mdp));
        if (!doc.contains("cycle") || !doc["cycle"].is_array() || doc["cycle"].empty())
            throw PolicySupportError("Markov policy needs a nonempty 'cycle'");
        for (const auto& k : doc["cycle"]) mp.cycle.push_back(read_kernel<T>(k, mdp));
        return mp;
    }
    throw ParseError("unsupported policy kind '" + kind + "'");
}

template BasicFiniteMdp<double> validate_mdp<double>(const json&);
template BasicFiniteMdp<Rational> validate_mdp<Rational>(const json&);
template BasicFiniteMdp<double> parse_mdp<double>(const std::string&);
template BasicFiniteMdp<Rational> parse_mdp<Rational>(const std::string&);
template json mdp_to_json<double>(const BasicFiniteMdp<double>&);
template json mdp_to_json<Rational>(const BasicFiniteMdp<Rational>&);
template Policy<double> parse_policy<double>(const json&, const BasicFiniteMdp<double>&);
template Policy<Rational> parse_policy<Rational>(const json&, const BasicFiniteMdp<Rational>&);

}  // namespace acmdp
