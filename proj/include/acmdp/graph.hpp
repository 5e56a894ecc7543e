#pragma once

#include <cstddef>
#include <vector>

namespace acmdp {

using Adjacency = std::vector<std::vector<std::size_t>>;

struct SccResult {
    /// Component index per vertex. Components are numbered in reverse
    /// topological order (sinks first), as produced by Tarjan's algorithm.
    std::vector<std::size_t> component;
    std::size_t count = 0;
};

SccResult strongly_connected_components(const Adjacency& adj);

/// Vertices from which some vertex of `targets` is reachable (targets included).
std::vector<bool> can_reach(const Adjacency& adj, const std::vector<bool>& targets);

/// Vertices reachable from `sources` (sources included).
std::vector<bool> reachable_from(const Adjacency& adj, const std::vector<bool>& sources);

/// gcd of cycle lengths of the subgraph induced on `members`, which must be
/// strongly connected. Returns 0 if the subgraph has no edge.
std::size_t scc_period(const Adjacency& adj, const std::vector<std::size_t>& members);

}  // namespace acmdp
