#include "acmdp/graph.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <numeric>

namespace acmdp {

SccResult strongly_connected_components(const Adjacency& adj) {
    // Iterative Tarjan.
    const std::size_t n = adj.size();
    constexpr std::size_t kUnset = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> index(n, kUnset), low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    SccResult out;
    out.component.assign(n, kUnset);
    std::size_t counter = 0;

    struct Frame {
        std::size_t v;
        std::size_t next_edge;
    };
    std::vector<Frame> call;
    for (std::size_t root = 0; root < n; ++root) {
        if (index[root] != kUnset) continue;
        call.push_back({root, 0});
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call.empty()) {
            Frame& f = call.back();
            const std::size_t v = f.v;
            if (f.next_edge < adj[v].size()) {
                const std::size_t w = adj[v][f.next_edge++];
                if (index[w] == kUnset) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            if (low[v] == index[v]) {
                std::size_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    out.component[w] = out.count;
                } while (w != v);
                ++out.count;
            }
            call.pop_back();
            if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
        }
    }
    return out;
}

std::vector<bool> can_reach(const Adjacency& adj, const std::vector<bool>& targets) {
    const std::size_t n = adj.size();
    Adjacency reverse(n);
    for (std::size_t v = 0; v < n; ++v)
        for (std::size_t w : adj[v]) reverse[w].push_back(v);
    return reachable_from(reverse, targets);
}

std::vector<bool> reachable_from(const Adjacency& adj, const std::vector<bool>& sources) {
    std::vector<bool> seen = sources;
    std::deque<std::size_t> queue;
    for (std::size_t v = 0; v < adj.size(); ++v)
        if (seen[v]) queue.push_back(v);
    while (!queue.empty()) {
        const std::size_t v = queue.front();
        queue.pop_front();
        for (std::size_t w : adj[v])
            if (!seen[w]) {
                seen[w] = true;
                queue.push_back(w);
            }
    }
    return seen;
}

std::size_t scc_period(const Adjacency& adj, const std::vector<std::size_t>& members) {
    if (members.empty()) return 0;
    constexpr std::size_t kUnset = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> level(adj.size(), kUnset);
    std::vector<bool> in(adj.size(), false);
    for (std::size_t v : members) in[v] = true;

    // BFS levels; every intra-class edge (u,v) contributes level(u)+1-level(v).
    std::deque<std::size_t> queue{members.front()};
    level[members.front()] = 0;
    while (!queue.empty()) {
        const std::size_t v = queue.front();
        queue.pop_front();
        for (std::size_t w : adj[v])
            if (in[w] && level[w] == kUnset) {
                level[w] = level[v] + 1;
                queue.push_back(w);
            }
    }
    std::size_t g = 0;
    for (std::size_t v : members)
        for (std::size_t w : adj[v]) {
            if (!in[w]) continue;
            const long diff = static_cast<long>(level[v]) + 1 - static_cast<long>(level[w]);
            g = std::gcd(g, static_cast<std::size_t>(diff < 0 ? -diff : diff));
        }
    return g;
}

}  // namespace acmdp
