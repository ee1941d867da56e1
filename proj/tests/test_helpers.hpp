#pragma once

// Shared helpers for the test binaries. The path enumeration here is the
// independent reference for everything routing claims about shortest paths:
// it brute-forces every simple path instead of reusing the library's
// Dijkstra.

#include <optional>
#include <string>
#include <vector>

#include "swarmlab/graph.hpp"
#include "swarmlab/rng.hpp"
#include "swarmlab/routing.hpp"

namespace testutil {

struct EnumeratedPath {
    std::vector<std::string> nodes;
    double cost{};
    [[nodiscard]] std::string key() const { return swarmlab::encode_path(nodes); }
};

inline void enumerate_rec(const swarmlab::Graph& g, int current, int dst,
                          std::vector<bool>& seen, std::vector<int>& stack,
                          double cost, std::vector<EnumeratedPath>& out) {
    if (current == dst) {
        EnumeratedPath p;
        p.cost = cost;
        for (int n : stack) p.nodes.push_back(g.node_id(n));
        out.push_back(std::move(p));
        return;
    }
    for (int e : g.out_edges(current)) {
        int to = g.edge(e).to;
        if (seen[static_cast<std::size_t>(to)]) continue;
        seen[static_cast<std::size_t>(to)] = true;
        stack.push_back(to);
        enumerate_rec(g, to, dst, seen, stack, cost + g.edge(e).cost, out);
        stack.pop_back();
        seen[static_cast<std::size_t>(to)] = false;
    }
}

// All simple paths from src to dst, depth-first in edge order.
inline std::vector<EnumeratedPath> enumerate_simple_paths(const swarmlab::Graph& g,
                                                          const std::string& src,
                                                          const std::string& dst) {
    int s = g.require_node(src);
    int d = g.require_node(dst);
    std::vector<bool> seen(static_cast<std::size_t>(g.node_count()), false);
    std::vector<int> stack{s};
    seen[static_cast<std::size_t>(s)] = true;
    std::vector<EnumeratedPath> out;
    enumerate_rec(g, s, d, seen, stack, 0.0, out);
    return out;
}

// The unique cheapest enumerated path, or nullopt when it is not unique
// (within the gap) or no path exists.
inline std::optional<EnumeratedPath> unique_min_cost_path(const std::vector<EnumeratedPath>& paths,
                                                          double gap = 1e-6) {
    if (paths.empty()) return std::nullopt;
    std::size_t best = 0;
    for (std::size_t i = 1; i < paths.size(); ++i) {
        if (paths[i].cost < paths[best].cost) best = i;
    }
    for (std::size_t i = 0; i < paths.size(); ++i) {
        if (i != best && paths[i].cost <= paths[best].cost + gap) return std::nullopt;
    }
    return paths[best];
}

// The unique fewest-node enumerated path, or nullopt on ties.
inline std::optional<EnumeratedPath> unique_min_node_path(const std::vector<EnumeratedPath>& paths) {
    if (paths.empty()) return std::nullopt;
    std::size_t best = 0;
    for (std::size_t i = 1; i < paths.size(); ++i) {
        if (paths[i].nodes.size() < paths[best].nodes.size()) best = i;
    }
    for (std::size_t i = 0; i < paths.size(); ++i) {
        if (i != best && paths[i].nodes.size() == paths[best].nodes.size()) return std::nullopt;
    }
    return paths[best];
}

/**
 * Random routing instances for convergence checks. Every instance has 5 to
 * 8 nodes, a guaranteed source-to-target backbone, at least two distinct
 * routes, and one path that is simultaneously the unique cheapest and the
 * unique fewest-node route, so "the shortest path" is unambiguous under
 * either reading.
 */
struct RandomInstance {
    swarmlab::Graph graph;
    std::string source;
    std::string destination;
    EnumeratedPath shortest;
};

inline std::optional<RandomInstance> try_random_instance(swarmlab::Rng& rng) {
    int n = 5 + static_cast<int>(rng.uniform01() * 4.0);
    if (n > 8) n = 8;
    swarmlab::Graph g;
    std::vector<std::string> ids;
    ids.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        ids.push_back("n" + std::to_string(i));
        g.add_node(ids.back());
    }
    const std::string& src = ids.front();
    const std::string& dst = ids.back();

    // Backbone through a random subset of the interior keeps dst reachable.
    std::vector<int> interior;
    for (int i = 1; i + 1 < n; ++i) {
        if (rng.uniform01() < 0.5) interior.push_back(i);
    }
    for (std::size_t i = 0; i + 1 < interior.size(); ++i) {
        std::size_t j = i + static_cast<std::size_t>(rng.uniform01() * (interior.size() - i));
        if (j < interior.size()) std::swap(interior[i], interior[j]);
    }
    int prev = 0;
    for (int mid : interior) {
        g.add_edge(ids[static_cast<std::size_t>(prev)], ids[static_cast<std::size_t>(mid)],
                   1.0 + rng.uniform01() * 9.0);
        prev = mid;
    }
    g.add_edge(ids[static_cast<std::size_t>(prev)], dst, 1.0 + rng.uniform01() * 9.0);

    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j || j == 0 || i == n - 1) continue;
            if (g.find_edge(i, j)) continue;
            if (rng.uniform01() < 0.35) {
                g.add_edge(ids[static_cast<std::size_t>(i)], ids[static_cast<std::size_t>(j)],
                           1.0 + rng.uniform01() * 9.0);
            }
        }
    }

    auto paths = enumerate_simple_paths(g, src, dst);
    if (paths.size() < 2) return std::nullopt;
    auto by_cost = unique_min_cost_path(paths);
    auto by_nodes = unique_min_node_path(paths);
    if (!by_cost || !by_nodes) return std::nullopt;
    if (by_cost->key() != by_nodes->key()) return std::nullopt;

    RandomInstance inst;
    inst.graph = std::move(g);
    inst.source = src;
    inst.destination = dst;
    inst.shortest = *by_cost;
    return inst;
}

inline std::vector<RandomInstance> random_instances(std::uint64_t seed, int count) {
    swarmlab::Rng rng(seed);
    std::vector<RandomInstance> out;
    while (static_cast<int>(out.size()) < count) {
        if (auto inst = try_random_instance(rng)) out.push_back(std::move(*inst));
    }
    return out;
}

} // namespace testutil
