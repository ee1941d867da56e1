#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <queue>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "swarmlab/csv.hpp"
#include "swarmlab/errors.hpp"
#include "swarmlab/graph.hpp"
#include "swarmlab/pheromone.hpp"
#include "swarmlab/rng.hpp"

namespace swarmlab {

// ---------------------------------------------------------------------------
// Path encoding
// ---------------------------------------------------------------------------

// Canonical key for a node sequence: ids joined by '-'. Node ids may not
// contain '-', so the encoding is injective.
[[nodiscard]] inline std::string encode_path(std::span<const std::string> nodes) {
    std::string out;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (i > 0) out += '-';
        out += nodes[i];
    }
    return out;
}

[[nodiscard]] inline std::vector<std::string> split_path(std::string_view path) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        std::size_t dash = path.find('-', start);
        if (dash == std::string_view::npos) {
            parts.emplace_back(path.substr(start));
            break;
        }
        parts.emplace_back(path.substr(start, dash - start));
        start = dash + 1;
    }
    return parts;
}

// A path key is well formed when it names at least two non-empty ids.
inline void validate_path_key(std::string_view path) {
    auto parts = split_path(path);
    if (parts.size() < 2) {
        throw ValidationError("path '" + std::string(path) + "' must name at least two nodes");
    }
    for (const auto& p : parts) {
        if (p.empty()) {
            throw ValidationError("path '" + std::string(path) + "' contains an empty node id");
        }
    }
}

[[nodiscard]] inline int path_node_count(std::string_view path) {
    return static_cast<int>(split_path(path).size());
}

// ---------------------------------------------------------------------------
// Path-keyed pheromone table
// ---------------------------------------------------------------------------

struct PathRecord {
    std::string path;
    double strength{};

    bool operator==(const PathRecord&) const = default;
};

/**
 * Append-only table of (path, strength) rows, keyed by the canonical path
 * string. Paths are unique; updates that mention a known path fold into its
 * row, unknown paths append. Row order therefore records discovery order,
 * which the tie rules below rely on.
 */
class PathTable {
public:
    [[nodiscard]] int count() const { return static_cast<int>(records_.size()); }
    [[nodiscard]] const PathRecord& record(int i) const { return records_.at(static_cast<std::size_t>(i)); }
    [[nodiscard]] const std::vector<PathRecord>& records() const { return records_; }

    [[nodiscard]] std::optional<int> find(std::string_view path) const {
        for (std::size_t i = 0; i < records_.size(); ++i) {
            if (records_[i].path == path) return static_cast<int>(i);
        }
        return std::nullopt;
    }

    // Used by the update operations below; appending an existing path would
    // break uniqueness, so it throws.
    void append(PathRecord rec) {
        if (find(rec.path)) throw ValidationError("path already recorded: " + rec.path);
        if (!(rec.strength >= 0.0) || !std::isfinite(rec.strength)) {
            throw ValidationError("record strength must be a finite value >= 0");
        }
        records_.push_back(std::move(rec));
    }

    void set_strength(int i, double strength) {
        if (!std::isfinite(strength) || strength < 0.0) {
            throw ValidationError("record strength must be a finite value >= 0");
        }
        records_.at(static_cast<std::size_t>(i)).strength = strength;
    }

    bool operator==(const PathTable&) const = default;

private:
    std::vector<PathRecord> records_;
};

// One evaporation round over every row: strength *= (1 - p).
[[nodiscard]] inline PathTable evaporate_table(PathTable table, double p) {
    for (int i = 0; i < table.count(); ++i) {
        table.set_strength(i, evaporation_update(table.record(i).strength, p));
    }
    return table;
}

// Age-weighted deposit for a finished walk: the known row gains
// agefactor^hops, an unknown path is appended with that strength. `hops` is
// the walker's own move counter and is deliberately not checked against the
// path; the table treats the key as opaque.
[[nodiscard]] inline PathTable record_path_aged(PathTable table, std::string_view path,
                                                int hops, double agefactor) {
    validate_path_key(path);
    double add = aging_deposit(agefactor, hops);
    if (auto i = table.find(path)) {
        table.set_strength(*i, table.record(*i).strength + add);
    } else {
        table.append(PathRecord{std::string(path), add});
    }
    return table;
}

// Smoothed deposit: the known row moves toward tau_max by factor delta, an
// unknown path is appended with delta * tau_max (the same rule applied to a
// zero-strength row).
[[nodiscard]] inline PathTable record_path_smoothed(PathTable table, std::string_view path,
                                                    double delta, double tau_max) {
    validate_path_key(path);
    if (auto i = table.find(path)) {
        table.set_strength(*i, smoothing_update(table.record(*i).strength, delta, tau_max));
    } else {
        table.append(PathRecord{std::string(path), smoothing_update(0.0, delta, tau_max)});
    }
    return table;
}

// Adds one unit of strength to the row whose path has the fewest nodes.
// The scan keeps the first minimum, so ties go to the earliest record.
[[nodiscard]] inline PathTable reinforce_shortest(PathTable table) {
    if (table.count() == 0) throw ValidationError("cannot reinforce an empty table");
    int best = 0;
    int best_nodes = path_node_count(table.record(0).path);
    for (int i = 1; i < table.count(); ++i) {
        int n = path_node_count(table.record(i).path);
        if (n < best_nodes) {
            best = i;
            best_nodes = n;
        }
    }
    table.set_strength(best, table.record(best).strength + 1.0);
    return table;
}

// ---------------------------------------------------------------------------
// Ant walks
// ---------------------------------------------------------------------------

enum class UpdateMode { evaporation, aging, smoothing };

[[nodiscard]] inline std::string_view update_mode_name(UpdateMode m) {
    switch (m) {
        case UpdateMode::evaporation: return "evaporation";
        case UpdateMode::aging: return "aging";
        case UpdateMode::smoothing: return "smoothing";
    }
    throw ValidationError("unknown update mode");
}

[[nodiscard]] inline UpdateMode parse_update_mode(std::string_view name) {
    if (name == "evaporation") return UpdateMode::evaporation;
    if (name == "aging") return UpdateMode::aging;
    if (name == "smoothing") return UpdateMode::smoothing;
    throw ValidationError("update_mode must be one of evaporation, aging, smoothing; got '" +
                          std::string(name) + "'");
}

/**
 * Colony settings.
 *
 *   max_walk_length     hop budget per ant; 0 means "number of nodes", which
 *                       never truncates a loop-free walk
 *   reinforce_shortest_path  apply the fewest-nodes bonus after every
 *                       recorded walk
 *   initial_pheromone   edge level seen by walkers before any deposit, keeps
 *                       unexplored edges selectable when alpha > 0
 */
struct RoutingConfig {
    std::string source;
    std::string destination;
    int n_ants{10};
    int iterations{100};
    ControlParams control{};
    UpdateMode update_mode{UpdateMode::aging};
    int max_walk_length{0};
    bool reinforce_shortest_path{true};
    double tau_max{100.0};
    double initial_pheromone{1.0};

    void validate(const Graph& graph) const {
        control.validate();
        if (source.empty()) throw ValidationError("source must be set");
        if (destination.empty()) throw ValidationError("destination must be set");
        (void)graph.require_node(source);
        (void)graph.require_node(destination);
        if (source == destination) throw ValidationError("source and destination must differ");
        if (n_ants < 1) throw ValidationError("n_ants must be >= 1, got " + std::to_string(n_ants));
        if (iterations < 1) throw ValidationError("iterations must be >= 1, got " + std::to_string(iterations));
        if (max_walk_length < 0) {
            throw ValidationError("max_walk_length must be >= 0, got " + std::to_string(max_walk_length));
        }
        if (tau_max <= 0.0) throw ValidationError("tau_max must be > 0, got " + std::to_string(tau_max));
        if (initial_pheromone < 0.0 || initial_pheromone > tau_max) {
            throw ValidationError("initial_pheromone must lie in [0, tau_max], got " +
                                  std::to_string(initial_pheromone));
        }
    }
};

struct Ant {
    std::string source;
    std::string destination;
    std::vector<std::string> visited; // node ids in walk order, starts at source
    int hops{};                       // == visited.size() - 1

    [[nodiscard]] bool reached() const {
        return !visited.empty() && visited.back() == destination;
    }
    [[nodiscard]] std::string path_key() const { return encode_path(visited); }
};

[[nodiscard]] inline double walk_cost(const Graph& graph, const Ant& ant) {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < ant.visited.size(); ++i) {
        auto e = graph.find_edge(graph.require_node(ant.visited[i]),
                                 graph.require_node(ant.visited[i + 1]));
        if (!e) throw ValidationError("walk uses missing edge " + ant.visited[i] + " -> " + ant.visited[i + 1]);
        total += graph.edge(*e).cost;
    }
    return total;
}

/**
 * One loop-free walk from source toward destination. Each step samples the
 * tau^alpha * eta^beta distribution restricted to edges whose head is still
 * unvisited; a node with no such edge strands the ant (reached() == false).
 */
template <typename R>
[[nodiscard]] Ant run_ant(const Graph& graph, const RoutingConfig& config,
                          const PheromoneStore& store, R& rng) {
    int src = graph.require_node(config.source);
    int dst = graph.require_node(config.destination);
    int max_hops = config.max_walk_length > 0 ? config.max_walk_length : graph.node_count();

    std::vector<bool> seen(static_cast<std::size_t>(graph.node_count()), false);
    std::vector<int> walk{src};
    seen[static_cast<std::size_t>(src)] = true;

    std::vector<int> candidates;
    int current = src;
    while (current != dst && static_cast<int>(walk.size()) - 1 < max_hops) {
        candidates.clear();
        for (int e : graph.out_edges(current)) {
            if (!seen[static_cast<std::size_t>(graph.edge(e).to)]) candidates.push_back(e);
        }
        if (candidates.empty()) break;
        auto dist = detail::normalize_weights(graph, store, config.control, candidates);
        int e = select_edge(dist, rng);
        current = graph.edge(e).to;
        walk.push_back(current);
        seen[static_cast<std::size_t>(current)] = true;
    }

    Ant ant;
    ant.source = config.source;
    ant.destination = config.destination;
    ant.visited.reserve(walk.size());
    for (int n : walk) ant.visited.push_back(graph.node_id(n));
    ant.hops = static_cast<int>(walk.size()) - 1;
    return ant;
}

// ---------------------------------------------------------------------------
// Reference shortest path (minimum total cost)
// ---------------------------------------------------------------------------

struct ShortestPath {
    std::vector<int> nodes;
    double cost{};
};

// Dijkstra with deterministic tie handling: the frontier orders by
// (distance, node index) and relaxations require strict improvement, so the
// predecessor tree is a pure function of the graph.
[[nodiscard]] inline std::optional<ShortestPath> shortest_path_by_cost(const Graph& graph,
                                                                       int src, int dst) {
    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(static_cast<std::size_t>(graph.node_count()), kInf);
    std::vector<int> prev(static_cast<std::size_t>(graph.node_count()), -1);
    using Entry = std::pair<double, int>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> frontier;
    dist[static_cast<std::size_t>(src)] = 0.0;
    frontier.emplace(0.0, src);
    while (!frontier.empty()) {
        auto [d, n] = frontier.top();
        frontier.pop();
        if (d > dist[static_cast<std::size_t>(n)]) continue;
        for (int e : graph.out_edges(n)) {
            const auto& edge = graph.edge(e);
            double nd = d + edge.cost;
            if (nd < dist[static_cast<std::size_t>(edge.to)]) {
                dist[static_cast<std::size_t>(edge.to)] = nd;
                prev[static_cast<std::size_t>(edge.to)] = n;
                frontier.emplace(nd, edge.to);
            }
        }
    }
    if (dist[static_cast<std::size_t>(dst)] == kInf) return std::nullopt;
    ShortestPath sp;
    sp.cost = dist[static_cast<std::size_t>(dst)];
    for (int n = dst; n != -1; n = prev[static_cast<std::size_t>(n)]) sp.nodes.push_back(n);
    std::reverse(sp.nodes.begin(), sp.nodes.end());
    return sp;
}

// ---------------------------------------------------------------------------
// Colony loop
// ---------------------------------------------------------------------------

struct IterationStat {
    int iteration{};
    std::string best_path;
    double best_strength{};
    double shortest_frequency{};
    int table_size{};

    bool operator==(const IterationStat&) const = default;
};

struct RoutingReport {
    std::vector<IterationStat> series;
    std::vector<PathTable> snapshots; // table state at the end of each iteration
    std::string shortest_path;        // min-cost reference, empty when unreachable
    double shortest_cost{std::numeric_limits<double>::infinity()};
    std::string best_path;
    double best_strength{};
    double final_shortest_frequency{};
    int successful_ants{};

    bool operator==(const RoutingReport&) const = default;
};

namespace detail {

// Edge view of the table: every record adds its strength to each edge on
// its path, on top of the configured baseline. Walk decisions read this
// store; the table itself stays path-keyed.
inline PheromoneStore project_store(const Graph& graph, const PathTable& table,
                                    const RoutingConfig& config) {
    PheromoneStore store(graph, config.initial_pheromone, 0.0, config.tau_max);
    for (const auto& rec : table.records()) {
        auto ids = split_path(rec.path);
        for (std::size_t i = 0; i + 1 < ids.size(); ++i) {
            auto e = graph.find_edge(graph.require_node(ids[i]), graph.require_node(ids[i + 1]));
            if (!e) {
                throw ValidationError("recorded path uses missing edge " + ids[i] + " -> " + ids[i + 1]);
            }
            store.deposit(*e, rec.strength);
        }
    }
    return store;
}

inline PathTable deposit_walk(PathTable table, const Ant& ant, const RoutingConfig& config) {
    switch (config.update_mode) {
        case UpdateMode::evaporation:
            // Plain completion bonus; decay alone shapes the table over time.
            return record_path_aged(std::move(table), ant.path_key(), ant.hops, 1.0);
        case UpdateMode::aging:
            return record_path_aged(std::move(table), ant.path_key(), ant.hops, config.control.agefactor);
        case UpdateMode::smoothing:
            return record_path_smoothed(std::move(table), ant.path_key(), config.control.delta,
                                        config.tau_max);
    }
    throw ValidationError("unknown update mode");
}

} // namespace detail

/**
 * Runs the full colony. Each iteration launches n_ants walks against the
 * table as it stood at the start of the iteration and folds every finished
 * walk into the table; table maintenance (the fewest-nodes bonus) runs as
 * part of handling each walk report, so its weight scales with colony
 * traffic and no burst of long-path deposits can outvote it. One evaporation
 * round closes the iteration. Identical (graph, config, seed) inputs give
 * identical reports.
 */
[[nodiscard]] inline RoutingReport run_colony(const Graph& graph, const RoutingConfig& config,
                                              std::uint64_t seed) {
    config.validate(graph);
    Rng rng(seed);
    int src = graph.require_node(config.source);
    int dst = graph.require_node(config.destination);

    RoutingReport report;
    auto shortest = shortest_path_by_cost(graph, src, dst);
    if (shortest) {
        std::vector<std::string> ids;
        ids.reserve(shortest->nodes.size());
        for (int n : shortest->nodes) ids.push_back(graph.node_id(n));
        report.shortest_path = encode_path(ids);
        report.shortest_cost = shortest->cost;
    }

    PathTable table;
    for (int iter = 1; iter <= config.iterations; ++iter) {
        PheromoneStore store = detail::project_store(graph, table, config);

        int on_shortest = 0;
        for (int a = 0; a < config.n_ants; ++a) {
            Ant ant = run_ant(graph, config, store, rng);
            if (!ant.reached()) continue;
            ++report.successful_ants;
            if (shortest && std::abs(walk_cost(graph, ant) - shortest->cost) <= 1e-9) {
                ++on_shortest;
            }
            table = detail::deposit_walk(std::move(table), ant, config);
            if (config.reinforce_shortest_path) {
                table = reinforce_shortest(std::move(table));
                if (config.update_mode == UpdateMode::smoothing) {
                    // The +1 bonus may overshoot the smoothing ceiling;
                    // strengths are bounded by tau_max in this mode, so cap
                    // the boosted row.
                    for (int i = 0; i < table.count(); ++i) {
                        if (table.record(i).strength > config.tau_max) {
                            table.set_strength(i, config.tau_max);
                        }
                    }
                }
            }
        }
        table = evaporate_table(std::move(table), config.control.p);

        IterationStat stat;
        stat.iteration = iter;
        stat.table_size = table.count();
        stat.shortest_frequency = static_cast<double>(on_shortest) / config.n_ants;
        // Strict > keeps the earliest record on ties.
        for (int i = 0; i < table.count(); ++i) {
            if (stat.best_path.empty() || table.record(i).strength > stat.best_strength) {
                stat.best_strength = table.record(i).strength;
                stat.best_path = table.record(i).path;
            }
        }
        report.series.push_back(stat);
        report.snapshots.push_back(table);
    }

    if (!report.series.empty()) {
        const auto& last = report.series.back();
        report.best_path = last.best_path;
        report.best_strength = last.best_strength;
        report.final_shortest_frequency = last.shortest_frequency;
    }
    return report;
}

// One row per iteration: iteration,best_path,best_strength,shortest_frequency,table_size
inline void write_routing_csv(const RoutingReport& report, std::ostream& os) {
    os << "iteration,best_path,best_strength,shortest_frequency,table_size\n";
    for (const auto& s : report.series) {
        csv_row(os, s.iteration, s.best_path, s.best_strength, s.shortest_frequency, s.table_size);
    }
}

} // namespace swarmlab
